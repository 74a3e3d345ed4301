#include "cvforge/bundle.hpp"

#include <algorithm>

namespace cvforge {

VectorFieldJet VectorFieldJet::zero(const JetContext& ctx) {
  VectorFieldJet X;
  X.comp.assign(static_cast<size_t>(ctx.m), Jet(ctx));
  return X;
}

VectorFieldJet VectorFieldJet::coordinate(const JetContext& ctx, int i) {
  VectorFieldJet X = zero(ctx);
  X.comp.at(static_cast<size_t>(i)) = Jet::constant(ctx, 1.0);
  return X;
}

VectorFieldJet VectorFieldJet::from_constant(const JetContext& ctx, const Eigen::VectorXcd& v) {
  VectorFieldJet X = zero(ctx);
  for (int i = 0; i < ctx.m; ++i) X.comp[static_cast<size_t>(i)] = Jet::constant(ctx, v(i));
  return X;
}

VectorFieldJet VectorFieldJet::operator+(const VectorFieldJet& o) const {
  VectorFieldJet r = *this;
  for (size_t i = 0; i < comp.size(); ++i) r.comp[i] = comp[i] + o.comp.at(i);
  return r;
}

VectorFieldJet VectorFieldJet::operator-(const VectorFieldJet& o) const {
  VectorFieldJet r = *this;
  for (size_t i = 0; i < comp.size(); ++i) r.comp[i] = comp[i] - o.comp.at(i);
  return r;
}

VectorFieldJet VectorFieldJet::operator*(cd s) const {
  VectorFieldJet r = *this;
  for (auto& c : r.comp) c = c * s;
  return r;
}

Jet VectorFieldJet::apply(const Jet& f) const {
  Jet s(f.context());
  for (int i = 0; i < dim(); ++i) s = s + comp[static_cast<size_t>(i)] * f.derivative(i, true);
  return s;
}

Jet VectorFieldJet::apply_bar(const Jet& f) const {
  Jet s(f.context());
  for (int i = 0; i < dim(); ++i) s = s + comp[static_cast<size_t>(i)].conj() * f.derivative(i, false);
  return s;
}

MatrixJet VectorFieldJet::apply(const MatrixJet& f) const {
  MatrixJet r(f.context(), f.rows(), f.cols());
  for (int a = 0; a < f.rows(); ++a)
    for (int b = 0; b < f.cols(); ++b) r(a, b) = apply(f(a, b));
  return r;
}

MatrixJet VectorFieldJet::apply_bar(const MatrixJet& f) const {
  MatrixJet r(f.context(), f.rows(), f.cols());
  for (int a = 0; a < f.rows(); ++a)
    for (int b = 0; b < f.cols(); ++b) r(a, b) = apply_bar(f(a, b));
  return r;
}

MatrixJet VectorFieldJet::as_column() const {
  MatrixJet c(context(), dim(), 1);
  for (int i = 0; i < dim(); ++i) c(i, 0) = comp[static_cast<size_t>(i)];
  return c;
}

VectorFieldJet VectorFieldJet::from_column(const MatrixJet& col) {
  VectorFieldJet X;
  for (int i = 0; i < col.rows(); ++i) X.comp.push_back(col(i, 0));
  return X;
}

Eigen::VectorXcd VectorFieldJet::constant_term() const {
  Eigen::VectorXcd v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = comp[static_cast<size_t>(i)].constant_term();
  return v;
}

double VectorFieldJet::max_abs() const {
  double m = 0.0;
  for (auto& c : comp) m = std::max(m, c.max_abs());
  return m;
}

double ChartBundle::max_input_magnitude() const {
  double m = 0.0;
  auto upd = [&](const std::optional<MatrixJet>& t) {
    if (t) m = std::max(m, t->max_abs());
  };
  for (auto& c : C) m = std::max(m, c.max_abs());
  upd(U);
  upd(V);
  upd(Q);
  upd(g);
  upd(h);
  upd(kappa);
  for (auto& x : gamma10) m = std::max(m, x.max_abs());
  for (auto& x : gamma01) m = std::max(m, x.max_abs());
  return m;
}

const std::vector<MatrixJet>& ChartBundle::require_C() const {
  if (static_cast<int>(C.size()) != ctx.m) throw Error(ErrorKind::MissingTensor, "C");
  return C;
}

const std::vector<MatrixJet>& ChartBundle::require_gamma10() const {
  if (static_cast<int>(gamma10.size()) != ctx.m) throw Error(ErrorKind::MissingTensor, "Gamma10");
  return gamma10;
}

const MatrixJet& require(const std::optional<MatrixJet>& t, const char* name) {
  if (!t) throw Error(ErrorKind::MissingTensor, name);
  return *t;
}

MatrixJet contract(const std::vector<MatrixJet>& M, const VectorFieldJet& X) {
  MatrixJet s(M.at(0).context(), M[0].rows(), M[0].cols());
  for (size_t i = 0; i < M.size(); ++i) s = s + M[i] * X.comp.at(i);
  return s;
}

MatrixJet contract(const std::vector<MatrixJet>& M, const Eigen::VectorXcd& x) {
  MatrixJet s(M.at(0).context(), M[0].rows(), M[0].cols());
  for (size_t i = 0; i < M.size(); ++i) s = s + M[i] * x(static_cast<Eigen::Index>(i));
  return s;
}

std::vector<MatrixJet> chern_connection(const MatrixJet& H) {
  MatrixJet Hinv;
  try {
    Hinv = invert_matrix(H);
  } catch (const Error&) {
    throw Error(ErrorKind::DegenerateMetric, "hermitian metric has singular constant term");
  }
  std::vector<MatrixJet> G;
  for (int i = 0; i < H.context().m; ++i) G.push_back((H.derivative(i, true) * Hinv).transpose());
  return G;
}

std::vector<MatrixJet> curvature(const std::vector<MatrixJet>& g10, const std::vector<MatrixJet>& g01) {
  const int m = static_cast<int>(g10.size());
  std::vector<MatrixJet> R;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      MatrixJet r = -g10[static_cast<size_t>(i)].derivative(j, false);
      if (!g01.empty()) {
        const MatrixJet& gb = g01.at(static_cast<size_t>(j));
        r = r + gb.derivative(i, true) + commutator(g10[static_cast<size_t>(i)], gb);
      }
      R.push_back(r);
    }
  return R;
}

VectorFieldJet lie_bracket(const VectorFieldJet& X, const VectorFieldJet& Y) {
  VectorFieldJet r = VectorFieldJet::zero(X.context());
  for (int k = 0; k < X.dim(); ++k) r.comp[static_cast<size_t>(k)] = X.apply(Y.comp[k]) - Y.apply(X.comp[k]);
  return r;
}

MatrixJet jacobian(const VectorFieldJet& X) {
  const int m = X.dim();
  MatrixJet J(X.context(), m, m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) J(k, j) = X.comp[static_cast<size_t>(k)].derivative(j, true);
  return J;
}

MatrixJet lie_derivative_h(const VectorFieldJet& X, const MatrixJet& H, bool bar) {
  MatrixJet J = jacobian(X);
  if (!bar) return X.apply(H) + J.transpose() * H;
  return X.apply_bar(H) + H * J.conj();
}

MatrixJet lie_derivative_bilinear(const VectorFieldJet& X, const MatrixJet& G) {
  MatrixJet J = jacobian(X);
  return X.apply(G) + J.transpose() * G + G * J;
}

MatrixJet lie_derivative_endo(const VectorFieldJet& X, const MatrixJet& A, bool bar) {
  if (bar) return X.apply_bar(A);
  return X.apply(A) + commutator(A, jacobian(X));
}

MatrixJet lie_derivative_antilinear(const VectorFieldJet& X, const MatrixJet& k, bool bar) {
  MatrixJet J = jacobian(X);
  if (!bar) return X.apply(k) - J * k;
  return X.apply_bar(k) + k * J.conj();
}

MatrixJet dual_frame(const MatrixJet& H) {
  try {
    return invert_matrix(H).conj();
  } catch (const Error&) {
    throw Error(ErrorKind::DegenerateMetric, "metric has singular constant term");
  }
}

MatrixJet h_adjoint(const MatrixJet& A, const MatrixJet& H) {
  return (invert_matrix(H) * A.transpose() * H).conj();
}

MatrixJet g_adjoint(const MatrixJet& A, const MatrixJet& G) { return invert_matrix(G) * A.transpose() * G; }

MatrixJet kappa_conjugate(const MatrixJet& A, const MatrixJet& k) { return k * A.conj() * k.conj(); }

ChartBundle frame_change(const ChartBundle& b, const MatrixJet& T) {
  if (!is_holomorphic(T, 0.0)) throw Error(ErrorKind::InvalidArgument, "frame change must be holomorphic");
  MatrixJet Ti = invert_matrix(T);
  auto conj_by = [&](const MatrixJet& A) { return Ti * A * T; };
  ChartBundle r = b;
  for (auto& c : r.C) c = conj_by(c);
  if (b.U) r.U = conj_by(*b.U);
  if (b.V) r.V = conj_by(*b.V);
  if (b.Q) r.Q = conj_by(*b.Q);
  if (b.g) r.g = T.transpose() * *b.g * T;
  if (b.h) r.h = T.transpose() * *b.h * T.conj();
  if (b.kappa) r.kappa = Ti * *b.kappa * T.conj();
  for (size_t i = 0; i < r.gamma10.size(); ++i)
    r.gamma10[i] = Ti * T.derivative(static_cast<int>(i), true) + conj_by(b.gamma10[i]);
  for (auto& x : r.gamma01) x = conj_by(x);
  r.tangent = false;
  return r;
}

}  // namespace cvforge
