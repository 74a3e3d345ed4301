#include "cvforge/canonical.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cvforge/errors.hpp"

namespace cvforge {

namespace {

MatrixJet inverse_or(const MatrixJet& M, ErrorKind kind, const char* what) {
  try {
    return invert_matrix(M);
  } catch (const Error&) {
    throw Error(kind, what);
  }
}

MatrixJet column(const std::vector<Jet>& v) {
  MatrixJet c(v.at(0).context(), static_cast<int>(v.size()), 1);
  for (int i = 0; i < c.rows(); ++i) c(i, 0) = v[static_cast<size_t>(i)];
  return c;
}

void set_column(MatrixJet& M, int j, const MatrixJet& col) {
  for (int i = 0; i < M.rows(); ++i) M(i, j) = col(i, 0);
}

MatrixJet common_precision(const MatrixJet& a, const MatrixJet& b, MatrixJet& bout) {
  int p = std::min(a.precision(), b.precision());
  bout = b.with_precision(p);
  return a.with_precision(p);
}

double distance(const MatrixJet& a, const MatrixJet& b) {
  MatrixJet bb;
  MatrixJet aa = common_precision(a, b, bb);
  return (aa - bb).max_abs();
}

}  // namespace

Jet EndPairings::h(const MatrixJet& A, const MatrixJet& B) const {
  return (A.transpose() * H * B.conj() * Hinv).trace();
}

Jet EndPairings::g(const MatrixJet& A, const MatrixJet& B) const {
  if (!G) throw Error(ErrorKind::MissingTensor, "g^end needs g");
  return (A.transpose() * *G * B * *Ginv).trace();
}

MatrixJet EndPairings::adjoint(const MatrixJet& A) const { return (Hinv * A.transpose() * H).conj(); }

cd EndPairings::h0(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) const {
  Eigen::MatrixXcd H0 = H.constant_term();
  Eigen::MatrixXcd Hi0 = Hinv.constant_term();
  return (A.transpose() * H0 * B.conjugate() * Hi0).trace();
}

EndPairings end_pairings(const MatrixJet& H, const std::optional<MatrixJet>& G) {
  EndPairings p;
  p.H = H;
  p.Hinv = inverse_or(H, ErrorKind::DegenerateMetric, "h is degenerate at the base point");
  if (G) {
    p.G = *G;
    p.Ginv = inverse_or(*G, ErrorKind::DegenerateMetric, "g is degenerate at the base point");
  }
  return p;
}

EndPairings end_pairings(const ChartBundle& b) { return end_pairings(require(b.h, "h"), b.g); }

EndSubbundle::EndSubbundle(const MatrixJet& H, std::vector<MatrixJet> sections, const std::optional<MatrixJet>& G)
    : pair_(end_pairings(H, G)), s_(std::move(sections)), gamma_(chern_connection(H)) {
  if (s_.empty()) throw Error(ErrorKind::InvalidArgument, "subbundle needs at least one section");
  const int r = rank();
  gram_ = MatrixJet(H.context(), r, r);
  for (int a = 0; a < r; ++a)
    for (int c = 0; c < r; ++c) gram_(a, c) = pair_.h(s_[static_cast<size_t>(a)], s_[static_cast<size_t>(c)]);
  gram_inv_ = inverse_or(gram_, ErrorKind::DegenerateInducedMetric, "induced metric on F is degenerate");
  gram_inv_t_ = gram_inv_.transpose();
}

EndSubbundle::EndSubbundle(const ChartBundle& b) : EndSubbundle(require(b.h, "h"), b.require_C(), b.g) {}

// sum_a lambda^a h^end(s_a, s_c) = h^end(B, s_c) for all c
MatrixJet EndSubbundle::coefficients(const MatrixJet& B) const {
  std::vector<Jet> r;
  for (auto& s : s_) r.push_back(pair_.h(B, s));
  return gram_inv_t_ * column(r);
}

MatrixJet EndSubbundle::combine(const MatrixJet& coeffs) const {
  MatrixJet out = s_[0] * coeffs(0, 0);
  for (int a = 1; a < rank(); ++a) out += s_[static_cast<size_t>(a)] * coeffs(a, 0);
  return out;
}

Projection EndSubbundle::project(const MatrixJet& B) const {
  Projection p;
  p.coeffs = coefficients(B);
  p.tangential = combine(p.coeffs);
  p.normal = B - p.tangential;
  return p;
}

MatrixJet EndSubbundle::D(int i, const MatrixJet& B) const {
  return B.derivative(i, true) + commutator(gamma_[static_cast<size_t>(i)], B);
}

const std::vector<MatrixJet>& EndSubbundle::second_fundamental_form() const {
  if (!sff_) {
    std::vector<MatrixJet> A;
    const int m = static_cast<int>(gamma_.size());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < rank(); ++j) A.push_back(project(D(i, s_[static_cast<size_t>(j)])).normal);
    sff_ = std::move(A);
  }
  return *sff_;
}

// h^end(s_c, sum mu_a s_a) = h^end(A_j s_c, nu), so gram conj(mu) = r.
MatrixJet EndSubbundle::flat_coefficients(int j, const MatrixJet& nu) const {
  const auto& A = second_fundamental_form();
  std::vector<Jet> r;
  for (int c = 0; c < rank(); ++c) r.push_back(pair_.h(A[static_cast<size_t>(j * rank() + c)], nu));
  return (gram_inv_ * column(r)).conj();
}

SubbundleCurvature EndSubbundle::curvature() const {
  SubbundleCurvature out;
  const int m = static_cast<int>(gamma_.size());
  const int r = rank();
  out.direct = cvforge::curvature(chern_connection(gram_), {});
  std::vector<MatrixJet> RD = cvforge::curvature(gamma_, {});
  const auto& A = second_fundamental_form();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const MatrixJet& Rij = RD[static_cast<size_t>(i * m + j)];
      MatrixJet coeff(pair_.H.context(), r, r);
      for (int b = 0; b < r; ++b) {
        const MatrixJet& sb = s_[static_cast<size_t>(b)];
        MatrixJet col = coefficients(commutator(Rij, sb)) -
                        flat_coefficients(j, A[static_cast<size_t>(i * r + b)]);
        set_column(coeff, b, col);
      }
      out.via_ambient.push_back(coeff);
    }
  for (size_t k = 0; k < out.direct.size(); ++k)
    out.discrepancy = std::max(out.discrepancy, distance(out.direct[k], out.via_ambient[k]));
  return out;
}

Projection project_F(const ChartBundle& b, const MatrixJet& B) { return EndSubbundle(b).project(B); }

std::vector<MatrixJet> second_fundamental_form(const ChartBundle& b) {
  return EndSubbundle(b).second_fundamental_form();
}

SubbundleCurvature curvature_F(const ChartBundle& b) { return EndSubbundle(b).curvature(); }

CanonicalData canonical_data(const ChartBundle& b, const Primitive& p) {
  EndSubbundle F(b);
  const int m = b.m();
  const auto& C = b.require_C();
  const MatrixJet& Q = require(b.Q, "Q");
  CanonicalData out;
  out.hM = F.gram();
  out.gM = MatrixJet(b.ctx, m, m);
  out.QM = MatrixJet(b.ctx, m, m);
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c) out.gM(a, c) = F.pairings().g(C[static_cast<size_t>(a)], C[static_cast<size_t>(c)]);
  for (int c = 0; c < m; ++c) set_column(out.QM, c, F.coefficients(commutator(Q, C[static_cast<size_t>(c)])));
  out.f = induce_f_structure(b, p);
  return out;
}

CanonicalData canonical_data(const ChartBundle& b) { return canonical_data(b, find_primitive(b)); }

StructureReport check_canonical_props(const CanonicalData& cdata, const ChartBundle& b, double tol) {
  StructureReport rep;
  rep.name = "canonical";
  const double thr = pass_threshold(tol, b.max_input_magnitude());
  const int m = b.m();
  const JetContext& ctx = b.ctx;
  EndSubbundle F(b);
  const auto& C = b.require_C();
  const MatrixJet& Q = require(b.Q, "Q");
  const MatrixJet& U = require(b.U, "U");
  const auto& A = F.second_fundamental_form();
  auto Aat = [&](int i, int j) -> const MatrixJet& { return A[static_cast<size_t>(i * m + j)]; };
  auto Cat = [&](int i) -> const MatrixJet& { return C[static_cast<size_t>(i)]; };
  auto prF = [&](const MatrixJet& B) { return F.project(B).tangential; };

  std::vector<MatrixJet> sym, unit, dfc;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) sym.push_back(Aat(i, j) - Aat(j, i));
  rep.add("sff_symmetric", residual_norm(sym), thr);

  for (int j = 0; j < m; ++j) {
    MatrixJet Ae(ctx, b.n, b.n);
    for (int i = 0; i < m; ++i) Ae += Aat(i, j) * cdata.f.e.comp[static_cast<size_t>(i)];
    unit.push_back(Ae);
  }
  rep.add("sff_unit_vanishes", residual_norm(unit), thr);

  // (D^F C^F)(X, Y)(C_Z) = pr(C_Y A_Z(C_X) - C_X A_Z(C_Y)) on coordinate fields
  for (int x = 0; x < m; ++x)
    for (int y = x + 1; y < m; ++y)
      for (int z = 0; z < m; ++z) {
        MatrixJet lhs = prF(F.D(x, Cat(y) * Cat(z))) - Cat(y) * prF(F.D(x, Cat(z))) -
                        prF(F.D(y, Cat(x) * Cat(z))) + Cat(x) * prF(F.D(y, Cat(z)));
        MatrixJet rhs = prF(Cat(y) * Aat(z, x) - Cat(x) * Aat(z, y));
        dfc.push_back(lhs - rhs);
      }
  if (!dfc.empty()) rep.add("higgs_derivative_identity", residual_norm(dfc), thr);

  const MatrixJet& hM = cdata.hM;
  const MatrixJet& gM = cdata.gM;
  const MatrixJet& QM = cdata.QM;
  std::vector<MatrixJet> gM_par, gam = chern_connection(hM);
  for (int i = 0; i < m; ++i) {
    const MatrixJet& Gi = gam[static_cast<size_t>(i)];
    gM_par.push_back(gM.derivative(i, true) - Gi.transpose() * gM - gM * Gi);
    gM_par.push_back(gM.derivative(i, false));
  }
  rep.add("metric_connection_preserves_g", residual_norm(gM_par), thr);
  // what is left over: g^end(A_i C_x, C_y) + g^end(C_x, A_i C_y), F^perp being h^end- not g^end-orthogonal
  std::vector<MatrixJet> g_defect;
  for (int i = 0; i < m; ++i) {
    MatrixJet pair(ctx, m, m);
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        pair(x, y) = F.pairings().g(Aat(i, x), Cat(y)) + F.pairings().g(Cat(x), Aat(i, y));
    g_defect.push_back(gM_par[static_cast<size_t>(2 * i)] - pair);
  }
  rep.add("metric_connection_g_defect_identity", residual_norm(g_defect), thr);

  std::vector<MatrixJet> u_rel, u_amb;
  for (int i = 0; i < m; ++i) {
    MatrixJet DU = F.D(i, U);
    u_rel.push_back(prF(DU + commutator(Q, Cat(i))) + Cat(i));
    u_amb.push_back(DU + commutator(Q, Cat(i)) + Cat(i));
  }
  rep.add("higgs_U_relation", residual_norm(u_rel), thr);
  rep.add("higgs_U_relation_ambient", residual_norm(u_amb), thr);

  // D^M Q^M symmetric, Q^M hermitian, D^M E = Q^M + Id
  std::vector<MatrixJet> dq, de;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      auto DQ = [&](int k) { return QM.derivative(k, true) + commutator(gam[static_cast<size_t>(k)], QM); };
      MatrixJet ei = MatrixJet::from_constant(ctx, Eigen::MatrixXcd::Identity(m, m).col(i));
      MatrixJet ej = MatrixJet::from_constant(ctx, Eigen::MatrixXcd::Identity(m, m).col(j));
      dq.push_back(DQ(i) * ej - DQ(j) * ei);
    }
  if (!dq.empty()) rep.add("Q_derivative_symmetric", residual_norm(dq), thr);
  rep.add("Q_hermitian", residual_norm(QM.transpose() * hM - hM * QM.conj()), thr);
  MatrixJet Ecol = cdata.f.E.as_column();
  for (int i = 0; i < m; ++i) {
    MatrixJet ei = MatrixJet::from_constant(ctx, Eigen::MatrixXcd::Identity(m, m).col(i));
    de.push_back(Ecol.derivative(i, true) + gam[static_cast<size_t>(i)] * Ecol - QM * ei - ei);
  }
  rep.add("euler_derivative", residual_norm(de), thr);

  // g^F(Q C_X, C_Y) + g^F(C_X, Q C_Y) against the normal-part defect
  MatrixJet defect(ctx, m, m), ident(ctx, m, m);
  std::vector<MatrixJet> normal;
  for (int x = 0; x < m; ++x) normal.push_back(F.project(commutator(Q, Cat(x))).normal);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      Jet lhs(ctx);
      for (int a = 0; a < m; ++a) lhs += QM(a, x) * gM(a, y) + QM(a, y) * gM(x, a);
      Jet rhs = -(F.pairings().g(normal[static_cast<size_t>(x)], Cat(y)) +
                  F.pairings().g(normal[static_cast<size_t>(y)], Cat(x)));
      defect(x, y) = lhs;
      ident(x, y) = lhs - rhs;
    }
  rep.add("g_skew_defect_identity", residual_norm(ident), thr);
  char note[64];
  std::snprintf(note, sizeof note, "%s %.3e", defect.max_abs() > thr ? "nonzero" : "zero", defect.max_abs());
  rep.add_flag("g_skew_defect", true, note);

  const VectorFieldJet& e = cdata.f.e;
  const VectorFieldJet& E = cdata.f.E;
  rep.add("flow_e", residual_norm(lie_derivative_h(e, hM)), thr);
  rep.add("flow_ebar", residual_norm(lie_derivative_h(e, hM, true)), thr);
  rep.add("flow_E_minus_Ebar", residual_norm(lie_derivative_h(E, hM) - lie_derivative_h(E, hM, true)), thr);
  return rep;
}

SectionalEvaluator::SectionalEvaluator(const CanonicalData& cdata, const ChartBundle& b) : m_(b.m()) {
  hM0_ = cdata.hM.constant_term();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (hM0_ + hM0_.adjoint()));
  const auto& ev = es.eigenvalues();
  if (ev(0) <= 1e-12 * std::max(1.0, ev(ev.size() - 1)))
    throw Error(ErrorKind::NotPositiveDefinite, "h^M is not positive definite at the base point");
  for (auto& R : cvforge::curvature(chern_connection(cdata.hM), {})) R0_.push_back(R.constant_term());
  H0_ = require(b.h, "h").constant_term();
  H0inv_ = H0_.inverse();
  for (auto& c : b.require_C()) C0_.push_back(c.constant_term());
  EndSubbundle F(b);
  for (auto& a : F.second_fundamental_form()) A0_.push_back(a.constant_term());
}

void SectionalEvaluator::require_nonzero(const Eigen::VectorXcd& X) const {
  if (X.size() != m_) throw Error(ErrorKind::InvalidArgument, "direction has wrong dimension");
  if (X.norm() == 0.0) throw Error(ErrorKind::ZeroVector, "direction is zero");
}

double SectionalEvaluator::norm2(const Eigen::VectorXcd& X) const {
  return (X.transpose() * hM0_ * X.conjugate())(0, 0).real();
}

double SectionalEvaluator::direct(const Eigen::VectorXcd& X) const {
  require_nonzero(X);
  Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(m_, m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) R += X(i) * std::conj(X(j)) * R0_[static_cast<size_t>(i * m_ + j)];
  Eigen::VectorXcd RX = R * X;
  double n2 = norm2(X);
  return (RX.transpose() * hM0_ * X.conjugate())(0, 0).real() / (n2 * n2);
}

double SectionalEvaluator::via_second_fundamental(const Eigen::VectorXcd& X) const {
  require_nonzero(X);
  const Eigen::Index n = H0_.rows();
  Eigen::MatrixXcd CX = Eigen::MatrixXcd::Zero(n, n), AX = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < m_; ++i) CX += X(i) * C0_[static_cast<size_t>(i)];
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) AX += X(i) * X(j) * A0_[static_cast<size_t>(i * m_ + j)];
  Eigen::MatrixXcd flat = (H0inv_ * CX.transpose() * H0_).conjugate();
  Eigen::MatrixXcd N = CX * flat - flat * CX;
  auto h0 = [&](const Eigen::MatrixXcd& P) { return (P.transpose() * H0_ * P.conjugate() * H0inv_).trace().real(); };
  double n2 = norm2(X);
  return -(h0(N) + h0(AX)) / (n2 * n2);
}

Sectional sectional_curvature(const CanonicalData& cdata, const ChartBundle& b, const Eigen::VectorXcd& X) {
  SectionalEvaluator ev(cdata, b);
  Sectional s;
  s.value = ev.direct(X);
  s.via_second_fundamental = ev.via_second_fundamental(X);
  s.discrepancy = std::abs(s.value - s.via_second_fundamental);
  return s;
}

namespace {

MatrixJet pullback_through_inverse(const MatrixJet& hM, const MatrixJet& op, ErrorKind kind, const char* what) {
  MatrixJet P = inverse_or(op, kind, what);
  return P.transpose() * hM * P.conj();
}

}  // namespace

TwistedMetrics twisted_metrics(const CanonicalData& cdata, const std::optional<VectorFieldJet>& socle) {
  TwistedMetrics t;
  t.discriminant = pullback_through_inverse(cdata.hM, cdata.f.mult_by(cdata.f.E), ErrorKind::OnDiscriminant,
                                            "E o is singular at the base point");
  const VectorFieldJet& H = socle ? *socle : cdata.f.E;
  t.caustic = pullback_through_inverse(cdata.hM, cdata.f.mult_by(H), ErrorKind::OnCaustic,
                                       "socle multiplication is singular at the base point");
  return t;
}

}  // namespace cvforge
