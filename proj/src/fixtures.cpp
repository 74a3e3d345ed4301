#include "cvforge/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvforge/axioms.hpp"
#include "cvforge/linsolve.hpp"

namespace cvforge {

namespace {

cd i_power(int w) {
  static const cd table[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  return table[((w % 4) + 4) % 4];
}

MatrixJet unit_matrix(const JetContext& c, int n, int i, int j, const Jet& v) {
  MatrixJet M(c, n, n);
  M(i, j) = v;
  return M;
}

void certify(const StructureReport& rep, const std::string& what) {
  if (!rep.pass()) {
    std::string bad;
    for (auto& t : rep.failing()) bad += " " + t;
    throw Error(ErrorKind::InvariantViolation, what + " fixture failed its own checks:" + bad);
  }
}

// psi(|t_var|^2) as a jet, keeping radial terms of jet degree <= order.
Jet radial_jet(const JetContext& c, const std::vector<double>& b, int var, int order) {
  Jet r = Jet::coordinate(c, var) * Jet::coordinate(c, var, false);
  Jet out(c);
  Jet pw = Jet::constant(c, 1.0);
  for (size_t k = 0; k < b.size() && static_cast<int>(2 * k) <= order; ++k) {
    out = out + pw * cd(b[k]);
    pw = pw * r;
  }
  return out;
}

}  // namespace

ChartBundle example_rank1(int w, int d) {
  JetContext c(1, d);
  ChartBundle b;
  b.ctx = c;
  b.n = 1;
  b.w = w;
  b.tangent = true;
  const cd iw = i_power(w);
  b.C = {MatrixJet::from_constant(c, Eigen::MatrixXcd::Constant(1, 1, -1.0))};
  MatrixJet U(c, 1, 1);
  U(0, 0) = Jet::coordinate(c, 0);
  b.U = U;
  b.V = MatrixJet(c, 1, 1);
  b.Q = MatrixJet(c, 1, 1);
  b.g = MatrixJet::identity(c, 1) * iw;
  b.h = MatrixJet::identity(c, 1);
  b.kappa = MatrixJet::identity(c, 1) * std::conj(iw);
  b.gamma10 = {MatrixJet(c, 1, 1)};
  certify(check_saito(b), "E1");
  certify(check_cv(b), "E1");
  return b;
}

ChartBundle example_rank1_exp_metric(int d) {
  JetContext c(1, d);
  ChartBundle b;
  b.ctx = c;
  b.n = 1;
  b.tangent = true;
  Jet u = Jet::coordinate(c, 0), ub = Jet::coordinate(c, 0, false);
  b.C = {MatrixJet::from_constant(c, Eigen::MatrixXcd::Constant(1, 1, -1.0))};
  MatrixJet U(c, 1, 1);
  U(0, 0) = u;
  b.U = U;
  b.Q = MatrixJet(c, 1, 1);
  MatrixJet G(c, 1, 1), H(c, 1, 1), K(c, 1, 1);
  G(0, 0) = u.exp();
  H(0, 0) = ((u + ub) * cd(0.5)).exp();
  K(0, 0) = ((ub - u) * cd(0.5)).exp();
  b.g = G;
  b.h = H;
  b.kappa = K;
  certify(check_cv(b), "E1 exponential metric");
  return b;
}

ChartBundle example_semisimple(int n, const std::vector<double>& offsets, int d, int w) {
  if (static_cast<int>(offsets.size()) != n) throw Error(ErrorKind::InvalidArgument, "need one offset per summand");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (offsets[static_cast<size_t>(i)] == offsets[static_cast<size_t>(j)])
        throw Error(ErrorKind::DuplicateEigenvalues, "eigenvalue offsets must be pairwise distinct");
  JetContext c(n, d);
  ChartBundle b;
  b.ctx = c;
  b.n = n;
  b.w = w;
  b.tangent = true;
  const cd iw = i_power(w);
  MatrixJet U(c, n, n);
  for (int i = 0; i < n; ++i) {
    b.C.push_back(unit_matrix(c, n, i, i, Jet::constant(c, -1.0)));
    U(i, i) = Jet::coordinate(c, i) + Jet::constant(c, offsets[static_cast<size_t>(i)]);
    b.gamma10.push_back(MatrixJet(c, n, n));
  }
  b.U = U;
  b.V = MatrixJet(c, n, n);
  b.Q = MatrixJet(c, n, n);
  b.g = MatrixJet::identity(c, n) * iw;
  b.h = MatrixJet::identity(c, n);
  b.kappa = MatrixJet::identity(c, n) * std::conj(iw);
  certify(check_saito(b), "E2");
  certify(check_cv(b), "E2");
  return b;
}

ChartBundle example_frobenius2(double s, int d) {
  JetContext c(2, d);
  ChartBundle b;
  b.ctx = c;
  b.n = 2;
  b.tangent = true;
  Jet t1 = Jet::coordinate(c, 0);
  Jet t2 = Jet::coordinate(c, 1) + Jet::constant(c, s);
  // N = [[0, t2], [1, 0]] is the matrix of d2 o (.) on the frame (d1, d2).
  MatrixJet N(c, 2, 2);
  N(0, 1) = t2;
  N(1, 0) = Jet::constant(c, 1.0);
  b.C = {-MatrixJet::identity(c, 2), -N};
  b.U = MatrixJet::scalar(t1, 2) + N * t2 * cd(2.0 / 3.0);
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(2, 2);
  V(0, 0) = 1.0 / 6.0;
  V(1, 1) = -1.0 / 6.0;
  b.V = MatrixJet::from_constant(c, V);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(2, 2);
  G(0, 1) = G(1, 0) = 1.0;
  b.g = MatrixJet::from_constant(c, G);
  b.gamma10 = {MatrixJet(c, 2, 2), MatrixJet(c, 2, 2)};
  certify(check_saito(b), "F2");
  return b;
}

std::vector<double> sinh_gordon_radial(int terms, double b0) {
  std::vector<double> b{b0};
  auto exp_series = [](const std::vector<double>& a, int len) {
    std::vector<double> e(static_cast<size_t>(len), 0.0);
    e[0] = std::exp(a[0]);
    for (int n = 1; n < len; ++n) {
      double acc = 0.0;
      for (int j = 1; j <= n && j < static_cast<int>(a.size()); ++j)
        acc += j * a[static_cast<size_t>(j)] * e[static_cast<size_t>(n - j)];
      e[static_cast<size_t>(n)] = acc / n;
    }
    return e;
  };
  for (int k = 1; k < terms; ++k) {
    std::vector<double> two(b.size()), mtwo(b.size());
    for (size_t i = 0; i < b.size(); ++i) {
      two[i] = 2 * b[i];
      mtwo[i] = -2 * b[i];
    }
    auto ep = exp_series(two, k);
    auto em = exp_series(mtwo, k);
    // [r e^{2 psi} - e^{-2 psi}]_{k-1}
    double rhs = (k >= 2 ? ep[static_cast<size_t>(k - 2)] : 0.0) - em[static_cast<size_t>(k - 1)];
    b.push_back(rhs / (double(k) * k));
  }
  return b;
}

ChartBundle sinh_gordon_jet(int order, int d, double b0) {
  if (order > d || order < 2) throw Error(ErrorKind::InvalidArgument, "need 2 <= order <= d");
  JetContext c(1, d);
  auto bk = sinh_gordon_radial(order / 2 + 1, b0);
  Jet phi = -radial_jet(c, bk, 0, order);
  Jet t = Jet::coordinate(c, 0);
  ChartBundle b;
  b.ctx = c;
  b.n = 2;
  MatrixJet C(c, 2, 2);
  C(0, 1) = Jet::constant(c, -1.0);
  C(1, 0) = -t;
  b.C = {C};
  MatrixJet U(c, 2, 2);
  U(0, 1) = t * cd(2.0 / 3.0);
  U(1, 0) = t * t * cd(2.0 / 3.0);
  b.U = U;
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(2, 2);
  G(0, 1) = G(1, 0) = 1.0;
  b.g = MatrixJet::from_constant(c, G);
  Jet ep = phi.exp().with_precision(order), em = (-phi).exp().with_precision(order);
  MatrixJet H(c, 2, 2), K(c, 2, 2);
  H(0, 0) = ep;
  H(1, 1) = em;
  K(0, 1) = em;
  K(1, 0) = ep;
  b.h = H;
  b.kappa = K;
  Jet q = Jet::constant(c, -1.0 / 6.0) + t * phi.derivative(0, true) * cd(2.0 / 3.0);
  MatrixJet Q(c, 2, 2);
  Q(0, 0) = q;
  Q(1, 1) = -q;
  b.Q = Q;
  certify(check_cv(b, 1e-9), "SG");
  return b;
}

ChartBundle sinh_gordon_unfolded(int d, double b0) {
  ChartBundle b = example_frobenius2(0.0, d);
  const JetContext& c = b.ctx;
  auto bk = sinh_gordon_radial(d / 2 + 1, b0);
  Jet psi = radial_jet(c, bk, 1, d);
  Jet ep = psi.exp().with_precision(d), em = (-psi).exp().with_precision(d);
  MatrixJet H(c, 2, 2), K(c, 2, 2);
  H(0, 0) = ep;
  H(1, 1) = em;
  K(0, 1) = em;
  K(1, 0) = ep;
  b.h = H;
  b.kappa = K;
  Jet q = Jet::constant(c, 1.0 / 6.0) + Jet::coordinate(c, 1) * psi.derivative(1, true) * cd(2.0 / 3.0);
  MatrixJet Q(c, 2, 2);
  Q(0, 0) = q;
  Q(1, 1) = -q;
  b.Q = Q;
  certify(check_cv(b), "SG-unfolded");
  return b;
}

Jet embed(const Jet& j, const JetContext& target, int offset) {
  const JetContext& src = j.context();
  if (offset < 0 || offset + src.m > target.m || src.d > target.d)
    throw Error(ErrorKind::ContextMismatch, "cannot embed jet into a smaller context");
  Jet out(target, j.precision());
  std::vector<int> a, bb, ta(static_cast<size_t>(target.m)), tb(static_cast<size_t>(target.m));
  for (auto& [k, v] : j.terms()) {
    unpack_key(src, k, a, bb);
    std::fill(ta.begin(), ta.end(), 0);
    std::fill(tb.begin(), tb.end(), 0);
    for (int i = 0; i < src.m; ++i) {
      ta[static_cast<size_t>(offset + i)] = a[static_cast<size_t>(i)];
      tb[static_cast<size_t>(offset + i)] = bb[static_cast<size_t>(i)];
    }
    out.add_term(pack_key(target, ta, tb), v);
  }
  return out;
}

MatrixJet embed(const MatrixJet& M, const JetContext& target, int offset) {
  MatrixJet out(target, M.rows(), M.cols());
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) out(i, j) = embed(M(i, j), target, offset);
  return out;
}

ChartBundle join(const ChartBundle& a, const ChartBundle& b) {
  JetContext c(a.m() + b.m(), std::min(a.ctx.d, b.ctx.d));
  if (a.ctx.d != b.ctx.d) throw Error(ErrorKind::ContextMismatch, "joined charts need equal truncation degree");
  const int n = a.n + b.n;
  auto block = [&](const MatrixJet* x, const MatrixJet* y) {
    MatrixJet M(c, n, n);
    if (x) {
      MatrixJet e = embed(*x, c, 0);
      for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) M(i, j) = e(i, j);
    }
    if (y) {
      MatrixJet e = embed(*y, c, a.m());
      for (int i = 0; i < b.n; ++i)
        for (int j = 0; j < b.n; ++j) M(a.n + i, a.n + j) = e(i, j);
    }
    return M;
  };
  ChartBundle r;
  r.ctx = c;
  r.n = n;
  r.w = a.w;
  r.zorder = std::min(a.zorder, b.zorder);
  r.tangent = a.tangent && b.tangent;
  for (auto& x : a.C) r.C.push_back(block(&x, nullptr));
  for (auto& y : b.C) r.C.push_back(block(nullptr, &y));
  auto both = [&](const std::optional<MatrixJet>& x, const std::optional<MatrixJet>& y) -> std::optional<MatrixJet> {
    if (!x || !y) return std::nullopt;
    return block(&*x, &*y);
  };
  r.U = both(a.U, b.U);
  r.V = both(a.V, b.V);
  r.Q = both(a.Q, b.Q);
  r.g = both(a.g, b.g);
  r.h = both(a.h, b.h);
  r.kappa = both(a.kappa, b.kappa);
  if (!a.gamma10.empty() && !b.gamma10.empty()) {
    for (auto& x : a.gamma10) r.gamma10.push_back(block(&x, nullptr));
    for (auto& y : b.gamma10) r.gamma10.push_back(block(nullptr, &y));
  }
  return r;
}

CompletionFailure::CompletionFailure(int degree, double residual)
    : Error(ErrorKind::Inconsistent, "completion inconsistent at degree " + std::to_string(degree) +
                                         " (residual " + std::to_string(residual) + ")"),
      degree_(degree),
      residual_(residual) {}

namespace {

struct CvResidualInput {
  const std::vector<MatrixJet>* C;
  const MatrixJet* U;
  const MatrixJet* G;
  MatrixJet Ginv;
};

// Coefficients of every CV identity that first sees the degree-delta part of
// h (or the degree delta-1 part of Q), at exactly that degree.
std::vector<cd> cv_step_residual(const CvResidualInput& in, const MatrixJet& H, const MatrixJet& Q, int delta) {
  const auto& C = *in.C;
  const MatrixJet& U = *in.U;
  const MatrixJet& G = *in.G;
  const int m = static_cast<int>(C.size());
  const int n = H.rows();
  MatrixJet k = in.Ginv * H;
  MatrixJet kc = k.conj();
  std::vector<cd> out;
  std::vector<MatrixJet> Gam;
  if (delta >= 1) Gam = chern_connection(H);
  if (delta >= 2) {
    auto R = curvature(Gam, {});
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        MatrixJet Ct = k * C[static_cast<size_t>(j)].conj() * kc;
        append_coefficients(R[static_cast<size_t>(i * m + j)] + commutator(C[static_cast<size_t>(i)], Ct), delta - 2,
                            delta - 2, out);
      }
    MatrixJet Ut = k * U.conj() * kc;
    for (int i = 0; i < m; ++i)
      append_coefficients(Q.derivative(i, true) + commutator(Gam[static_cast<size_t>(i)], Q) +
                              commutator(C[static_cast<size_t>(i)], Ut),
                          delta - 2, delta - 2, out);
  }
  if (delta >= 1) {
    for (int i = 0; i < m; ++i) {
      append_coefficients(k.derivative(i, true) + Gam[static_cast<size_t>(i)] * k, delta - 1, delta - 1, out);
      append_coefficients(k.derivative(i, false) - k * Gam[static_cast<size_t>(i)].conj(), delta - 1, delta - 1, out);
      append_coefficients(U.derivative(i, true) + commutator(Gam[static_cast<size_t>(i)], U) -
                              commutator(C[static_cast<size_t>(i)], Q) + C[static_cast<size_t>(i)],
                          delta - 1, delta - 1, out);
    }
    append_coefficients(G * Q + Q.transpose() * G, delta - 1, delta - 1, out);
    append_coefficients(Q.transpose() * H - H * Q.conj(), delta - 1, delta - 1, out);
  }
  append_coefficients(k * kc - MatrixJet::identity(H.context(), n), delta, delta, out);
  append_coefficients(H - H.transpose().conj(), delta, delta, out);
  return out;
}

Eigen::VectorXd realify(const std::vector<cd>& v) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(2 * v.size()));
  for (size_t i = 0; i < v.size(); ++i) {
    r(static_cast<Eigen::Index>(2 * i)) = v[i].real();
    r(static_cast<Eigen::Index>(2 * i + 1)) = v[i].imag();
  }
  return r;
}

struct Slot {
  bool isH;
  int row, col;
  Key key;
  bool imag;
};

}  // namespace

ChartBundle complete_cv_jet(const ChartBundle& partial, CompletionTarget which, double tol) {
  const auto& C = partial.require_C();
  const MatrixJet& U = require(partial.U, "U");
  const MatrixJet& G = require(partial.g, "g");
  const JetContext& c = partial.ctx;
  const int n = partial.n;
  const bool solveH = (static_cast<int>(which) & 1) != 0;
  const bool solveQ = (static_cast<int>(which) & 2) != 0;
  if (!partial.h) throw Error(ErrorKind::MissingTensor, "completion needs at least the constant term of h");
  if (!partial.Q && !solveQ) throw Error(ErrorKind::MissingTensor, "Q absent and not selected for completion");

  // Start from the constant terms of the selected tensors.
  auto constant_part = [&](const MatrixJet& M) { return MatrixJet::from_constant(c, M.constant_term()); };
  MatrixJet H = solveH ? constant_part(*partial.h) : *partial.h;
  MatrixJet Q = partial.Q ? (solveQ ? constant_part(*partial.Q) : *partial.Q) : MatrixJet(c, n, n);

  const double thr = pass_threshold(tol, partial.max_input_magnitude());
  CvResidualInput in{&C, &U, &G, invert_matrix(G)};

  // Degree 0: the Higgs pair and the algebraic constant-term identities.
  {
    StructureReport hp = check_higgs_pair(partial, tol);
    double res = hp.pass() ? 0.0 : std::max(hp.max_residual(), thr * 2);
    std::vector<cd> r0 = cv_step_residual(in, H, Q, 0);
    append_coefficients(G * Q + Q.transpose() * G, 0, 0, r0);
    append_coefficients(Q.transpose() * H - H * Q.conj(), 0, 0, r0);
    for (auto& v : r0) res = std::max(res, std::abs(v));
    if (res > thr) throw CompletionFailure(0, res);
  }

  for (int delta = 1; delta <= c.d; ++delta) {
    std::vector<Slot> slots;
    for (Key key : monomials_up_to(c, delta)) {
      const int deg = key_degree(key);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int im = 0; im < 2; ++im) {
            if (solveH && deg == delta) slots.push_back({true, i, j, key, im == 1});
            if (solveQ && deg == delta - 1) slots.push_back({false, i, j, key, im == 1});
          }
    }
    Eigen::VectorXd f0 = realify(cv_step_residual(in, H, Q, delta));
    Eigen::MatrixXd J(f0.size(), static_cast<Eigen::Index>(slots.size()));
    for (size_t s = 0; s < slots.size(); ++s) {
      const Slot& sl = slots[s];
      MatrixJet Hs = H, Qs = Q;
      const cd unit = sl.imag ? cd(0, 1) : cd(1, 0);
      (sl.isH ? Hs : Qs)(sl.row, sl.col).add_term(sl.key, unit);
      J.col(static_cast<Eigen::Index>(s)) = realify(cv_step_residual(in, Hs, Qs, delta)) - f0;
    }
    auto sol = solve_least_squares(J, -f0, 1e-10);
    for (size_t s = 0; s < slots.size(); ++s) {
      const Slot& sl = slots[s];
      const cd v = sl.imag ? cd(0, sol.x(static_cast<Eigen::Index>(s))) : cd(sol.x(static_cast<Eigen::Index>(s)), 0);
      if (std::abs(v) > 0) (sl.isH ? H : Q)(sl.row, sl.col).add_term(sl.key, v);
    }
    std::vector<cd> after = cv_step_residual(in, H, Q, delta);
    double res = 0.0;
    for (auto& v : after) res = std::max(res, std::abs(v));
    if (res > thr) throw CompletionFailure(delta, res);
  }

  ChartBundle out = partial;
  out.h = H.with_precision(c.d);
  out.kappa = (in.Ginv * H).with_precision(c.d);
  out.Q = Q.with_precision(c.d - 1);
  return out;
}

}  // namespace cvforge
