#include "cvforge/unfolding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace cvforge {

namespace {

double input_scale(const FStructure& f) {
  double s = std::max(f.e.max_abs(), f.E.max_abs());
  for (auto& M : f.mult) s = std::max(s, M.max_abs());
  return s;
}

MatrixJet column_of(const MatrixJet& M, int c) {
  MatrixJet r(M.context(), M.rows(), 1);
  for (int i = 0; i < M.rows(); ++i) r(i, 0) = M(i, c);
  return r;
}

double smallest_singular(const Eigen::MatrixXcd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues().size() ? svd.singularValues().minCoeff() : 0.0;
}

void require_square(const ChartBundle& b) {
  if (b.n != b.m()) throw Error(ErrorKind::InvalidArgument, "unfolding needs rank equal to base dimension");
}

// Connection matrices sum_i X^i G_i.
MatrixJet along(const std::vector<MatrixJet>& G, const VectorFieldJet& X) { return contract(G, X); }

// (L_X c) in the mult layout: X(M_i) - J M_i + sum_l J_{li} M_l + M_i J.
std::vector<MatrixJet> lie_of_mult(const FStructure& f, const VectorFieldJet& X) {
  const int m = f.m();
  MatrixJet J = jacobian(X);
  std::vector<MatrixJet> out;
  for (int i = 0; i < m; ++i) {
    MatrixJet L = X.apply(f.mult[static_cast<size_t>(i)]) - J * f.mult[static_cast<size_t>(i)] +
                  f.mult[static_cast<size_t>(i)] * J;
    for (int l = 0; l < m; ++l) L += f.mult[static_cast<size_t>(l)] * J(l, i);
    out.push_back(L);
  }
  return out;
}

VectorFieldJet product(const FStructure& f, int a, int b) {
  return VectorFieldJet::from_column(column_of(f.mult[static_cast<size_t>(a)], b));
}

MatrixJet skew_part(const MatrixJet& A, const MatrixJet& G) { return (A - g_adjoint(A, G)) * cd(0.5); }

}  // namespace

MatrixJet FStructure::mult_by(const VectorFieldJet& X) const { return contract(mult, X); }

Primitive primitive_from_section(const ChartBundle& b, const MatrixJet& zeta) {
  require_square(b);
  if (zeta.rows() != b.n || zeta.cols() != 1) throw Error(ErrorKind::InvalidArgument, "section must be a column");
  const auto& C = b.require_C();
  Primitive p;
  p.zeta = zeta;
  p.I = MatrixJet(b.ctx, b.n, b.m());
  for (int i = 0; i < b.m(); ++i) {
    MatrixJet col = -(C[static_cast<size_t>(i)] * zeta);
    for (int r = 0; r < b.n; ++r) p.I(r, i) = col(r, 0);
  }
  Eigen::MatrixXcd I0 = p.I.constant_term();
  p.sigma_min = smallest_singular(I0);
  const double scale = std::max(1.0, I0.norm());
  if (p.sigma_min <= 1e-10 * scale) throw Error(ErrorKind::NoUnfolding, "I is singular for this section");
  return p;
}

Primitive find_primitive(const ChartBundle& b) {
  require_square(b);
  const int n = b.n;
  // subsets ordered by size, then lexicographically
  std::vector<unsigned> masks;
  for (unsigned s = 1; s < (1u << n); ++s) masks.push_back(s);
  std::stable_sort(masks.begin(), masks.end(),
                   [](unsigned a, unsigned c) { return __builtin_popcount(a) < __builtin_popcount(c); });
  std::optional<Primitive> best;
  for (unsigned s : masks) {
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(n, 1);
    for (int i = 0; i < n; ++i)
      if (s & (1u << i)) z(i, 0) = 1.0;
    try {
      Primitive p = primitive_from_section(b, MatrixJet::from_constant(b.ctx, z));
      if (!best || p.sigma_min > best->sigma_min * (1.0 + 1e-12)) best = p;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoUnfolding) throw;
    }
  }
  if (!best) throw Error(ErrorKind::NoUnfolding, "no frame subset sum is primitive");
  return *best;
}

FStructure induce_f_structure(const ChartBundle& b, const Primitive& p) {
  const auto& C = b.require_C();
  const MatrixJet& U = require(b.U, "U");
  MatrixJet Ii;
  try {
    Ii = invert_matrix(p.I);
  } catch (const Error&) {
    throw Error(ErrorKind::NoUnfolding, "I is not invertible");
  }
  const int m = b.m();
  FStructure f;
  // I(d_i o d_j) = C_i C_j zeta
  for (int i = 0; i < m; ++i) {
    MatrixJet Mi(b.ctx, m, m);
    for (int j = 0; j < m; ++j) {
      MatrixJet col = Ii * (C[static_cast<size_t>(i)] * (C[static_cast<size_t>(j)] * p.zeta));
      for (int k = 0; k < m; ++k) Mi(k, j) = col(k, 0);
    }
    f.mult.push_back(Mi);
  }
  f.e = VectorFieldJet::from_column(Ii * p.zeta);
  f.E = VectorFieldJet::from_column(Ii * (U * p.zeta));
  return f;
}

StructureReport check_f_manifold(const FStructure& f, double tol) {
  const int m = f.m();
  const JetContext& ctx = f.mult.at(0).context();
  const double thr = pass_threshold(tol, input_scale(f));
  StructureReport rep;
  rep.name = "f_manifold";
  std::vector<MatrixJet> comm, assoc, integ, euler;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      MatrixJet diff(ctx, m, 1);
      for (int k = 0; k < m; ++k) diff(k, 0) = f.mult[static_cast<size_t>(i)](k, j) - f.mult[static_cast<size_t>(j)](k, i);
      comm.push_back(diff);
      // M_i M_j = M_{d_i o d_j}
      assoc.push_back(f.mult[static_cast<size_t>(i)] * f.mult[static_cast<size_t>(j)] - f.mult_by(product(f, i, j)));
    }
  rep.add("commutative", residual_norm(comm), thr);
  rep.add("associative", residual_norm(assoc), thr);
  rep.add("unit", residual_norm(f.mult_by(f.e) - MatrixJet::identity(ctx, m)), thr);

  std::vector<std::vector<MatrixJet>> L;
  for (int a = 0; a < m; ++a) L.push_back(lie_of_mult(f, VectorFieldJet::coordinate(ctx, a)));
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      auto lhs = lie_of_mult(f, product(f, a, b));
      for (int i = 0; i < m; ++i)
        integ.push_back(lhs[static_cast<size_t>(i)] -
                        f.mult[static_cast<size_t>(a)] * L[static_cast<size_t>(b)][static_cast<size_t>(i)] -
                        f.mult[static_cast<size_t>(b)] * L[static_cast<size_t>(a)][static_cast<size_t>(i)]);
    }
  rep.add("integrability", residual_norm(integ), thr);
  auto LE = lie_of_mult(f, f.E);
  for (int i = 0; i < m; ++i) euler.push_back(LE[static_cast<size_t>(i)] - f.mult[static_cast<size_t>(i)]);
  rep.add("euler_weight_one", residual_norm(euler), thr);
  return rep;
}

QReconstruction reconstruct_Q(const ChartBundle& b, const Primitive& p, double tol) {
  const MatrixJet& U = require(b.U, "U");
  const MatrixJet& G = require(b.g, "g");
  const auto gamma = chern_connection(require(b.h, "h"));
  MatrixJet Ii;
  try {
    Ii = invert_matrix(p.I);
  } catch (const Error&) {
    throw Error(ErrorKind::NoUnfolding, "I is not invertible");
  }
  const int m = b.m(), n = b.n;
  // column i: D_i(U) zeta
  MatrixJet DU(b.ctx, n, m);
  for (int i = 0; i < m; ++i) {
    MatrixJet col = (U.derivative(i, true) + commutator(gamma[static_cast<size_t>(i)], U)) * p.zeta;
    for (int r = 0; r < n; ++r) DU(r, i) = col(r, 0);
  }
  QReconstruction out;
  out.Q = skew_part(DU * Ii, G);
  double mag = b.max_input_magnitude();
  const double thr = pass_threshold(tol, mag);
  out.report.name = "q_reconstruction";
  if (b.Q) out.report.add("stored_vs_reconstructed", residual_norm(*b.Q - out.Q), thr);
  if (b.tangent) {
    FStructure f = induce_f_structure(b, p);
    MatrixJet DE = along(gamma, f.E) + jacobian(f.E);
    out.Q_tangent = skew_part(DE, G);
    out.report.add("reconstructed_vs_tangent", residual_norm(out.Q - *out.Q_tangent), thr);
    if (b.Q) out.report.add("stored_vs_tangent", residual_norm(*b.Q - *out.Q_tangent), thr);
  }
  return out;
}

StructureReport check_tangent_chain(const ChartBundle& b, const FStructure& f, double d, double tol) {
  if (!b.tangent) throw Error(ErrorKind::InvalidArgument, "tangent-bundle data required");
  const MatrixJet& H = require(b.h, "h");
  const MatrixJet& G = require(b.g, "g");
  const MatrixJet& k = require(b.kappa, "kappa");
  const MatrixJet& Q = require(b.Q, "Q");
  const MatrixJet& U = require(b.U, "U");
  const auto gamma = chern_connection(H);
  const JetContext& ctx = b.ctx;
  const int m = b.m();
  const double thr = pass_threshold(tol, std::max(b.max_input_magnitude(), input_scale(f)));
  StructureReport rep;
  rep.name = "tangent_cv";

  const VectorFieldJet& e = f.e;
  const VectorFieldJet& E = f.E;
  const MatrixJet Ge = along(gamma, e), GE = along(gamma, E);
  const MatrixJet Je = jacobian(e), JE = jacobian(E);
  MatrixJet ecol = e.as_column();

  // (3.3) and the explicit formula for Q
  rep.add("Q_tangent_formula", residual_norm(Q - skew_part(GE + JE, G)), thr);
  rep.add("Lbar_e_Q", residual_norm(lie_derivative_endo(e, Q, true)), thr);
  rep.add("Dbar_e_Q", residual_norm(e.apply_bar(Q)), thr);
  rep.add("D_e_Q", residual_norm(e.apply(Q) + commutator(Ge, Q)), thr);

  // (3.4): every member evaluated on its own
  const std::vector<std::pair<std::string, MatrixJet>> chain = {
      {"D_e_minus_L_e", Ge + Je},
      {"D_e_e", Je * ecol + Ge * ecol},
      {"L_e_h", lie_derivative_h(e, H)},
      {"L_ebar_h", lie_derivative_h(e, H, true)},
      {"L_e_kappa", lie_derivative_antilinear(e, k)},
      {"L_ebar_kappa", lie_derivative_antilinear(e, k, true)},
      {"L_e_g", lie_derivative_bilinear(e, G)},
  };
  int zero = 0;
  for (auto& [tag, M] : chain) {
    if (rep.add("chain_" + tag, residual_norm(M), thr).pass) ++zero;
  }
  const bool all_zero = zero == static_cast<int>(chain.size());
  const bool all_nonzero = zero == 0;
  rep.add_flag("chain_consistent", all_zero || all_nonzero,
               all_zero ? "all members vanish" : all_nonzero ? "all members nonzero" : "members disagree");
  // members describe the chart; only their agreement is a verdict
  for (auto& en : rep.entries)
    if (en.tag.rfind("chain_", 0) == 0 && en.tag != "chain_consistent") {
      en.note = en.pass ? "zero" : "nonzero";
      en.pass = true;
    }
  if (all_zero) rep.add("L_e_Q", residual_norm(lie_derivative_endo(e, Q)), thr);

  const double weight_res = residual_norm(lie_derivative_bilinear(E, G) - G * cd(2.0 - d));
  auto& w = rep.add("L_E_g_weight", weight_res, thr);
  w.note = "hypothesis of the weight statements";
  if (w.pass) {
    MatrixJet Id = MatrixJet::identity(ctx, m);
    rep.add("Q_from_euler", residual_norm(Q - (GE + JE - Id * cd((2.0 - d) / 2.0))), thr);
    rep.add("L_E_minus_Ebar_h", residual_norm(lie_derivative_h(E, H) - lie_derivative_h(E, H, true)), thr);
    const MatrixJet target = commutator(U, kappa_conjugate(U, k));
    rep.add("L_E_Q", residual_norm(lie_derivative_endo(E, Q) - target), thr);
    rep.add("L_Ebar_Q", residual_norm(lie_derivative_endo(E, Q, true) - target), thr);
    rep.add("D_E_Q", residual_norm(E.apply(Q) + commutator(GE, Q) - target), thr);
    rep.add("D_Ebar_Q", residual_norm(E.apply_bar(Q) - target), thr);
  }
  return rep;
}

cd fit_weight(const ChartBundle& saito, const Primitive& p) {
  const MatrixJet& V = require(saito.V, "V");
  MatrixJet Vz = V * p.zeta;
  cd num = 0.0;
  double den = 0.0;
  for (int r = 0; r < saito.n; ++r)
    for (auto& [key, v] : p.zeta(r, 0).terms()) {
      num += std::conj(v) * Vz(r, 0).coeff(key);
      den += std::norm(v);
    }
  if (den == 0.0) throw Error(ErrorKind::BadSection, "zero section");
  return 2.0 * num / den;
}

FrobeniusChart build_frobenius(const ChartBundle& saito, const Primitive& p, double d, double tol) {
  const auto& gr = saito.require_gamma10();
  const MatrixJet& V = require(saito.V, "V");
  const MatrixJet& G = require(saito.g, "g");
  const double thr = pass_threshold(tol, saito.max_input_magnitude());
  double par = 0.0;
  for (int i = 0; i < saito.m(); ++i)
    par = std::max(par, (p.zeta.derivative(i, true) + gr[static_cast<size_t>(i)] * p.zeta).max_abs());
  if (par > thr) throw Error(ErrorKind::BadSection, "section is not flat, residual " + std::to_string(par));
  const double eig = (V * p.zeta - p.zeta * cd(d / 2.0)).max_abs();
  if (eig > thr) throw Error(ErrorKind::BadSection, "V(zeta) != (d/2) zeta, residual " + std::to_string(eig));

  FrobeniusChart out;
  out.f = induce_f_structure(saito, p);
  out.d = d;
  out.gM = p.I.transpose() * G * p.I;
  MatrixJet Ii = invert_matrix(p.I);
  for (int i = 0; i < saito.m(); ++i)
    out.gammaM.push_back(Ii * (p.I.derivative(i, true) + gr[static_cast<size_t>(i)] * p.I));
  return out;
}

std::vector<MatrixJet> levi_civita(const MatrixJet& gM) {
  const JetContext& ctx = gM.context();
  const int m = gM.rows();
  MatrixJet gi = invert_matrix(gM);
  std::vector<MatrixJet> dg;
  for (int i = 0; i < m; ++i) dg.push_back(gM.derivative(i, true));
  std::vector<MatrixJet> out;
  for (int i = 0; i < m; ++i) {
    // lowered symbols Gamma_{l, ij} = (d_i g_jl + d_j g_il - d_l g_ij) / 2, as a column over l per j
    MatrixJet low(ctx, m, m);
    for (int l = 0; l < m; ++l)
      for (int j = 0; j < m; ++j)
        low(l, j) = (dg[static_cast<size_t>(i)](j, l) + dg[static_cast<size_t>(j)](i, l) -
                     dg[static_cast<size_t>(l)](i, j)) *
                    cd(0.5);
    out.push_back(gi * low);
  }
  return out;
}

StructureReport check_frobenius(const FStructure& f, const MatrixJet& gM, double d, double tol) {
  const JetContext& ctx = gM.context();
  const int m = gM.rows();
  const double thr = pass_threshold(tol, std::max(input_scale(f), gM.max_abs()));
  StructureReport rep;
  rep.name = "frobenius";
  rep.merge(check_f_manifold(f, tol), "f_");
  Eigen::MatrixXcd g0 = gM.constant_term();
  rep.add_lower("metric_nondegenerate", smallest_singular(g0), 1e-10 * std::max(1.0, g0.norm()));
  rep.add("metric_symmetric", residual_norm(gM - gM.transpose()), thr);
  if (!rep.find("metric_nondegenerate")->pass) return rep;

  const auto G = levi_civita(gM);
  std::vector<MatrixJet> flat, tors, compat, pot, inv, unit;
  for (int i = 0; i < m; ++i) {
    compat.push_back(gM.derivative(i, true) - G[static_cast<size_t>(i)].transpose() * gM - gM * G[static_cast<size_t>(i)]);
    inv.push_back(f.mult[static_cast<size_t>(i)].transpose() * gM - gM * f.mult[static_cast<size_t>(i)]);
    unit.push_back(f.e.as_column().derivative(i, true) + G[static_cast<size_t>(i)] * f.e.as_column());
    for (int j = 0; j < m; ++j) {
      flat.push_back(G[static_cast<size_t>(j)].derivative(i, true) - G[static_cast<size_t>(i)].derivative(j, true) +
                     commutator(G[static_cast<size_t>(i)], G[static_cast<size_t>(j)]));
      MatrixJet t(ctx, m, 1);
      for (int k = 0; k < m; ++k) t(k, 0) = G[static_cast<size_t>(i)](k, j) - G[static_cast<size_t>(j)](k, i);
      tors.push_back(t);
      // C = -mult; potentiality of the Higgs field
      const MatrixJet& Ci = f.mult[static_cast<size_t>(i)];
      const MatrixJet& Cj = f.mult[static_cast<size_t>(j)];
      pot.push_back(Cj.derivative(i, true) - Ci.derivative(j, true) + commutator(G[static_cast<size_t>(i)], Cj) -
                    commutator(G[static_cast<size_t>(j)], Ci));
    }
  }
  rep.add("levi_civita_compatible", residual_norm(compat), thr);
  rep.add("torsion_free", residual_norm(tors), thr);
  rep.add("flat", residual_norm(flat), thr);
  rep.add("multiplication_invariant", residual_norm(inv), thr);
  rep.add("unit_parallel", residual_norm(unit), thr);
  rep.add("euler_metric_weight", residual_norm(lie_derivative_bilinear(f.E, gM) - gM * cd(2.0 - d)), thr);
  rep.add("potentiality", residual_norm(pot), thr);
  return rep;
}

StructureReport check_cdv(const ChartBundle& b, const FStructure& f, const MatrixJet& gM, cd d, double tol) {
  if (std::abs(d.imag()) > 0.0) throw Error(ErrorKind::NonRealWeight, "the weight d must be real");
  if (!b.tangent) throw Error(ErrorKind::InvalidArgument, "tangent-bundle data required");
  const double dr = d.real();
  const double thr = pass_threshold(tol, std::max(b.max_input_magnitude(), input_scale(f)));
  StructureReport rep;
  rep.name = "cdv";
  StructureReport cv = check_cv(b, tol);
  StructureReport fr = check_frobenius(f, gM, dr, tol);
  rep.merge(cv, "cv_");
  rep.merge(fr, "frobenius_");
  const auto& C = b.require_C();
  std::vector<MatrixJet> cm;
  for (int i = 0; i < b.m(); ++i) cm.push_back(C[static_cast<size_t>(i)] + f.mult[static_cast<size_t>(i)]);
  rep.add("C_is_minus_multiplication", residual_norm(cm), thr);
  rep.add("U_is_euler_multiplication", residual_norm(require(b.U, "U") - f.mult_by(f.E)), thr);
  rep.add("metric_agrees", residual_norm(require(b.g, "g") - gM), thr);
  const bool full = rep.pass();

  // reformulation: Frobenius chart + real structure, Q from the Euler formula
  // h-hermitian, D(C) = 0 and the (1,1) curvature law
  const MatrixJet& H = require(b.h, "h");
  const MatrixJet& k = require(b.kappa, "kappa");
  const auto gamma = chern_connection(H);
  const int m = b.m();
  MatrixJet Qe = along(gamma, f.E) + jacobian(f.E) - MatrixJet::identity(b.ctx, m) * cd((2.0 - dr) / 2.0);
  std::vector<MatrixJet> dc, curv;
  auto R = curvature(gamma, {});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const MatrixJet& Ci = C[static_cast<size_t>(i)];
      const MatrixJet& Cj = C[static_cast<size_t>(j)];
      dc.push_back(Cj.derivative(i, true) - Ci.derivative(j, true) + commutator(gamma[static_cast<size_t>(i)], Cj) -
                   commutator(gamma[static_cast<size_t>(j)], Ci));
      curv.push_back(R[static_cast<size_t>(i * m + j)] + commutator(Ci, kappa_conjugate(Cj, k)));
    }
  StructureReport small;
  small.add("Q_h_hermitian", residual_norm(Qe.transpose() * H - H * Qe.conj()), thr);
  small.add("higgs_parallel", residual_norm(dc), thr);
  small.add("curvature_law", residual_norm(curv), thr);
  small.add("kappa_involution", residual_norm(k * k.conj() - MatrixJet::identity(b.ctx, m)), thr);
  small.add("h_from_g_kappa", residual_norm(H - require(b.g, "g") * k), thr);
  const bool reduced = small.pass() && fr.pass() && rep.find("C_is_minus_multiplication")->pass &&
                       rep.find("U_is_euler_multiplication")->pass && rep.find("metric_agrees")->pass;
  rep.merge(small, "reduced_");
  rep.add_flag("formulations_agree", full == reduced,
               std::string("full ") + (full ? "pass" : "fail") + ", reduced " + (reduced ? "pass" : "fail"));
  return rep;
}

const char* point_kind_name(PointKind k) {
  switch (k) {
    case PointKind::Semisimple: return "semisimple";
    case PointKind::Irreducible: return "irreducible";
    case PointKind::Mixed: return "mixed";
  }
  return "mixed";
}

PointClass classify_point(const FStructure& f, double gap) {
  const int m = f.m();
  std::vector<Eigen::MatrixXcd> M0;
  for (auto& M : f.mult) M0.push_back(M.constant_term());
  std::mt19937_64 rng(20160901);
  std::normal_distribution<double> nd;

  PointClass best;
  std::vector<std::vector<cd>> best_clusters;
  Eigen::MatrixXcd best_probe;
  for (int probe = 0; probe < 3; ++probe) {
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i) P += cd(nd(rng), nd(rng)) * M0[static_cast<size_t>(i)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(P, false);
    Eigen::VectorXcd ev = es.eigenvalues();
    const double scale = 1.0 + ev.cwiseAbs().maxCoeff();
    // single-linkage clustering
    std::vector<int> parent(static_cast<size_t>(m));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)];
      return x;
    };
    for (int a = 0; a < m; ++a)
      for (int c = a + 1; c < m; ++c)
        if (std::abs(ev(a) - ev(c)) <= gap * scale) parent[static_cast<size_t>(find(a))] = find(c);
    std::vector<std::vector<cd>> clusters;
    std::vector<int> roots;
    for (int a = 0; a < m; ++a) {
      int r = find(a);
      auto it = std::find(roots.begin(), roots.end(), r);
      if (it == roots.end()) {
        roots.push_back(r);
        clusters.push_back({ev(a)});
      } else {
        clusters[static_cast<size_t>(it - roots.begin())].push_back(ev(a));
      }
    }
    if (clusters.size() > best_clusters.size()) {
      best_clusters = clusters;
      best_probe = P;
    }
  }
  // spectral projectors: product over the other clusters of (P - mean)^size
  const int nc = static_cast<int>(best_clusters.size());
  std::vector<Eigen::MatrixXcd> proj;
  std::vector<cd> mean;
  for (auto& c : best_clusters) {
    cd s = 0.0;
    for (cd v : c) s += v;
    mean.push_back(s / double(c.size()));
  }
  for (int c = 0; c < nc; ++c) {
    Eigen::MatrixXcd Pc = Eigen::MatrixXcd::Identity(m, m);
    for (int o = 0; o < nc; ++o) {
      if (o == c) continue;
      Eigen::MatrixXcd F = best_probe - mean[static_cast<size_t>(o)] * Eigen::MatrixXcd::Identity(m, m);
      for (size_t r = 0; r < best_clusters[static_cast<size_t>(o)].size(); ++r) Pc = Pc * F;
    }
    proj.push_back(Pc / std::max(Pc.norm(), 1e-300));
  }
  best.partition.assign(static_cast<size_t>(nc), {});
  for (int j = 0; j < m; ++j) {
    int arg = 0;
    double w = -1.0;
    for (int c = 0; c < nc; ++c) {
      double v = proj[static_cast<size_t>(c)].col(j).norm();
      if (v > w) {
        w = v;
        arg = c;
      }
    }
    best.partition[static_cast<size_t>(arg)].push_back(j);
  }
  std::stable_sort(best.partition.begin(), best.partition.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     return (a.empty() ? 1 << 20 : a[0]) < (b.empty() ? 1 << 20 : b[0]);
                   });
  for (auto& c : best_clusters) best.cluster_sizes.push_back(static_cast<int>(c.size()));
  std::sort(best.cluster_sizes.begin(), best.cluster_sizes.end());
  if (nc == m)
    best.kind = PointKind::Semisimple;
  else if (nc == 1)
    best.kind = PointKind::Irreducible;
  else
    best.kind = PointKind::Mixed;
  if (m == 1) best.kind = PointKind::Semisimple;
  return best;
}

}  // namespace cvforge
