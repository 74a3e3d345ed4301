#include "cvforge/axioms.hpp"

#include <algorithm>
#include <cmath>

namespace cvforge {

namespace {

double antiholomorphic_magnitude(const MatrixJet& M) {
  const JetContext& ctx = M.context();
  const Key lowmask = (Key{1} << (4 * ctx.m)) - 1;
  double r = 0.0;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      for (auto& [k, v] : M(i, j).terms())
        if ((k & ~lowmask) != 0) r = std::max(r, std::abs(v));
  return r;
}

double smallest_singular_value(const Eigen::MatrixXcd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double laurent_max(const LaurentJet& L, int below = 1 << 30) {
  double r = 0.0;
  for (int p = L.lo(); p <= L.hi() && p < below; ++p) r = std::max(r, L.coeff(p).max_abs());
  return r;
}

}  // namespace

StructureReport check_higgs_pair(const ChartBundle& b, double tol) {
  const auto& C = b.require_C();
  const MatrixJet& U = require(b.U, "U");
  const MatrixJet& G = require(b.g, "g");
  const double thr = pass_threshold(tol, b.max_input_magnitude());
  StructureReport rep;
  rep.name = "higgs_pair";
  const int m = b.m();

  double cc = 0.0, cu = 0.0, csym = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) cc = std::max(cc, residual_norm(commutator(C[i], C[j])));
    cu = std::max(cu, residual_norm(commutator(C[i], U)));
    csym = std::max(csym, residual_norm(G * C[i] - C[i].transpose() * G));
  }
  double hol = std::max(antiholomorphic_magnitude(U), antiholomorphic_magnitude(G));
  for (auto& c : C) hol = std::max(hol, antiholomorphic_magnitude(c));

  rep.add("holomorphic_data", hol, thr);
  rep.add("g_symmetric", residual_norm(G - G.transpose()), thr);
  rep.add_lower("g_nondegenerate", smallest_singular_value(G.constant_term()), thr);
  rep.add("commuting_higgs", cc, thr);
  rep.add("higgs_commutes_U", cu, thr);
  rep.add("C_g_symmetric", csym, thr);
  rep.add("U_g_symmetric", residual_norm(G * U - U.transpose() * G), thr);
  return rep;
}

StructureReport check_saito(const ChartBundle& b, double tol) {
  StructureReport rep;
  rep.name = "saito";
  rep.merge(check_higgs_pair(b, tol));
  const auto& C = b.require_C();
  const auto& Gam = b.require_gamma10();
  const MatrixJet& U = require(b.U, "U");
  const MatrixJet& V = require(b.V, "V");
  const MatrixJet& G = require(b.g, "g");
  const double thr = pass_threshold(tol, b.max_input_magnitude());
  const int m = b.m();

  double hol = antiholomorphic_magnitude(V);
  for (auto& x : Gam) hol = std::max(hol, antiholomorphic_magnitude(x));
  for (auto& x : b.gamma01) hol = std::max(hol, x.max_abs());

  double flat = 0.0, pot = 0.0, euler = 0.0, parV = 0.0, parg = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      flat = std::max(flat, residual_norm(Gam[j].derivative(i, true) - Gam[i].derivative(j, true) +
                                          commutator(Gam[i], Gam[j])));
      MatrixJet DiCj = C[j].derivative(i, true) + commutator(Gam[i], C[j]);
      MatrixJet DjCi = C[i].derivative(j, true) + commutator(Gam[j], C[i]);
      pot = std::max(pot, residual_norm(DiCj - DjCi));
    }
    MatrixJet DU = U.derivative(i, true) + commutator(Gam[i], U);
    euler = std::max(euler, residual_norm(DU - commutator(C[i], V) + C[i]));
    parV = std::max(parV, residual_norm(V.derivative(i, true) + commutator(Gam[i], V)));
    parg = std::max(parg, residual_norm(G.derivative(i, true) - Gam[i].transpose() * G - G * Gam[i]));
  }
  rep.add("holomorphic_connection", hol, thr);
  rep.add("flatness", flat, thr);
  rep.add("potentiality", pot, thr);
  rep.add("euler_relation", euler, thr);
  rep.add("parallel_V", parV, thr);
  rep.add("parallel_g", parg, thr);
  rep.add("V_g_skew", residual_norm(G * V + V.transpose() * G), thr);
  return rep;
}

StructureReport check_cv(const ChartBundle& b, double tol) {
  StructureReport rep;
  rep.name = "cv";
  rep.merge(check_higgs_pair(b, tol));
  const auto& C = b.require_C();
  const MatrixJet& U = require(b.U, "U");
  const MatrixJet& G = require(b.g, "g");
  const MatrixJet& H = require(b.h, "h");
  const MatrixJet& k = require(b.kappa, "kappa");
  const MatrixJet& Q = require(b.Q, "Q");
  const double thr = pass_threshold(tol, b.max_input_magnitude());
  const int m = b.m();
  const int n = b.n;
  const JetContext& ctx = b.ctx;

  // D is always the Chern connection of h.
  std::vector<MatrixJet> Gam = chern_connection(H);
  std::vector<MatrixJet> R = curvature(Gam, {});
  std::vector<MatrixJet> Ct;
  for (auto& c : C) Ct.push_back(kappa_conjugate(c, k));
  MatrixJet Ut = kappa_conjugate(U, k);

  rep.add("h_hermitian", residual_norm(H.transpose().conj() - H), thr);
  rep.add("h_from_g_kappa", residual_norm(H - G * k), thr);
  rep.add("kappa_involution", residual_norm(k * k.conj() - MatrixJet::identity(ctx, n)), thr);
  rep.add("g_kappa_real", residual_norm(k.transpose() * G * k - G.conj()), thr);

  double park = 0.0, pot = 0.0, tts = 0.0, urel = 0.0, qrel = 0.0;
  for (int i = 0; i < m; ++i) {
    park = std::max(park, residual_norm(k.derivative(i, true) + Gam[i] * k));
    park = std::max(park, residual_norm(k.derivative(i, false) - k * Gam[i].conj()));
    for (int j = i + 1; j < m; ++j) {
      MatrixJet DiCj = C[j].derivative(i, true) + commutator(Gam[i], C[j]);
      MatrixJet DjCi = C[i].derivative(j, true) + commutator(Gam[j], C[i]);
      pot = std::max(pot, residual_norm(DiCj - DjCi));
    }
    for (int j = 0; j < m; ++j)
      tts = std::max(tts, residual_norm(R[static_cast<size_t>(i * m + j)] + commutator(C[i], Ct[j])));
    MatrixJet DU = U.derivative(i, true) + commutator(Gam[i], U);
    urel = std::max(urel, residual_norm(DU - commutator(C[i], Q) + C[i]));
    MatrixJet DQ = Q.derivative(i, true) + commutator(Gam[i], Q);
    qrel = std::max(qrel, residual_norm(DQ + commutator(C[i], Ut)));
  }
  rep.add("parallel_kappa", park, thr);
  rep.add("higgs_parallel", pot, thr);
  rep.add("tt_star_curvature", tts, thr);
  rep.add("Q_g_skew", residual_norm(G * Q + Q.transpose() * G), thr);
  rep.add("U_relation", urel, thr);
  rep.add("Q_relation", qrel, thr);
  rep.add("Q_h_hermitian", residual_norm(Q.transpose() * H - H * Q.conj()), thr);
  return rep;
}

std::vector<CurvatureComponent> connection_curvature(const TepConnection& conn) {
  const int m = static_cast<int>(conn.A.size());
  if (m == 0 || conn.Az.empty()) throw Error(ErrorKind::BadLaurentRange, "connection data incomplete");
  const JetContext& ctx = conn.Az.context();
  if (ctx.m != m) throw Error(ErrorKind::BadLaurentRange, "one (1,0) form per coordinate expected");
  for (auto& a : conn.A)
    if (a.empty() || a.context() != ctx) throw Error(ErrorKind::BadLaurentRange, "mismatched connection forms");
  if (!conn.Abar.empty() && static_cast<int>(conn.Abar.size()) != m)
    throw Error(ErrorKind::BadLaurentRange, "one (0,1) form per coordinate expected");
  const int n = conn.Az.rows();
  auto zero = LaurentJet::zero(ctx, n, n, 0, 0);
  auto bar = [&](int j) -> const LaurentJet& { return conn.Abar.empty() ? zero : conn.Abar[static_cast<size_t>(j)]; };
  auto br = [](const LaurentJet& a, const LaurentJet& b) { return a * b - b * a; };

  std::vector<CurvatureComponent> out;
  for (int i = 0; i < m; ++i) {
    const LaurentJet& Ai = conn.A[static_cast<size_t>(i)];
    for (int j = i + 1; j < m; ++j) {
      const LaurentJet& Aj = conn.A[static_cast<size_t>(j)];
      out.push_back({"F_" + std::to_string(i) + std::to_string(j),
                     Aj.derivative(i, true) - Ai.derivative(j, true) + br(Ai, Aj)});
      out.push_back({"F_b" + std::to_string(i) + "b" + std::to_string(j),
                     bar(j).derivative(i, false) - bar(i).derivative(j, false) + br(bar(i), bar(j))});
    }
    for (int j = 0; j < m; ++j)
      out.push_back({"F_" + std::to_string(i) + "b" + std::to_string(j),
                     bar(j).derivative(i, true) - Ai.derivative(j, false) + br(Ai, bar(j))});
    out.push_back({"F_" + std::to_string(i) + "z", conn.Az.derivative(i, true) - Ai.z_dz() + br(Ai, conn.Az)});
    out.push_back({"F_b" + std::to_string(i) + "z",
                   conn.Az.derivative(i, false) - bar(i).z_dz() + br(bar(i), conn.Az)});
  }
  return out;
}

double flatness_residual(const TepConnection& conn) {
  double r = 0.0;
  for (auto& c : connection_curvature(conn)) r = std::max(r, laurent_max(c.F));
  return r;
}

double laurent_magnitude(const TepConnection& conn) {
  double r = laurent_max(conn.Az);
  for (auto& a : conn.A) r = std::max(r, laurent_max(a));
  for (auto& a : conn.Abar) r = std::max(r, laurent_max(a));
  return r;
}

StructureReport check_tep(const TepConnection& conn, const LaurentJet& P, int w, double tol) {
  if (P.empty()) throw Error(ErrorKind::BadLaurentRange, "pairing missing");
  if (P.lo() > w || P.hi() < w) throw Error(ErrorKind::BadLaurentRange, "pairing range must contain z^w");
  auto curv = connection_curvature(conn);  // validates shapes
  if (P.context() != conn.Az.context()) throw Error(ErrorKind::BadLaurentRange, "pairing context mismatch");

  double mag = std::max(laurent_magnitude(conn), [&] {
    double r = 0.0;
    for (int p = P.lo(); p <= P.hi(); ++p) r = std::max(r, P.coeff(p).max_abs());
    return r;
  }());
  const double thr = pass_threshold(tol, mag);
  StructureReport rep;
  rep.name = "tep";

  double pole = laurent_max(conn.Az, -1);
  for (auto& a : conn.A) pole = std::max(pole, laurent_max(a, -1));
  for (auto& a : conn.Abar) pole = std::max(pole, laurent_max(a, 0));
  rep.add("pole_order", pole, thr);

  double flat = 0.0;
  for (auto& c : curv) flat = std::max(flat, laurent_max(c.F));
  rep.add("flatness", flat, thr);

  double sym = 0.0;
  const double sw = (w % 2 == 0) ? 1.0 : -1.0;
  for (int p = P.lo(); p <= P.hi(); ++p) {
    const double sp = (p % 2 == 0) ? 1.0 : -1.0;
    MatrixJet c = P.coeff(p);
    sym = std::max(sym, residual_norm(c.transpose() * sp - c * sw));
  }
  rep.add("pairing_symmetry", sym, thr);

  rep.add("pairing_holomorphic_at_0", laurent_max(P, w), thr);
  rep.add_lower("pairing_nondegenerate", smallest_singular_value(P.coeff(w).constant_term()), thr);

  double pflat = 0.0;
  const int m = static_cast<int>(conn.A.size());
  for (int i = 0; i < m; ++i) {
    const LaurentJet& Ai = conn.A[static_cast<size_t>(i)];
    LaurentJet r = P.derivative(i, true) - Ai.transpose() * P - P * Ai.reflect();
    pflat = std::max(pflat, laurent_max(r));
    if (!conn.Abar.empty()) {
      const LaurentJet& Bi = conn.Abar[static_cast<size_t>(i)];
      LaurentJet rb = P.derivative(i, false) - Bi.transpose() * P - P * Bi.reflect();
      pflat = std::max(pflat, laurent_max(rb));
    } else {
      pflat = std::max(pflat, laurent_max(P.derivative(i, false)));
    }
  }
  LaurentJet rz = P.z_dz() - conn.Az.transpose() * P - P * conn.Az.reflect();
  pflat = std::max(pflat, laurent_max(rz));
  rep.add("pairing_flat", pflat, thr);
  return rep;
}

}  // namespace cvforge
