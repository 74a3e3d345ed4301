#include "cvforge/correspondences.hpp"

namespace cvforge {

LaurentJet pairing_from_metric(const MatrixJet& G, int w) { return LaurentJet::single(w, G); }

TepData saito_connection_raw(const ChartBundle& b, int w) {
  const auto& C = b.require_C();
  const auto& Gam = b.require_gamma10();
  const MatrixJet& U = require(b.U, "U");
  const MatrixJet& V = require(b.V, "V");
  const MatrixJet& G = require(b.g, "g");
  const JetContext& ctx = b.ctx;
  TepData t;
  t.w = w;
  for (int i = 0; i < b.m(); ++i) t.conn.A.push_back(LaurentJet(-1, {C[i], Gam[i]}));
  t.conn.Az = LaurentJet(-1, {U, -V + MatrixJet::identity(ctx, b.n) * cd(w / 2.0)});
  t.P = pairing_from_metric(G, w);
  return t;
}

TepData cv_connection_raw(const ChartBundle& b, int w) {
  const auto& C = b.require_C();
  const MatrixJet& U = require(b.U, "U");
  const MatrixJet& G = require(b.g, "g");
  const MatrixJet& H = require(b.h, "h");
  const MatrixJet& k = require(b.kappa, "kappa");
  const MatrixJet& Q = require(b.Q, "Q");
  const JetContext& ctx = b.ctx;
  auto Gam = chern_connection(H);
  TepData t;
  t.w = w;
  MatrixJet zero(ctx, b.n, b.n);
  for (int i = 0; i < b.m(); ++i) {
    t.conn.A.push_back(LaurentJet(-1, {C[i], Gam[i]}));
    t.conn.Abar.push_back(LaurentJet(0, {zero, kappa_conjugate(C[i], k)}));
  }
  t.conn.Az = LaurentJet(-1, {U, -Q + MatrixJet::identity(ctx, b.n) * cd(w / 2.0), -kappa_conjugate(U, k)});
  t.P = pairing_from_metric(G, w);
  return t;
}

TepData build_saito_connection(const ChartBundle& b, int w, double tol) {
  StructureReport rep = check_saito(b, tol);
  if (!rep.pass()) throw AxiomFailure("Saito axioms fail; no connection built", rep);
  return saito_connection_raw(b, w);
}

TepData build_cv_connection(const ChartBundle& b, int w, double tol) {
  StructureReport rep = check_cv(b, tol);
  if (!rep.pass()) throw AxiomFailure("CV axioms fail; no connection built", rep);
  return cv_connection_raw(b, w);
}

KData extract_k_data(const TepData& tep, double tol) {
  StructureReport rep = check_tep(tep.conn, tep.P, tep.w, tol);
  if (!rep.pass()) throw AxiomFailure("connection data fail the TEP checks", rep);
  KData k;
  for (auto& a : tep.conn.A) k.C.push_back(a.coeff(-1));
  k.U = tep.conn.Az.coeff(-1);
  k.g = tep.P.coeff(tep.w);
  return k;
}

}  // namespace cvforge
