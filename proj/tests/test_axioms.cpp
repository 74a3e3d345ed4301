#include <functional>

#include "cvforge/correspondences.hpp"
#include "cvforge/fixtures.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cvforge;

namespace {

cd ipow(int w) { return std::pow(cd(0, 1), w); }

// Largest defect of the connection-with-pairing: curvature and flatness of P.
double tep_defect(const TepData& t) {
  auto rep = check_tep(t.conn, t.P, t.w, 1e-9);
  return std::max(rep.find("flatness")->residual, rep.find("pairing_flat")->residual);
}

}  // namespace

TEST_CASE("higgs pair examples") {
  CHECK(check_higgs_pair(example_rank1()).pass());
  ChartBundle e2 = example_semisimple(2, {0.0, 1.0});
  CHECK(check_higgs_pair(e2).pass());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2);
  A(0, 1) = A(1, 0) = 1.0;
  e2.g = MatrixJet::from_constant(e2.ctx, A);
  auto rep = check_higgs_pair(e2);
  CHECK_FALSE(rep.pass());
  CHECK_FALSE(rep.find("C_g_symmetric")->pass);
  ChartBundle missing = example_rank1();
  missing.U.reset();
  CHECK_THROWS_AS(check_higgs_pair(missing), Error);
}

TEST_CASE("saito examples") {
  CHECK(check_saito(example_rank1()).pass());
  auto f2 = check_saito(example_frobenius2());
  CHECK(f2.pass());
  CHECK(f2.max_residual() < 1e-9);
  ChartBundle e1 = example_rank1();
  MatrixJet V(e1.ctx, 1, 1);
  V(0, 0) = Jet::coordinate(e1.ctx, 0);
  e1.V = V;
  auto rep = check_saito(e1);
  CHECK_FALSE(rep.find("parallel_V")->pass);
}

TEST_CASE("tep examples: the rank-one connection") {
  for (int w = 0; w <= 2; ++w) {
    JetContext c(1, 6);
    MatrixJet one = MatrixJet::identity(c, 1);
    MatrixJet u(c, 1, 1);
    u(0, 0) = Jet::coordinate(c, 0);
    TepConnection conn;
    conn.A = {LaurentJet(-1, {one * cd(-1.0)})};
    conn.Az = LaurentJet(-1, {u, one * cd(w / 2.0)});
    LaurentJet P = LaurentJet::single(w, one * ipow(w));
    auto rep = check_tep(conn, P, w);
    CHECK(rep.pass());
    CHECK(rep.max_residual() < 1e-12);

    TepConnection bad = conn;
    bad.A = {LaurentJet(-2, {one * cd(-1.0)})};
    auto r2 = check_tep(bad, P, w);
    CHECK_FALSE(r2.find("pole_order")->pass);
  }
  JetContext c(1, 4);
  TepConnection conn;
  conn.A = {LaurentJet(-1, {MatrixJet::identity(c, 1)})};
  conn.Az = LaurentJet(-1, {MatrixJet::identity(c, 1)});
  CHECK_THROWS_AS(check_tep(conn, LaurentJet::single(0, MatrixJet::identity(c, 1)), 2), Error);
}

TEST_CASE("saito connection of E1 reproduces the rank-one example") {
  for (int w = 0; w <= 2; ++w) {
    ChartBundle e1 = example_rank1(w);
    TepData t = build_saito_connection(e1, w);
    CHECK(t.conn.A[0].coeff(-1)(0, 0).constant_term() == cd(-1.0));
    CHECK(t.conn.A[0].coeff(0).is_zero());
    CHECK(t.conn.Az.coeff(-1)(0, 0).coeff({1}, {0}) == cd(1.0));
    CHECK(t.conn.Az.coeff(0)(0, 0).constant_term() == cd(w / 2.0));
    CHECK(std::abs(t.P.coeff(w)(0, 0).constant_term() - ipow(w)) < 1e-15);
    auto rep = check_tep(t.conn, t.P, w);
    CHECK(rep.pass());
    CHECK(rep.max_residual() < 1e-12);
    KData k = extract_k_data(t);
    CHECK((k.C[0] - e1.C[0]).is_zero());
    CHECK((k.U - *e1.U).is_zero());
    CHECK(std::abs(k.g(0, 0).constant_term() - ipow(w)) < 1e-15);
  }
}

TEST_CASE("saito connection: F2 round trip and E2 block structure") {
  ChartBundle f2 = example_frobenius2();
  TepData t = build_saito_connection(f2, 1);
  CHECK(check_tep(t.conn, t.P, 1).pass());
  KData k = extract_k_data(t);
  for (int i = 0; i < 2; ++i) CHECK((k.C[i] - f2.C[i]).is_zero());
  CHECK((k.U - *f2.U).is_zero());
  CHECK((k.g - *f2.g).is_zero());

  TepData e = build_saito_connection(example_semisimple(2, {0.0, 1.0}), 0);
  for (auto& a : e.conn.A)
    for (int p = a.lo(); p <= a.hi(); ++p) {
      CHECK(a.coeff(p)(0, 1).is_zero());
      CHECK(a.coeff(p)(1, 0).is_zero());
    }
  KData ke = extract_k_data(e);
  CHECK(ke.U(0, 1).is_zero());
  CHECK(ke.U(1, 1).coeff({0, 1}, {0, 0}) == cd(1.0));

  ChartBundle broken = f2;
  broken.V = MatrixJet::identity(f2.ctx, 2);
  CHECK_THROWS_AS(build_saito_connection(broken, 0), AxiomFailure);
}

TEST_CASE("saito axioms hold exactly when the connection is flat") {
  // unperturbed fixtures: both sides pass
  for (auto& b : {example_rank1(), example_semisimple(2, {0.0, 1.0}), example_frobenius2()}) {
    CHECK(check_saito(b).pass());
    TepData t = saito_connection_raw(b, 0);
    CHECK(check_tep(t.conn, t.P, 0).pass());
  }
  // each perturbation breaks one tensor by eps * t_1
  const double eps = 1e-2;
  using Edit = std::function<void(ChartBundle&)>;
  auto bump = [eps](MatrixJet& M, int i, int j) { M(i, j) += Jet::coordinate(M.context(), 0) * cd(eps); };
  struct Case {
    const char* name;
    int fixture;
    Edit edit;
  };
  std::vector<Case> cases = {
      {"E1 U", 0, [&](ChartBundle& b) { bump(*b.U, 0, 0); }},
      {"E1 V", 0, [&](ChartBundle& b) { bump(*b.V, 0, 0); }},
      {"E1 g", 0, [&](ChartBundle& b) { bump(*b.g, 0, 0); }},
      {"E1 C", 0, [&](ChartBundle& b) { bump(b.C[0], 0, 0); }},
      {"E1 Gamma", 0, [&](ChartBundle& b) { bump(b.gamma10[0], 0, 0); }},
      {"E2 C1", 1, [&](ChartBundle& b) { bump(b.C[0], 0, 1); }},
      {"E2 U", 1, [&](ChartBundle& b) { bump(*b.U, 0, 0); }},
      {"E2 Gamma1", 1, [&](ChartBundle& b) { bump(b.gamma10[0], 0, 1); }},
      {"E2 V", 1, [&](ChartBundle& b) { bump(*b.V, 0, 1); }},
      {"F2 C2", 2, [&](ChartBundle& b) { bump(b.C[1], 0, 1); }},
      {"F2 V", 2, [&](ChartBundle& b) { bump(*b.V, 0, 0); }},
      {"F2 g", 2, [&](ChartBundle& b) {
         bump(*b.g, 0, 1);
         bump(*b.g, 1, 0);
       }},
  };
  for (auto& cs : cases) {
    CAPTURE(cs.name);
    ChartBundle b = cs.fixture == 0 ? example_rank1() : cs.fixture == 1 ? example_semisimple(2, {0.0, 1.0})
                                                                        : example_frobenius2();
    cs.edit(b);
    CHECK_FALSE(check_saito(b).pass());
    TepData t = saito_connection_raw(b, 0);
    CHECK(tep_defect(t) >= eps / 10);
    CHECK_FALSE(check_tep(t.conn, t.P, 0).pass());
  }
}

TEST_CASE("cv connection") {
  SUBCASE("E1 coefficients") {
    for (int w = 0; w <= 2; ++w) {
      ChartBundle e1 = example_rank1(w);
      TepData t = build_cv_connection(e1, w);
      CHECK(t.conn.A[0].coeff(-1)(0, 0).constant_term() == cd(-1.0));
      CHECK(t.conn.Abar[0].coeff(1)(0, 0).constant_term() == cd(-1.0));
      CHECK(t.conn.Az.coeff(0)(0, 0).constant_term() == cd(w / 2.0));
      // the z coefficient of A_z is -ubar
      CHECK(t.conn.Az.coeff(1)(0, 0).coeff({0}, {1}) == cd(-1.0));
      CHECK(flatness_residual(t.conn) < 1e-12);
      CHECK(check_tep(t.conn, t.P, w).pass());
    }
  }
  SUBCASE("E2 and SG are flat") {
    TepData e2 = build_cv_connection(example_semisimple(2, {0.0, 1.0}), 0);
    CHECK(flatness_residual(e2.conn) < 1e-8);
    for (auto& a : e2.conn.Abar) CHECK(a.coeff(1)(0, 1).is_zero());
    TepData sg = build_cv_connection(sinh_gordon_jet(8, 8), 0);
    CHECK(flatness_residual(sg.conn) < 1e-8);
    TepData sgu = build_cv_connection(sinh_gordon_unfolded(6), 0);
    CHECK(flatness_residual(sgu.conn) < 1e-8);
  }
  SUBCASE("flatness tracks the axiom residual") {
    ChartBundle b = sinh_gordon_jet(8, 8);
    double ax = check_cv(b).max_residual();
    CHECK(flatness_residual(cv_connection_raw(b, 0).conn) < 10 * std::max(ax, 1e-15) + 1e-13);
  }
  SUBCASE("z^0 part of the (0,1) form is the Chern (0,1) part") {
    TepData sg = build_cv_connection(sinh_gordon_jet(8, 8), 0);
    CHECK(sg.conn.Abar[0].coeff(0).is_zero());
  }
  SUBCASE("failing axioms refuse to build") {
    ChartBundle b = sinh_gordon_jet(8, 8);
    b.h = MatrixJet::identity(b.ctx, 2);
    CHECK_THROWS_AS(build_cv_connection(b, 0), AxiomFailure);
  }
}
