#include "cvforge/fixtures.hpp"
#include "cvforge/unfolding.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cvforge;

namespace {

// Multiplication from the third derivatives of the F2 potential
// t1^2 t2 / 2 + t2^4 / 24 and the antidiagonal metric.
std::vector<MatrixJet> wdvv_multiplication(const JetContext& c) {
  Jet t1 = Jet::coordinate(c, 0), t2 = Jet::coordinate(c, 1);
  Jet phi = t1 * t1 * t2 * cd(0.5) + t2 * t2 * t2 * t2 * cd(1.0 / 24.0);
  std::vector<MatrixJet> M;
  for (int i = 0; i < 2; ++i) {
    MatrixJet Mi(c, 2, 2);
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        // g^{-1} swaps the index
        Mi(k, j) = phi.derivative(i, true).derivative(j, true).derivative(1 - k, true);
      }
    M.push_back(Mi);
  }
  return M;
}

MatrixJet column(const JetContext& c, std::vector<cd> v) {
  MatrixJet z(c, static_cast<int>(v.size()), 1);
  for (size_t i = 0; i < v.size(); ++i) z(static_cast<int>(i), 0) = Jet::constant(c, v[i]);
  return z;
}

}  // namespace

TEST_CASE("find_primitive") {
  ChartBundle e1 = example_rank1();
  Primitive p1 = find_primitive(e1);
  CHECK(p1.zeta(0, 0).constant_term() == cd(1.0));
  CHECK(p1.I(0, 0).constant_term() == cd(1.0));

  ChartBundle e2 = example_semisimple(2, {0.0, 1.0});
  Primitive p2 = find_primitive(e2);
  CHECK((p2.zeta.constant_term() - Eigen::MatrixXcd::Ones(2, 1)).norm() < 1e-15);
  CHECK((p2.I - MatrixJet::identity(e2.ctx, 2)).is_zero());

  Primitive pf = find_primitive(example_frobenius2());
  CHECK(pf.zeta(0, 0).constant_term() == cd(1.0));
  CHECK(pf.zeta(1, 0).is_zero());

  ChartBundle dead = e2;
  for (auto& c : dead.C) c = MatrixJet(e2.ctx, 2, 2);
  try {
    find_primitive(dead);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoUnfolding);
  }
  CHECK_THROWS_AS(find_primitive(sinh_gordon_jet(4, 4)), Error);
}

TEST_CASE("induced F-manifolds") {
  SUBCASE("E1") {
    ChartBundle e1 = example_rank1();
    FStructure f = induce_f_structure(e1, find_primitive(e1));
    CHECK(f.e.comp[0].constant_term() == cd(1.0));
    CHECK((f.E.comp[0] - Jet::coordinate(e1.ctx, 0)).is_zero());
    CHECK((f.mult[0] - MatrixJet::identity(e1.ctx, 1)).is_zero());
    CHECK(check_f_manifold(f).pass());
  }
  SUBCASE("E2: canonical coordinates") {
    ChartBundle e2 = example_semisimple(2, {0.0, 1.0});
    FStructure f = induce_f_structure(e2, find_primitive(e2));
    for (int i = 0; i < 2; ++i) {
      CHECK(f.e.comp[static_cast<size_t>(i)].constant_term() == cd(1.0));
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          CHECK(f.mult[static_cast<size_t>(i)](k, j).constant_term() == cd(i == j && j == k ? 1.0 : 0.0));
    }
    CHECK((f.E.comp[1] - Jet::coordinate(e2.ctx, 1) - Jet::constant(e2.ctx, 1.0)).is_zero());
    CHECK(check_f_manifold(f).pass());
    // another primitive section gives the same structure
    FStructure g = induce_f_structure(e2, primitive_from_section(e2, column(e2.ctx, {1.0, 2.0})));
    for (int i = 0; i < 2; ++i) CHECK((f.mult[static_cast<size_t>(i)] - g.mult[static_cast<size_t>(i)]).max_abs() < 1e-14);
    CHECK((f.E - g.E).max_abs() < 1e-14);
    CHECK((f.e - g.e).max_abs() < 1e-14);
  }
  SUBCASE("F2 against the potential") {
    ChartBundle f2 = example_frobenius2();
    FStructure f = induce_f_structure(f2, find_primitive(f2));
    auto oracle = wdvv_multiplication(f2.ctx);
    for (int i = 0; i < 2; ++i) CHECK((f.mult[static_cast<size_t>(i)] - oracle[static_cast<size_t>(i)]).max_abs() < 1e-14);
    CHECK(f.mult[1](0, 1).coeff({0, 1}, {0, 0}) == cd(1.0));
    CHECK((f.E.comp[1] - Jet::coordinate(f2.ctx, 1) * cd(2.0 / 3.0)).max_abs() < 1e-15);
    auto rep = check_f_manifold(f);
    CHECK(rep.pass());
    FStructure bad = f;
    bad.E.comp[1] = bad.E.comp[1] * cd(1.01);
    auto rb = check_f_manifold(bad);
    CHECK_FALSE(rb.find("euler_weight_one")->pass);
    CHECK(rb.find("integrability")->pass);
  }
  SUBCASE("every fixture induces an F-manifold") {
    for (auto& b : {sinh_gordon_unfolded(6), join(example_rank1(), example_frobenius2()),
                    example_semisimple(3, {0.0, 1.0, -2.0}, 4)})
      CHECK(check_f_manifold(induce_f_structure(b, find_primitive(b))).pass());
  }
}

TEST_CASE("reconstruct_Q matches stored Q") {
  for (auto& b : {example_rank1(), example_semisimple(2, {0.0, 1.0}), sinh_gordon_unfolded(6, 0.1)}) {
    Primitive p = find_primitive(b);
    QReconstruction q = reconstruct_Q(b, p);
    CHECK((q.Q - *b.Q).max_abs() < 1e-9);
    REQUIRE(q.Q_tangent);
    CHECK((*q.Q_tangent - *b.Q).max_abs() < 1e-9);
    CHECK(q.report.pass());
    ChartBundle off = b;
    Eigen::MatrixXcd bump = Eigen::MatrixXcd::Zero(b.n, b.n);
    bump(0, 0) = 1e-3;
    off.Q = *b.Q + MatrixJet::from_constant(b.ctx, bump);
    auto r = reconstruct_Q(off, p).report;
    CHECK_FALSE(r.pass());
    CHECK(r.find("stored_vs_reconstructed")->residual >= 1e-3 - 1e-12);
  }
}

TEST_CASE("tangent-bundle equivalence chain") {
  SUBCASE("E1 and E2: all members vanish") {
    for (auto& b : {example_rank1(), example_semisimple(2, {0.0, 1.0})}) {
      FStructure f = induce_f_structure(b, find_primitive(b));
      auto rep = check_tangent_chain(b, f, 0.0);
      CHECK(rep.pass());
      CHECK(rep.find("chain_consistent")->note == "all members vanish");
      CHECK(rep.find("Q_from_euler")->pass);
      CHECK(rep.find("L_e_Q")->pass);
    }
  }
  SUBCASE("exponential metric: all members nonzero") {
    ChartBundle b = example_rank1_exp_metric();
    FStructure f = induce_f_structure(b, find_primitive(b));
    auto rep = check_tangent_chain(b, f, 0.0);
    CHECK(rep.find("chain_consistent")->pass);
    CHECK(rep.find("chain_consistent")->note == "all members nonzero");
    for (auto& en : rep.entries)
      if (en.tag.rfind("chain_", 0) == 0 && en.tag != "chain_consistent") {
        CAPTURE(en.tag);
        CHECK(en.residual > 0.1);
      }
  }
  SUBCASE("SG-unfolded with d = 1/3") {
    ChartBundle b = sinh_gordon_unfolded(6, 0.1);
    FStructure f = induce_f_structure(b, find_primitive(b));
    auto rep = check_tangent_chain(b, f, 1.0 / 3.0);
    CHECK(rep.pass());
    CHECK(rep.find("L_E_Q") != nullptr);
    auto wrong = check_tangent_chain(b, f, 0.5);
    CHECK_FALSE(wrong.find("L_E_g_weight")->pass);
    CHECK(wrong.find("Q_from_euler") == nullptr);
  }
}

TEST_CASE("Frobenius charts") {
  SUBCASE("E1") {
    ChartBundle e1 = example_rank1();
    Primitive p = find_primitive(e1);
    FrobeniusChart fc = build_frobenius(e1, p, 0.0);
    CHECK((fc.gM - MatrixJet::identity(e1.ctx, 1)).is_zero());
    CHECK(check_frobenius(fc.f, fc.gM, 0.0).pass());
    CHECK_FALSE(check_frobenius(fc.f, fc.gM, 2.0).find("euler_metric_weight")->pass);
    MatrixJet uz(e1.ctx, 1, 1);
    uz(0, 0) = Jet::coordinate(e1.ctx, 0) + Jet::constant(e1.ctx, 1.0);
    try {
      build_frobenius(e1, primitive_from_section(e1, uz), 0.0);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BadSection);
    }
  }
  SUBCASE("F2 recovers its metric") {
    ChartBundle f2 = example_frobenius2();
    Primitive p = find_primitive(f2);
    CHECK(std::abs(fit_weight(f2, p) - cd(1.0 / 3.0)) < 1e-14);
    FrobeniusChart fc = build_frobenius(f2, p, 1.0 / 3.0);
    CHECK((fc.gM - *f2.g).is_zero());
    auto lc = levi_civita(fc.gM);
    for (int i = 0; i < 2; ++i) CHECK((fc.gammaM[static_cast<size_t>(i)] - lc[static_cast<size_t>(i)]).max_abs() < 1e-14);
    auto rep = check_frobenius(fc.f, fc.gM, 1.0 / 3.0);
    CHECK(rep.pass());
    CHECK(rep.max_residual() < 1e-9);
    CHECK_THROWS_AS(build_frobenius(f2, p, 1.0), Error);
  }
  SUBCASE("Levi-Civita of a curved metric") {
    JetContext c(2, 5);
    Jet t1 = Jet::coordinate(c, 0);
    MatrixJet g = MatrixJet::identity(c, 2);
    g(0, 0) = Jet::constant(c, 1.0) + t1 * t1;
    auto G = levi_civita(g);
    // Gamma^1_11 = t1 / (1 + t1^2)
    CHECK(std::abs(G[0](0, 0).coeff({1, 0}, {0, 0}) - cd(1.0)) < 1e-14);
    CHECK(std::abs(G[0](0, 0).coeff({3, 0}, {0, 0}) + cd(1.0)) < 1e-14);
    CHECK(G[1].is_zero());
  }
}

TEST_CASE("CDV charts") {
  SUBCASE("E1 with trivial CV data") {
    ChartBundle e1 = example_rank1();
    FStructure f = induce_f_structure(e1, find_primitive(e1));
    auto rep = check_cdv(e1, f, *e1.g, 0.0);
    CHECK(rep.pass());
    CHECK(rep.find("formulations_agree")->pass);
  }
  SUBCASE("F2 with the SG metric") {
    ChartBundle b = sinh_gordon_unfolded(6, 0.1);
    FStructure f = induce_f_structure(b, find_primitive(b));
    auto rep = check_cdv(b, f, *b.g, 1.0 / 3.0);
    CHECK(rep.pass());
    CHECK(rep.find("formulations_agree")->pass);
    // breaking the metric breaks both formulations
    ChartBundle bad = b;
    Jet r = Jet::coordinate(b.ctx, 1) * Jet::coordinate(b.ctx, 1, false);
    bad.h = *b.h * (Jet::constant(b.ctx, 1.0) + r * cd(0.1));
    bad.kappa = invert_matrix(*b.g) * *bad.h;
    auto rb = check_cdv(bad, f, *b.g, 1.0 / 3.0);
    CHECK_FALSE(rb.pass());
    CHECK(rb.find("formulations_agree")->pass);
    try {
      check_cdv(b, f, *b.g, cd(1.0 / 3.0, 0.1));
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonRealWeight);
    }
  }
}

TEST_CASE("classify_point") {
  ChartBundle e2 = example_semisimple(2, {0.0, 1.0});
  CHECK(classify_point(induce_f_structure(e2, find_primitive(e2))).kind == PointKind::Semisimple);
  ChartBundle f2 = example_frobenius2();
  PointClass pf = classify_point(induce_f_structure(f2, find_primitive(f2)));
  CHECK(pf.kind == PointKind::Irreducible);
  ChartBundle j = join(example_rank1(), example_frobenius2());
  PointClass pj = classify_point(induce_f_structure(j, find_primitive(j)));
  CHECK(pj.kind == PointKind::Mixed);
  REQUIRE(pj.partition.size() == 2);
  CHECK(pj.partition[0] == std::vector<int>{0});
  CHECK(pj.partition[1] == std::vector<int>{1, 2});
}
