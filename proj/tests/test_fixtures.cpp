#include "cvforge/axioms.hpp"
#include "cvforge/fixtures.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cvforge;

namespace {

bool same_terms(const MatrixJet& a, const MatrixJet& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j).terms() != b(i, j).terms()) return false;
  return true;
}

}  // namespace

TEST_CASE("E1 for several weights") {
  for (int w = -1; w <= 3; ++w) {
    ChartBundle b = example_rank1(w);
    CHECK(check_saito(b).pass());
    CHECK(check_cv(b).pass());
  }
  ChartBundle e = example_rank1_exp_metric();
  CHECK(check_cv(e).pass());
}

TEST_CASE("E2: join of rank-one pieces, distinct eigenvalues required") {
  ChartBundle b = example_semisimple(2, {0.0, 1.0});
  CHECK(check_saito(b).pass());
  CHECK(check_cv(b).pass());
  CHECK_THROWS_AS(example_semisimple(2, {1.0, 1.0}), Error);
  try {
    example_semisimple(2, {1.0, 1.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DuplicateEigenvalues);
  }
}

TEST_CASE("F2: Saito axioms and the product rule of its potential") {
  ChartBundle b = example_frobenius2();
  auto rep = check_saito(b);
  CHECK(rep.pass());
  CHECK(rep.max_residual() < 1e-9);
  // d2 o d2 = t2 d1 means C_2^2 has t2 on the diagonal
  MatrixJet sq = b.C[1] * b.C[1];
  CHECK(std::abs(sq(0, 0).coeff({0, 1}, {0, 0}) - cd(1.0)) < 1e-15);
  CHECK(sq(0, 1).is_zero());
  CHECK(check_saito(example_frobenius2(0.5)).pass());
}

TEST_CASE("radial sinh-Gordon series against a finite-difference Laplacian") {
  auto b = sinh_gordon_radial(8, 0.1);
  auto psi = [&](double r) {
    double s = 0, p = 1;
    for (double c : b) {
      s += c * p;
      p *= r;
    }
    return s;
  };
  // Delta/4 of psi(|t|^2) at t = x on the real axis
  const double x = 0.05, h = 1e-3;
  auto f = [&](double a, double y) { return psi(a * a + y * y); };
  double lap = (f(x + h, 0) + f(x - h, 0) + f(x, h) + f(x, -h) - 4 * f(x, 0)) / (h * h);
  double r = x * x;
  double rhs = r * std::exp(2 * psi(r)) - std::exp(-2 * psi(r));
  CHECK(std::abs(lap / 4 - rhs) < 1e-5);
}

TEST_CASE("SG: CV axioms to the requested order, nonzero curvature") {
  ChartBundle b = sinh_gordon_jet(4, 8);
  auto rep = check_cv(b);
  CHECK(rep.pass());
  CHECK(rep.max_residual() < 1e-8);
  ChartBundle full = sinh_gordon_jet(8, 8);
  CHECK(check_cv(full).max_residual() < 1e-8);
  auto R = curvature(chern_connection(*full.h), {});
  CHECK(R[0].max_abs() > 0.1);
  // replacing h by the identity breaks the tt* curvature identity
  ChartBundle flat = full;
  flat.h = MatrixJet::identity(full.ctx, 2);
  Eigen::MatrixXcd G = full.g->constant_term();
  flat.kappa = MatrixJet::from_constant(full.ctx, G.inverse());
  auto bad = check_cv(flat);
  CHECK_FALSE(bad.pass());
  CHECK_FALSE(bad.find("tt_star_curvature")->pass);
}

TEST_CASE("SG-unfolded shares the F2 Higgs data and is CV") {
  ChartBundle sg = sinh_gordon_unfolded(6);
  ChartBundle f2 = example_frobenius2(0.0, 6);
  CHECK(check_cv(sg).pass());
  CHECK(check_saito(sg).pass());
  for (int i = 0; i < 2; ++i) CHECK((sg.C[i] - f2.C[i]).is_zero());
  CHECK((*sg.U - *f2.U).is_zero());
}

TEST_CASE("join keeps block structure") {
  ChartBundle j = join(example_rank1(0), example_frobenius2());
  CHECK(j.m() == 3);
  CHECK(j.n == 3);
  CHECK(check_saito(j).pass());
  CHECK(j.C[1](0, 0).is_zero());
  CHECK(j.C[2](2, 1).constant_term() == cd(-1.0));
}

TEST_CASE("complete_cv_jet") {
  SUBCASE("E1: nothing to solve") {
    ChartBundle e = example_rank1(0);
    ChartBundle c = complete_cv_jet(e);
    CHECK((*c.h - *e.h).max_abs() < 1e-12);
    CHECK(c.Q->max_abs() < 1e-12);
  }
  SUBCASE("SG re-derived from its constant terms") {
    ChartBundle ref = sinh_gordon_jet(6, 6);
    ChartBundle partial = ref;
    partial.h = MatrixJet::from_constant(ref.ctx, ref.h->constant_term());
    partial.Q = MatrixJet::from_constant(ref.ctx, ref.Q->constant_term());
    ChartBundle c = complete_cv_jet(partial);
    CHECK((*c.h - *ref.h).max_abs() < 1e-9);
    CHECK((*c.Q - *ref.Q).max_abs() < 1e-9);
    CHECK(check_cv(c).pass());
  }
  SUBCASE("non-commuting Higgs field is inconsistent at degree 0") {
    ChartBundle b = example_frobenius2();
    b.h = MatrixJet::identity(b.ctx, 2);
    b.Q = MatrixJet(b.ctx, 2, 2);
    b.C[0](0, 1) = Jet::constant(b.ctx, 1.0);
    try {
      complete_cv_jet(b);
      CHECK(false);
    } catch (const CompletionFailure& f) {
      CHECK(f.degree() == 0);
      CHECK(f.kind() == ErrorKind::Inconsistent);
    }
  }
}

TEST_CASE("fixtures are deterministic") {
  ChartBundle a = sinh_gordon_unfolded(6, 0.2), b = sinh_gordon_unfolded(6, 0.2);
  CHECK(same_terms(*a.h, *b.h));
  CHECK(same_terms(*a.Q, *b.Q));
}
