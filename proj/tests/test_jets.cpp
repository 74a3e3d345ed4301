#include "doctest.h"
#include "test_util.hpp"

using namespace cvforge;
using cvtest::random_jet;

TEST_CASE("jets: polynomial identities and truncation") {
  JetContext c(1, 4);
  Jet t = Jet::coordinate(c, 0);
  Jet one = Jet::constant(c, 1.0);
  Jet p = (one + t) * (one - t);
  CHECK(p.coeff({0}, {0}) == cd(1.0));
  CHECK(p.coeff({2}, {0}) == cd(-1.0));
  CHECK(p.terms().size() == 2);
  CHECK(p.exact());

  Jet z(c);
  CHECK((p + z).terms() == p.terms());

  JetContext c3(1, 3);
  Jet tt = Jet::coordinate(c3, 0) * Jet::coordinate(c3, 0, false);
  Jet sq = tt * tt;
  CHECK(sq.is_zero());
  CHECK(sq.precision() == 3);  // truncation happened
}

TEST_CASE("jets: derivatives") {
  JetContext c(1, 5);
  Jet f = Jet::monomial(c, {2}, {1});
  Jet df = differentiate(f, 0, true);
  CHECK(df.coeff({1}, {1}) == cd(2.0));
  CHECK(df.terms().size() == 1);
  CHECK(differentiate(Jet::monomial(c, {2}, {0}), 0, false).is_zero());
  CHECK(differentiate(Jet::constant(c, 3.0), 0, true).is_zero());

  std::mt19937_64 rng(7);
  JetContext c2(2, 6);
  for (int trial = 0; trial < 5; ++trial) {
    Jet a = random_jet(c2, rng);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Jet x = a.derivative(i, true).derivative(j, false);
        Jet y = a.derivative(j, false).derivative(i, true);
        CHECK((x - y).max_abs() < 1e-14);
      }
  }
}

TEST_CASE("jets: inversion") {
  JetContext c(1, 6);
  Jet t = Jet::coordinate(c, 0);
  Jet inv = invert_unit(Jet::constant(c, 1.0) + t);
  for (int k = 0; k <= 6; ++k) CHECK(std::abs(inv.coeff({k}, {0}) - cd(k % 2 ? -1.0 : 1.0)) < 1e-12);
  CHECK_THROWS_AS(invert_unit(t), Error);
  try {
    invert_unit(t);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonUnit);
  }

  MatrixJet N(c, 2, 2);
  N(0, 1) = t;
  MatrixJet A = MatrixJet::identity(c, 2) + N;
  MatrixJet Ai = invert_matrix(A);
  CHECK((Ai - (MatrixJet::identity(c, 2) - N)).max_abs() < 1e-15);

  std::mt19937_64 rng(11);
  JetContext c2(2, 5);
  for (int trial = 0; trial < 5; ++trial) {
    Jet a = random_jet(c2, rng) + Jet::constant(c2, 2.0);
    Jet r = invert_unit(a) * a - Jet::constant(c2, 1.0);
    CHECK(r.max_abs() < 1e-14 * std::max(1.0, a.max_abs()) * 100);
  }
}

TEST_CASE("jets: holomorphy test") {
  JetContext c(1, 3);
  Jet t = Jet::coordinate(c, 0), tb = Jet::coordinate(c, 0, false);
  CHECK(is_holomorphic(t + t * t, 1e-12));
  CHECK_FALSE(is_holomorphic(t + tb, 1e-12));
  CHECK(is_holomorphic(t + tb * cd(1e-15), 1e-12));
}

TEST_CASE("jets: ring axioms on random jets") {
  std::mt19937_64 rng(3);
  JetContext c(2, 5);
  for (int trial = 0; trial < 5; ++trial) {
    Jet a = random_jet(c, rng), b = random_jet(c, rng), d = random_jet(c, rng);
    CHECK(((a * b) * d - a * (b * d)).max_abs() < 1e-12);
    CHECK((a * b - b * a).max_abs() < 1e-13);
    CHECK((a * (b + d) - (a * b + a * d)).max_abs() < 1e-12);
    CHECK((a + b - (b + a)).max_abs() == 0.0);
  }
}

TEST_CASE("jets: conjugation, exponential, evaluation oracle") {
  JetContext c(2, 6);
  Jet t = Jet::coordinate(c, 1);
  CHECK(t.conj().coeff({0, 0}, {0, 1}) == cd(1.0));
  Jet e = (t * cd(0.5)).exp();
  CHECK(std::abs(e.coeff({0, 3}, {0, 0}) - cd(0.125 / 6.0)) < 1e-12);
  // evaluation of a product matches the product of evaluations up to truncation
  std::mt19937_64 rng(5);
  Jet a = random_jet(c, rng, 0.6, 2), b = random_jet(c, rng, 0.6, 2);
  std::vector<cd> pt{cd(1e-2, 2e-3), cd(-3e-3, 1e-2)};
  CHECK(std::abs((a * b).evaluate(pt) - a.evaluate(pt) * b.evaluate(pt)) < 1e-12);
}

TEST_CASE("jets: precision bookkeeping") {
  JetContext c(1, 6);
  Jet a = Jet::coordinate(c, 0).with_precision(4);
  CHECK(a.precision() == 4);
  CHECK(a.derivative(0, true).precision() == 3);
  CHECK((a * Jet::coordinate(c, 0)).precision() == 4);
  Jet ex = Jet::coordinate(c, 0) * Jet::coordinate(c, 0);
  CHECK(ex.exact());
  CHECK(ex.derivative(0, true).exact());
}

TEST_CASE("jets: context mismatch is an error") {
  Jet a = Jet::constant(JetContext(1, 3), 1.0);
  Jet b = Jet::constant(JetContext(2, 3), 1.0);
  CHECK_THROWS_AS(a + b, Error);
}

TEST_CASE("laurent jets: product, z d/dz, reflection") {
  JetContext c(1, 3);
  MatrixJet I = MatrixJet::identity(c, 1);
  LaurentJet a(-1, {I, I});        // 1/z + 1
  LaurentJet b(0, {I, I * cd(2)});  // 1 + 2z
  LaurentJet p = a * b;            // 1/z + 3 + 2z
  CHECK(p.coeff(-1)(0, 0).constant_term() == cd(1));
  CHECK(p.coeff(0)(0, 0).constant_term() == cd(3));
  CHECK(p.coeff(1)(0, 0).constant_term() == cd(2));
  CHECK(p.z_dz().coeff(-1)(0, 0).constant_term() == cd(-1));
  CHECK(p.reflect().coeff(1)(0, 0).constant_term() == cd(-2));
  CHECK_THROWS_AS(LaurentJet(0, {}), Error);
}
