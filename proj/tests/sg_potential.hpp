#pragma once
// Hand-built harmonic potential for the unfolded sinh-Gordon chart against
// F2, and distances used to compare solver output with it.

#include "cvforge/fixtures.hpp"
#include "cvforge/formal_iso.hpp"
#include "cvforge/linsolve.hpp"

namespace cvtest {

using namespace cvforge;

// Largest coefficient of a - b up to the lower of the two valid degrees.
inline double jet_distance(const MatrixJet& a, const MatrixJet& b) {
  int p = std::min(a.precision(), b.precision());
  return (a.with_precision(p) - b.with_precision(p)).max_abs();
}

// Harmonic potential of the SG-unfolded chart relative to F2, built by hand:
// flat^-1 of B = beta E12 + gamma E21 + delta I with
// gamma = -int tbar2 e^{2 psi} dtbar2, beta = d2 psi + gamma t2, delta = -tbar1.
inline MatrixJet seeded_potential(const ChartBundle& cv, double b0) {
  const JetContext& c = cv.ctx;
  const int d = c.d;
  auto bk = sinh_gordon_radial(d / 2 + 1, b0);
  Jet r = Jet::coordinate(c, 1) * Jet::coordinate(c, 1, false);
  Jet psi(c), rk = Jet::constant(c, 1.0);
  for (double b : bk) {
    psi += rk * cd(b);
    rk = rk * r;
  }
  psi = psi.with_precision(d);
  Jet e2 = (psi * cd(2.0)).exp();
  Jet gamma = (Jet::coordinate(c, 1, false) * e2 * cd(-1.0)).antiderivative(1, false);
  Jet beta = psi.derivative(1, true) + gamma * Jet::coordinate(c, 1);
  Jet delta = Jet::coordinate(c, 0, false) * cd(-1.0);
  MatrixJet B(c, 2, 2);
  B(0, 0) = delta;
  B(1, 1) = delta;
  B(0, 1) = beta;
  B(1, 0) = gamma;
  return h_adjoint(B, *cv.h);
}

inline std::vector<double> real_coeffs(const MatrixJet& M, int deg) {
  std::vector<cd> v;
  append_coefficients(M, 0, deg, v);
  std::vector<double> out;
  for (cd x : v) {
    out.push_back(x.real());
    out.push_back(x.imag());
  }
  return out;
}

// Distance from D to the real span of the potentials induced by the kernel directions.
inline double distance_mod_kernel(const MatrixJet& D, const FormalIso& iso, const ChartBundle& cv, int deg) {
  std::vector<double> rhs = real_coeffs(D, deg);
  Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  if (iso.kernel_1.empty()) return b.lpNorm<Eigen::Infinity>();
  Eigen::MatrixXd J(b.size(), 2 * static_cast<Eigen::Index>(iso.kernel_1.size()));
  Eigen::Index col = 0;
  for (auto& K : iso.kernel_1)
    for (cd s : {cd(1.0), cd(0.0, 1.0)}) {
      auto v = real_coeffs(potential_from_first_order(K * s, cv), deg);
      J.col(col++) = Eigen::Map<Eigen::VectorXd>(v.data(), b.size());
    }
  RealLeastSquares ls = solve_least_squares(J, b);
  return (b - J * ls.x).lpNorm<Eigen::Infinity>();
}

}  // namespace cvtest
