#pragma once
// The rho functional on symmetric nilpotent matrices and a sampled estimate
// of the curvature bound k0 at an irreducible base point.

#include <cstdint>
#include <vector>

#include "cvforge/canonical.hpp"

namespace cvforge {

// -h^end([A, A^flat], [A, A^flat]) / h^end(A, A)^2 with A^flat the H-adjoint.
// ZeroMatrix for A = 0.
double rho(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& H);
double rho(const Eigen::MatrixXcd& A);

struct NilpotentSample {
  Eigen::MatrixXcd A;  // symmetric, unit Frobenius norm
  double symmetry_residual = 0.0;
  double nilpotency_residual = 0.0;  // max_k |tr(A^k)|, k = 1..n
  double rho = 0.0;
};

// Newton projection of seeded random symmetric matrices onto tr(A^k) = 0.
// Sample i depends only on (seed, i), so a longer run extends a shorter one.
// Runs on CVFORGE_THREADS threads; the result does not depend on that number.
std::vector<NilpotentSample> sample_nilpotent_cone(int n, int count, std::uint64_t seed);

struct K0Estimate {
  double k0 = 0.0;          // -max sampled R^sect
  Eigen::VectorXcd argmax;  // direction attaining the max, h^M-unit
  int argmax_index = -1;    // sample index, -1 if found by refinement
  int evaluated = 0;
  double sect_min = 0.0, sect_max = 0.0;
  double rho_min = 0.0, rho_max = 0.0;
  std::vector<int> histogram;  // R^sect over [sect_min, sect_max], 10 bins
  bool refined = false;
};

// Statistical estimate, not a certificate. NotIrreducible unless the base
// point is irreducible; NotPositiveDefinite if h^M(0) is not.
K0Estimate bound_k0(const ChartBundle& b, int count, std::uint64_t seed, bool refine = false);

// k0 * lambda0^2; NonPositiveInput unless both are positive.
double bound_k1(double k0, double lambda0);

// Thread count from CVFORGE_THREADS (default: hardware concurrency).
int worker_threads();

}  // namespace cvforge
