#pragma once
// Order-by-order formal gauge equivalence Psi = 1 + z A_1 + z^2 A_2 + ...
// from the Saito-side connection to the CV-side connection sharing (C, U, g),
// and the harmonic potential read off from A_1.

#include <vector>

#include "cvforge/axioms.hpp"

namespace cvforge {

struct OrderLog {
  int order = 0;
  int precision = 0;     // A_order is valid through this jet degree
  int unknowns = 0;      // holomorphic coefficients solved at this order
  int rank = 0;          // rank of the order-alone system
  int kernel_dim = 0;    // freedom left after the next order is imposed
  bool lookahead = false;
  double residual = 0.0;
  double threshold = 0.0;
  bool solvable = false;
};

struct FormalIso {
  std::vector<MatrixJet> A;  // A[0] = identity, A[k] the z^k coefficient
  int achieved = 0;
  int K = 0;
  std::vector<OrderLog> log;
  // Null-space directions of A_1 (as matrices) left free by the solve.
  std::vector<MatrixJet> kernel_1;
};

// Residual blocks of the intertwining relations at order k, given A[0..k].
// Order k uses the z^{k-1} parts of the (1,0) and z relations and the z^k
// parts of the (0,1) and pairing relations.
std::vector<MatrixJet> formal_iso_blocks(const ChartBundle& saito, const ChartBundle& cv,
                                         const std::vector<MatrixJet>& A, int k);

FormalIso solve_formal_iso(const ChartBundle& saito, const ChartBundle& cv, int K, double tol = 1e-8);

// g-symmetrisation of -A_1^flat.
MatrixJet extract_potential(const FormalIso& iso, const ChartBundle& cv);
// Same map applied to an arbitrary candidate A_1.
MatrixJet potential_from_first_order(const MatrixJet& A1, const ChartBundle& cv);

// Relations: connection (Chern = Saito - [A^flat, C]), Q = V - [U, A^flat],
// dbar(A^flat) = kappa C kappa.
StructureReport check_harmonic(const ChartBundle& saito, const ChartBundle& cv, const MatrixJet& A,
                               double tol = 1e-8);

}  // namespace cvforge
