#pragma once
// Dense least squares with rank and null-space reporting, plus helpers that
// flatten jet blocks into coefficient vectors.

#include <Eigen/Dense>
#include <vector>

#include "cvforge/jets.hpp"

namespace cvforge {

struct LeastSquares {
  Eigen::VectorXcd x;          // minimum-norm minimiser of |J x - rhs|
  int rank = 0;
  Eigen::MatrixXcd nullspace;  // orthonormal columns spanning ker J
  Eigen::VectorXd singular;    // descending
};

// rank_tol is relative to the largest singular value.
LeastSquares solve_least_squares(const Eigen::MatrixXcd& J, const Eigen::VectorXcd& rhs, double rank_tol = 1e-10);

// Real-valued variant, used when unknowns are real and imaginary parts.
struct RealLeastSquares {
  Eigen::VectorXd x;
  int rank = 0;
  Eigen::MatrixXd nullspace;
  Eigen::VectorXd singular;
};
RealLeastSquares solve_least_squares(const Eigen::MatrixXd& J, const Eigen::VectorXd& rhs, double rank_tol = 1e-10);

// Coefficients of every entry of M on monomials of degree lo..hi, entry-major,
// monomials in monomials_up_to order. Entries with hi < lo contribute nothing.
void append_coefficients(const MatrixJet& M, int lo, int hi, std::vector<cd>& out);
Eigen::VectorXcd to_vector(const std::vector<cd>& v);

}  // namespace cvforge
