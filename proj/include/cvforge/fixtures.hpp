#pragma once
// Deterministic example charts and the degree-by-degree CV completion.
//
//   E1   rank one over a line: C = -1, U = u, V = 0, g = i^w, h = 1.
//   E2   diagonal join of n copies of E1 with shifted eigenvalues.
//   F2   the two-dimensional Frobenius chart with potential
//        t1^2 t2 / 2 + t2^4 / 24 (flat coordinates, e = d1).
//   SG   rank two over a line, h = diag(e^phi, e^-phi) solving the
//        radial tt* equation order by order.
//   SG-unfolded  the same metric over the F2 base in the tangent frame;
//        together with F2's Saito data it is a CDV chart.

#include <vector>

#include "cvforge/bundle.hpp"

namespace cvforge {

ChartBundle example_rank1(int w = 0, int d = 6);
// E1 with g = e^u, h = e^{(u+ubar)/2}: a CV chart on which the unit field
// is not parallel.
ChartBundle example_rank1_exp_metric(int d = 6);
ChartBundle example_semisimple(int n, const std::vector<double>& offsets, int d = 6, int w = 0);
// s shifts the base point to t2 = s.
ChartBundle example_frobenius2(double s = 0.0, int d = 6);
// Radial coefficients b_k of psi(r) = sum b_k r^k, r = |t|^2, solving
// (r psi')' = r e^{2 psi} - e^{-2 psi} with psi(0) = b0.
std::vector<double> sinh_gordon_radial(int terms, double b0 = 0.0);
// Equation solved through jet degree `order` (<= d); h is marked valid to it.
ChartBundle sinh_gordon_jet(int order, int d = 8, double b0 = 0.0);
ChartBundle sinh_gordon_unfolded(int d = 6, double b0 = 0.0);

// Direct sum over the product base; tensors missing in either factor are dropped.
ChartBundle join(const ChartBundle& a, const ChartBundle& b);
// Copy of a jet into a context with more variables, shifted by offset.
Jet embed(const Jet& j, const JetContext& target, int offset);
MatrixJet embed(const MatrixJet& M, const JetContext& target, int offset);

enum class CompletionTarget { Metric = 1, Q = 2, Both = 3 };

class CompletionFailure : public Error {
 public:
  CompletionFailure(int degree, double residual);
  int degree() const { return degree_; }
  double residual() const { return residual_; }

 private:
  int degree_;
  double residual_;
};

// Solves for the higher coefficients of h and/or Q so that the CV axioms hold
// through the truncation degree. Constant terms are taken from `partial`.
ChartBundle complete_cv_jet(const ChartBundle& partial, CompletionTarget which = CompletionTarget::Both,
                            double tol = 1e-9);

}  // namespace cvforge
