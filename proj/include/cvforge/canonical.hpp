#pragma once
// Metrics on End(K), the subbundle F spanned by the Higgs matrices, its
// second fundamental form and curvature, and the canonical data on TM.

#include <optional>
#include <vector>

#include "cvforge/unfolding.hpp"

namespace cvforge {

// h^end(A, B) = tr(A^T H conj(B) H^-1), g^end(A, B) = tr(A^T G B G^-1).
struct EndPairings {
  MatrixJet H, Hinv;
  std::optional<MatrixJet> G, Ginv;

  Jet h(const MatrixJet& A, const MatrixJet& B) const;
  Jet g(const MatrixJet& A, const MatrixJet& B) const;
  MatrixJet adjoint(const MatrixJet& A) const;  // h-adjoint
  // Base-point value of h^end(A, B) for constant matrices.
  cd h0(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) const;
};

EndPairings end_pairings(const MatrixJet& H, const std::optional<MatrixJet>& G = std::nullopt);
EndPairings end_pairings(const ChartBundle& b);

struct Projection {
  MatrixJet coeffs;  // r x 1
  MatrixJet tangential;
  MatrixJet normal;
};

struct SubbundleCurvature {
  // Column b of entry i*m + j holds the coefficients of R(d_i, dbar_j) s_b.
  std::vector<MatrixJet> direct;        // Chern curvature of the Gram jet
  std::vector<MatrixJet> via_ambient;   // pr R^V - (A_j)^flat A_i
  double discrepancy = 0.0;
};

// Holomorphic subbundle of (End(K), h^end) spanned by holomorphic sections.
class EndSubbundle {
 public:
  EndSubbundle(const MatrixJet& H, std::vector<MatrixJet> sections,
               const std::optional<MatrixJet>& G = std::nullopt);
  explicit EndSubbundle(const ChartBundle& b);

  int rank() const { return static_cast<int>(s_.size()); }
  const EndPairings& pairings() const { return pair_; }
  const std::vector<MatrixJet>& sections() const { return s_; }
  const std::vector<MatrixJet>& gamma() const { return gamma_; }
  const MatrixJet& gram() const { return gram_; }  // (a, b) = h^end(s_a, s_b)

  MatrixJet coefficients(const MatrixJet& B) const;
  MatrixJet combine(const MatrixJet& coeffs) const;
  Projection project(const MatrixJet& B) const;
  // D_i B = d_i B + [Gamma_i, B]
  MatrixJet D(int i, const MatrixJet& B) const;
  // A_i(s_j) at index i*r + j
  const std::vector<MatrixJet>& second_fundamental_form() const;
  // Coefficients of (A_j)^flat(nu) for a normal section nu.
  MatrixJet flat_coefficients(int j, const MatrixJet& nu) const;
  SubbundleCurvature curvature() const;

 private:
  EndPairings pair_;
  std::vector<MatrixJet> s_;
  std::vector<MatrixJet> gamma_;
  MatrixJet gram_, gram_inv_, gram_inv_t_;
  mutable std::optional<std::vector<MatrixJet>> sff_;
};

Projection project_F(const ChartBundle& b, const MatrixJet& B);
std::vector<MatrixJet> second_fundamental_form(const ChartBundle& b);
SubbundleCurvature curvature_F(const ChartBundle& b);

struct CanonicalData {
  MatrixJet hM;  // (a, b) = h^end(C_a, C_b)
  MatrixJet gM;  // (a, b) = g^end(C_a, C_b), possibly degenerate
  MatrixJet QM;  // column b: coefficients of pr^F [Q, C_b]
  FStructure f;
};

CanonicalData canonical_data(const ChartBundle& b, const Primitive& p);
CanonicalData canonical_data(const ChartBundle& b);

StructureReport check_canonical_props(const CanonicalData& cdata, const ChartBundle& b, double tol = kDefaultTol);

// Evaluates R^sect at the base point for many directions from one set of jets.
class SectionalEvaluator {
 public:
  SectionalEvaluator(const CanonicalData& cdata, const ChartBundle& b);
  // Chern curvature of h^M.
  double direct(const Eigen::VectorXcd& X) const;
  // -(|[C_X, C_X^flat]|^2 + |A_X(C_X)|^2) / h^M(X, X)^2
  double via_second_fundamental(const Eigen::VectorXcd& X) const;
  double norm2(const Eigen::VectorXcd& X) const;
  const Eigen::MatrixXcd& hM0() const { return hM0_; }

 private:
  void require_nonzero(const Eigen::VectorXcd& X) const;
  int m_ = 0;
  Eigen::MatrixXcd hM0_, H0_, H0inv_;
  std::vector<Eigen::MatrixXcd> R0_, C0_, A0_;
};

struct Sectional {
  double value = 0.0;               // direct evaluation
  double via_second_fundamental = 0.0;
  double discrepancy = 0.0;
};
// NotPositiveDefinite if h^M(0) is not positive definite, ZeroVector for X = 0.
Sectional sectional_curvature(const CanonicalData& cdata, const ChartBundle& b, const Eigen::VectorXcd& X);

struct TwistedMetrics {
  MatrixJet discriminant;  // h^M((E o)^-1 X, (E o)^-1 Y)
  MatrixJet caustic;       // h^M((H o)^-1 X, (H o)^-1 Y)
};
// Throws OnDiscriminant / OnCaustic when the operator is singular at the base
// point. The socle field defaults to E.
TwistedMetrics twisted_metrics(const CanonicalData& cdata,
                               const std::optional<VectorFieldJet>& socle = std::nullopt);

}  // namespace cvforge
