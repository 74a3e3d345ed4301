#pragma once
// Primitive sections, the induced F-manifold, reconstruction of Q, the
// tangent-bundle equivalence chain, and Frobenius / CDV verification.

#include <optional>
#include <string>
#include <vector>

#include "cvforge/axioms.hpp"

namespace cvforge {

// Multiplication on TM in the coordinate frame: mult[i](k, j) = c^k_{ij},
// i.e. mult[i] is the matrix of Y -> d_i o Y.
struct FStructure {
  std::vector<MatrixJet> mult;
  VectorFieldJet e;
  VectorFieldJet E;

  int m() const { return static_cast<int>(mult.size()); }
  // Matrix of Y -> X o Y.
  MatrixJet mult_by(const VectorFieldJet& X) const;
};

struct Primitive {
  MatrixJet zeta;  // n x 1 holomorphic column
  MatrixJet I;     // n x m, column i is -C_i zeta
  double sigma_min = 0.0;  // smallest singular value of I at the base point
};

// Best subset sum of frame sections by smallest singular value of I(0).
Primitive find_primitive(const ChartBundle& b);
// Caller-chosen section; NoUnfolding if I(0) is singular.
Primitive primitive_from_section(const ChartBundle& b, const MatrixJet& zeta);

FStructure induce_f_structure(const ChartBundle& b, const Primitive& p);
StructureReport check_f_manifold(const FStructure& f, double tol = kDefaultTol);

struct QReconstruction {
  MatrixJet Q;                   // g-skew part of s -> D_{I^-1 s}(U) zeta
  std::optional<MatrixJet> Q_tangent;  // (D_E - L_E)^skew on tangent data
  StructureReport report;
};
QReconstruction reconstruct_Q(const ChartBundle& b, const Primitive& p, double tol = kDefaultTol);

StructureReport check_tangent_chain(const ChartBundle& b, const FStructure& f, double d, double tol = kDefaultTol);

struct FrobeniusChart {
  FStructure f;
  MatrixJet gM;                  // g pulled back through I
  std::vector<MatrixJet> gammaM; // flat connection pulled back through I
  double d = 0.0;
};
// Least-squares weight from V(zeta) = (d/2) zeta.
cd fit_weight(const ChartBundle& saito, const Primitive& p);
FrobeniusChart build_frobenius(const ChartBundle& saito, const Primitive& p, double d, double tol = kDefaultTol);

// Christoffel matrices (Gamma_i)_{kj} of the Levi-Civita connection of gM.
std::vector<MatrixJet> levi_civita(const MatrixJet& gM);
StructureReport check_frobenius(const FStructure& f, const MatrixJet& gM, double d, double tol = kDefaultTol);
// Throws NonRealWeight for a complex d.
StructureReport check_cdv(const ChartBundle& b, const FStructure& f, const MatrixJet& gM, cd d,
                          double tol = kDefaultTol);

enum class PointKind { Semisimple, Irreducible, Mixed };
const char* point_kind_name(PointKind k);

struct PointClass {
  PointKind kind = PointKind::Mixed;
  // Groups of coordinate indices, one per eigenvalue cluster (by dominant
  // spectral projector weight). Numerical verdict.
  std::vector<std::vector<int>> partition;
  std::vector<int> cluster_sizes;
};
PointClass classify_point(const FStructure& f, double gap = 1e-6);

}  // namespace cvforge
