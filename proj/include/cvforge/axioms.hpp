#pragma once
// Residual checks for Higgs pairs, Saito structures, CV-structures and
// meromorphic connections with a pairing.

#include <vector>

#include "cvforge/bundle.hpp"
#include "cvforge/report.hpp"

namespace cvforge {

constexpr double kDefaultTol = 1e-9;

// Connection on the pullback of K to (z, t):
//   nabla_{d_i}    = d_i    + A[i](z)
//   nabla_{dbar_j} = dbar_j + Abar[j](z)   (empty Abar means zero)
//   nabla_{z d_z}  = z d_z  + Az(z)
struct TepConnection {
  std::vector<LaurentJet> A;
  std::vector<LaurentJet> Abar;
  LaurentJet Az;
};

StructureReport check_higgs_pair(const ChartBundle& b, double tol = kDefaultTol);
StructureReport check_saito(const ChartBundle& b, double tol = kDefaultTol);
StructureReport check_cv(const ChartBundle& b, double tol = kDefaultTol);
StructureReport check_tep(const TepConnection& conn, const LaurentJet& P, int w, double tol = kDefaultTol);

// Curvature components of the connection, each a Laurent jet, tagged by name.
struct CurvatureComponent {
  std::string tag;
  LaurentJet F;
};
std::vector<CurvatureComponent> connection_curvature(const TepConnection& conn);
// Largest coefficient over every component and z-power.
double flatness_residual(const TepConnection& conn);
double laurent_magnitude(const TepConnection& conn);

}  // namespace cvforge
