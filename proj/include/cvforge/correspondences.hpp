#pragma once
// Meromorphic connections built from Saito or CV chart data, and the
// extraction of (C, U, g) back from such a connection.

#include "cvforge/axioms.hpp"

namespace cvforge {

struct TepData {
  TepConnection conn;
  LaurentJet P;
  int w = 0;
};

// P = z^w G.
LaurentJet pairing_from_metric(const MatrixJet& G, int w);

// A_i = Gamma_i + C_i / z,  A_z = U / z - V + w/2.
TepData build_saito_connection(const ChartBundle& b, int w, double tol = kDefaultTol);

// (1,0): Gamma_i + C_i / z;  (0,1): z * kappa C_j kappa;
// A_z = U / z - Q + w/2 - z * kappa U kappa.
// The last sign is the one that makes the connection flat.
TepData build_cv_connection(const ChartBundle& b, int w, double tol = kDefaultTol);

// Unchecked variants used for perturbation studies.
TepData saito_connection_raw(const ChartBundle& b, int w);
TepData cv_connection_raw(const ChartBundle& b, int w);

struct KData {
  std::vector<MatrixJet> C;
  MatrixJet U;
  MatrixJet g;
};
KData extract_k_data(const TepData& tep, double tol = kDefaultTol);

}  // namespace cvforge
