#pragma once
// Chart data for a holomorphic vector bundle over a coordinate chart, and
// the frame-level differential geometry used everywhere else.
//
// Conventions (fixed once here):
//  * sections are columns, endomorphisms act as M*a;
//  * g(a,b) = a^T G b, h(a,b) = a^T H conj(b) (linear in the first slot);
//  * kappa(a) = k conj(a), so H = G k;
//  * a connection acts as D_i a = d_i a + Gamma_i a, and on End(K) by
//    D_i A = d_i A + [Gamma_i, A];
//  * R(i, jbar) = [D_i, D_jbar] = d_i Gb_j - db_j G_i + [G_i, Gb_j].

#include <optional>
#include <string>
#include <vector>

#include "cvforge/jets.hpp"

namespace cvforge {

struct VectorFieldJet {
  std::vector<Jet> comp;

  static VectorFieldJet zero(const JetContext& ctx);
  static VectorFieldJet coordinate(const JetContext& ctx, int i);
  static VectorFieldJet from_constant(const JetContext& ctx, const Eigen::VectorXcd& v);
  int dim() const { return static_cast<int>(comp.size()); }
  const JetContext& context() const { return comp.at(0).context(); }

  VectorFieldJet operator+(const VectorFieldJet& o) const;
  VectorFieldJet operator-(const VectorFieldJet& o) const;
  VectorFieldJet operator*(cd s) const;
  // X(f) = sum X^i d_i f, and the conjugate field acting by sum conj(X^i) dbar_i f.
  Jet apply(const Jet& f) const;
  Jet apply_bar(const Jet& f) const;
  MatrixJet apply(const MatrixJet& f) const;
  MatrixJet apply_bar(const MatrixJet& f) const;
  MatrixJet as_column() const;
  static VectorFieldJet from_column(const MatrixJet& col);
  Eigen::VectorXcd constant_term() const;
  double max_abs() const;
};

struct ChartBundle {
  JetContext ctx;
  int n = 0;
  int w = 0;
  int zorder = 6;
  bool tangent = false;  // frame is the coordinate frame of TM
  std::vector<MatrixJet> C;
  std::optional<MatrixJet> U, V, Q, g, h, kappa;
  std::vector<MatrixJet> gamma10, gamma01;

  int m() const { return ctx.m; }
  double max_input_magnitude() const;
  const std::vector<MatrixJet>& require_C() const;
  const std::vector<MatrixJet>& require_gamma10() const;
};

const MatrixJet& require(const std::optional<MatrixJet>& t, const char* name);

// sum_i X^i M_i
MatrixJet contract(const std::vector<MatrixJet>& M, const VectorFieldJet& X);
MatrixJet contract(const std::vector<MatrixJet>& M, const Eigen::VectorXcd& x);

std::vector<MatrixJet> chern_connection(const MatrixJet& H);
// Returns R(d_i, dbar_j) at index i*m + j. Empty gamma01 means zero.
std::vector<MatrixJet> curvature(const std::vector<MatrixJet>& gamma10,
                                 const std::vector<MatrixJet>& gamma01);
VectorFieldJet lie_bracket(const VectorFieldJet& X, const VectorFieldJet& Y);
// (J_X)_{kj} = d_j X^k
MatrixJet jacobian(const VectorFieldJet& X);

// Lie derivatives of frame tensors in the coordinate frame of TM, X holomorphic.
// Sesquilinear: L_X h(Y,Z) = X h(Y,Z) - h([X,Y],Z) - h(Y,[Xbar,Z]); bar=true
// gives the analogue along Xbar.
MatrixJet lie_derivative_h(const VectorFieldJet& X, const MatrixJet& H, bool bar = false);
MatrixJet lie_derivative_bilinear(const VectorFieldJet& X, const MatrixJet& G);
MatrixJet lie_derivative_endo(const VectorFieldJet& X, const MatrixJet& A, bool bar = false);
// Antilinear kappa(s) = k conj(s); L_X intertwines X on the output with Xbar on the input.
MatrixJet lie_derivative_antilinear(const VectorFieldJet& X, const MatrixJet& k, bool bar = false);

// Columns e_j^* with h(e_i, e_j^*) = delta_ij.
MatrixJet dual_frame(const MatrixJet& H);
MatrixJet h_adjoint(const MatrixJet& A, const MatrixJet& H);
MatrixJet g_adjoint(const MatrixJet& A, const MatrixJet& G);
// Linear frame matrix of the composite kappa A kappa.
MatrixJet kappa_conjugate(const MatrixJet& A, const MatrixJet& k);

// Same structure in the holomorphic frame s' = s T (T invertible, holomorphic).
ChartBundle frame_change(const ChartBundle& b, const MatrixJet& T);

}  // namespace cvforge
