#pragma once
// Truncated power series in t_1..t_m and their conjugates, matrices of them,
// and finite Laurent expansions in z with matrix-jet coefficients.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "cvforge/errors.hpp"

namespace cvforge {

using cd = std::complex<double>;
using Key = std::uint64_t;

// Precision value meaning "this polynomial is the whole function".
constexpr int kExact = 1 << 20;

struct JetContext {
  int m = 0;
  int d = 0;
  JetContext() = default;
  JetContext(int m_, int d_);
  int nvars() const { return 2 * m; }
  bool operator==(const JetContext& o) const { return m == o.m && d == o.d; }
  bool operator!=(const JetContext& o) const { return !(*this == o); }
};

// Exponents are packed 4 bits per variable: t_1..t_m then tbar_1..tbar_m.
Key pack_key(const JetContext& ctx, const std::vector<int>& alpha, const std::vector<int>& beta);
void unpack_key(const JetContext& ctx, Key k, std::vector<int>& alpha, std::vector<int>& beta);
int key_degree(Key k);
inline int key_exp(Key k, int var) { return static_cast<int>((k >> (4 * var)) & 0xFu); }
inline Key key_unit(int var) { return Key{1} << (4 * var); }
// Swaps the t and tbar halves of a key.
Key key_swap(const JetContext& ctx, Key k);
// All monomial keys of total degree <= p, in a fixed deterministic order.
std::vector<Key> monomials_up_to(const JetContext& ctx, int p, bool holomorphic_only = false);

class Jet {
 public:
  Jet() = default;
  explicit Jet(const JetContext& ctx, int prec = kExact);
  static Jet constant(const JetContext& ctx, cd c);
  static Jet coordinate(const JetContext& ctx, int i, bool holomorphic = true);
  static Jet monomial(const JetContext& ctx, const std::vector<int>& alpha,
                      const std::vector<int>& beta, cd c = 1.0);
  static Jet from_key(const JetContext& ctx, Key k, cd c = 1.0);

  const JetContext& context() const { return ctx_; }
  int precision() const { return prec_; }
  bool exact() const { return prec_ >= kExact; }
  // Highest degree whose coefficients are trustworthy.
  int valid_degree() const { return prec_ < ctx_.d ? prec_ : ctx_.d; }
  Jet with_precision(int p) const;

  cd coeff(Key k) const;
  cd coeff(const std::vector<int>& alpha, const std::vector<int>& beta) const;
  void add_term(Key k, cd c);
  const std::map<Key, cd>& terms() const { return terms_; }
  cd constant_term() const { return coeff(Key{0}); }
  bool is_zero() const;
  double max_abs() const;
  // Largest degree actually present (-1 for the zero jet).
  int max_degree() const;

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet operator-() const;
  Jet operator*(cd s) const;
  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }

  // Pointwise complex conjugate of the function: swaps t/tbar exponents.
  Jet conj() const;
  Jet derivative(int i, bool holomorphic) const;
  // Term-by-term antiderivative in t_i (or tbar_i).
  Jet antiderivative(int i, bool holomorphic) const;
  // Evaluate at t (tbar = conj(t)); only meaningful near the origin.
  cd evaluate(const std::vector<cd>& t) const;
  Jet homogeneous_part(int deg) const;
  Jet holomorphic_part() const;
  Jet exp() const;

 private:
  JetContext ctx_{};
  int prec_ = kExact;
  std::map<Key, cd> terms_;
  friend Jet combine(const Jet&, const Jet&, double);
};

inline Jet operator*(cd s, const Jet& a) { return a * s; }

enum class RingOp { Add, Sub, Mul, ScalarMul };
Jet ring_ops(const Jet& a, const Jet& b, RingOp op, cd scalar = 1.0);
Jet differentiate(const Jet& a, int var, bool holomorphic);
Jet invert_unit(const Jet& a);
bool is_holomorphic(const Jet& a, double tol);

class MatrixJet {
 public:
  MatrixJet() = default;
  MatrixJet(const JetContext& ctx, int rows, int cols);
  static MatrixJet identity(const JetContext& ctx, int n);
  static MatrixJet from_constant(const JetContext& ctx, const Eigen::MatrixXcd& M);
  static MatrixJet scalar(const Jet& s, int n);

  const JetContext& context() const { return ctx_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Jet& operator()(int i, int j) { return e_[static_cast<size_t>(i * cols_ + j)]; }
  const Jet& operator()(int i, int j) const { return e_[static_cast<size_t>(i * cols_ + j)]; }

  MatrixJet operator+(const MatrixJet& o) const;
  MatrixJet operator-(const MatrixJet& o) const;
  MatrixJet operator*(const MatrixJet& o) const;
  MatrixJet operator-() const;
  MatrixJet operator*(cd s) const;
  MatrixJet operator*(const Jet& s) const;
  MatrixJet& operator+=(const MatrixJet& o) { return *this = *this + o; }
  MatrixJet& operator-=(const MatrixJet& o) { return *this = *this - o; }

  MatrixJet transpose() const;
  MatrixJet conj() const;
  MatrixJet derivative(int i, bool holomorphic) const;
  MatrixJet antiderivative(int i, bool holomorphic) const;
  MatrixJet with_precision(int p) const;
  Jet trace() const;
  Eigen::MatrixXcd constant_term() const;
  Eigen::MatrixXcd evaluate(const std::vector<cd>& t) const;
  double max_abs() const;
  int precision() const;
  bool is_zero() const;

 private:
  JetContext ctx_{};
  int rows_ = 0, cols_ = 0;
  std::vector<Jet> e_;
};

inline MatrixJet operator*(cd s, const MatrixJet& a) { return a * s; }
MatrixJet commutator(const MatrixJet& a, const MatrixJet& b);
MatrixJet invert_matrix(const MatrixJet& a);
bool is_holomorphic(const MatrixJet& a, double tol);

// Finite Laurent expansion sum_{p=lo}^{hi} z^p M_p.
class LaurentJet {
 public:
  LaurentJet() = default;
  LaurentJet(int lo, std::vector<MatrixJet> coeffs);
  static LaurentJet zero(const JetContext& ctx, int rows, int cols, int lo, int hi);
  static LaurentJet single(int p, const MatrixJet& m);

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
  bool empty() const { return c_.empty(); }
  int rows() const { return c_.empty() ? 0 : c_[0].rows(); }
  int cols() const { return c_.empty() ? 0 : c_[0].cols(); }
  const JetContext& context() const { return c_.at(0).context(); }
  // Zero matrix outside the stored range.
  MatrixJet coeff(int p) const;
  MatrixJet& at(int p) { return c_.at(static_cast<size_t>(p - lo_)); }
  const std::vector<MatrixJet>& coeffs() const { return c_; }

  LaurentJet operator+(const LaurentJet& o) const;
  LaurentJet operator-(const LaurentJet& o) const;
  LaurentJet operator*(const LaurentJet& o) const;
  LaurentJet operator*(cd s) const;
  // z d/dz, the substitution z -> -z, transpose, and coefficientwise derivative.
  LaurentJet z_dz() const;
  LaurentJet reflect() const;
  LaurentJet transpose() const;
  LaurentJet derivative(int i, bool holomorphic) const;

 private:
  void check_compatible(const LaurentJet& o) const;
  int lo_ = 0;
  std::vector<MatrixJet> c_;
};

}  // namespace cvforge
