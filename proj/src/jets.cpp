#include "cvforge/jets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace cvforge {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::NonUnit: return "NonUnit";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::MissingTensor: return "MissingTensor";
    case ErrorKind::BadLaurentRange: return "BadLaurentRange";
    case ErrorKind::AxiomFailure: return "AxiomFailure";
    case ErrorKind::SharedDataMismatch: return "SharedDataMismatch";
    case ErrorKind::OrderTooLow: return "OrderTooLow";
    case ErrorKind::NoUnfolding: return "NoUnfolding";
    case ErrorKind::BadSection: return "BadSection";
    case ErrorKind::DegenerateInducedMetric: return "DegenerateInducedMetric";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::OnDiscriminant: return "OnDiscriminant";
    case ErrorKind::OnCaustic: return "OnCaustic";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::ProjectionFailed: return "ProjectionFailed";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::DuplicateEigenvalues: return "DuplicateEigenvalues";
    case ErrorKind::InconsistentOrder: return "InconsistentOrder";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::NonRealWeight: return "NonRealWeight";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

JetContext::JetContext(int m_, int d_) : m(m_), d(d_) {
  // 4-bit exponent packing caps both the variable count and the degree.
  if (m < 1 || m > 8) throw Error(ErrorKind::InvalidArgument, "jet context needs 1 <= m <= 8");
  if (d < 2 || d > 15) throw Error(ErrorKind::InvalidArgument, "jet context needs 2 <= d <= 15");
}

Key pack_key(const JetContext& ctx, const std::vector<int>& alpha, const std::vector<int>& beta) {
  if (static_cast<int>(alpha.size()) != ctx.m || static_cast<int>(beta.size()) != ctx.m)
    throw Error(ErrorKind::InvalidArgument, "exponent vector length must equal m");
  Key k = 0;
  for (int i = 0; i < ctx.m; ++i) {
    if (alpha[i] < 0 || alpha[i] > 15 || beta[i] < 0 || beta[i] > 15)
      throw Error(ErrorKind::InvalidArgument, "exponent out of range");
    k |= Key(alpha[i]) << (4 * i);
    k |= Key(beta[i]) << (4 * (ctx.m + i));
  }
  return k;
}

void unpack_key(const JetContext& ctx, Key k, std::vector<int>& alpha, std::vector<int>& beta) {
  alpha.assign(ctx.m, 0);
  beta.assign(ctx.m, 0);
  for (int i = 0; i < ctx.m; ++i) {
    alpha[i] = key_exp(k, i);
    beta[i] = key_exp(k, ctx.m + i);
  }
}

int key_degree(Key k) {
  Key x = (k & 0x0F0F0F0F0F0F0F0FULL) + ((k >> 4) & 0x0F0F0F0F0F0F0F0FULL);
  return static_cast<int>((x * 0x0101010101010101ULL) >> 56);
}

Key key_swap(const JetContext& ctx, Key k) {
  const int s = 4 * ctx.m;
  const Key lowmask = (s >= 64) ? ~Key{0} : ((Key{1} << s) - 1);
  return ((k & lowmask) << s) | (k >> s);
}

std::vector<Key> monomials_up_to(const JetContext& ctx, int p, bool holomorphic_only) {
  std::vector<Key> out;
  if (p < 0) return out;
  const int nv = holomorphic_only ? ctx.m : ctx.nvars();
  // Depth-first enumeration; ordering is by (degree, key).
  std::vector<int> ex(static_cast<size_t>(nv), 0);
  std::vector<std::pair<int, Key>> tmp;
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == nv) {
      Key k = 0;
      int deg = 0;
      for (int v = 0; v < nv; ++v) {
        k |= Key(ex[v]) << (4 * v);
        deg += ex[v];
      }
      tmp.emplace_back(deg, k);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      ex[var] = e;
      rec(var + 1, left - e);
    }
    ex[var] = 0;
  };
  rec(0, p);
  std::sort(tmp.begin(), tmp.end());
  out.reserve(tmp.size());
  for (auto& pr : tmp) out.push_back(pr.second);
  return out;
}

// ---------------------------------------------------------------- Jet

Jet::Jet(const JetContext& ctx, int prec) : ctx_(ctx), prec_(prec) {}

Jet Jet::constant(const JetContext& ctx, cd c) {
  Jet j(ctx);
  j.add_term(0, c);
  return j;
}

Jet Jet::coordinate(const JetContext& ctx, int i, bool holomorphic) {
  if (i < 0 || i >= ctx.m) throw Error(ErrorKind::InvalidArgument, "coordinate index out of range");
  return from_key(ctx, key_unit(holomorphic ? i : ctx.m + i));
}

Jet Jet::monomial(const JetContext& ctx, const std::vector<int>& alpha, const std::vector<int>& beta,
                  cd c) {
  return from_key(ctx, pack_key(ctx, alpha, beta), c);
}

Jet Jet::from_key(const JetContext& ctx, Key k, cd c) {
  Jet j(ctx);
  j.add_term(k, c);
  return j;
}

Jet Jet::with_precision(int p) const {
  Jet r(ctx_, std::min(p, prec_));
  const int vd = r.valid_degree();
  for (auto& [k, v] : terms_)
    if (key_degree(k) <= vd) r.terms_.emplace_hint(r.terms_.end(), k, v);
  return r;
}

cd Jet::coeff(Key k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? cd(0.0) : it->second;
}

cd Jet::coeff(const std::vector<int>& alpha, const std::vector<int>& beta) const {
  return coeff(pack_key(ctx_, alpha, beta));
}

void Jet::add_term(Key k, cd c) {
  if (key_degree(k) > valid_degree()) {
    if (exact() && c != cd(0.0)) prec_ = ctx_.d;  // truncation makes it inexact
    return;
  }
  if (c == cd(0.0)) return;
  auto [it, ins] = terms_.try_emplace(k, c);
  if (!ins) {
    it->second += c;
    if (it->second == cd(0.0)) terms_.erase(it);
  }
}

bool Jet::is_zero() const { return terms_.empty(); }

double Jet::max_abs() const {
  double m = 0.0;
  for (auto& kv : terms_) m = std::max(m, std::abs(kv.second));
  return m;
}

int Jet::max_degree() const {
  int m = -1;
  for (auto& kv : terms_) m = std::max(m, key_degree(kv.first));
  return m;
}

static void check_ctx(const JetContext& a, const JetContext& b) {
  if (a != b) throw Error(ErrorKind::ContextMismatch, "jets from different contexts");
}

Jet combine(const Jet& a, const Jet& b, double sign) {
  check_ctx(a.ctx_, b.ctx_);
  Jet r(a.ctx_, std::min(a.prec_, b.prec_));
  const int vd = r.valid_degree();
  for (auto& [k, v] : a.terms_)
    if (key_degree(k) <= vd) r.terms_.emplace_hint(r.terms_.end(), k, v);
  for (auto& [k, v] : b.terms_)
    if (key_degree(k) <= vd) r.add_term(k, sign * v);
  return r;
}

Jet Jet::operator+(const Jet& o) const { return combine(*this, o, 1.0); }
Jet Jet::operator-(const Jet& o) const { return combine(*this, o, -1.0); }

Jet Jet::operator*(const Jet& o) const {
  check_ctx(ctx_, o.ctx_);
  int p = std::min(prec_, o.prec_);
  bool truncated = false;
  const int cap = std::min(p, ctx_.d);
  std::vector<std::pair<Key, cd>> bt(o.terms_.begin(), o.terms_.end());
  std::vector<int> bd(bt.size());
  for (size_t j = 0; j < bt.size(); ++j) bd[j] = key_degree(bt[j].first);
  std::map<Key, cd> acc;
  for (auto& [ka, va] : terms_) {
    const int da = key_degree(ka);
    for (size_t j = 0; j < bt.size(); ++j) {
      if (da + bd[j] > cap) {
        truncated = true;
        continue;
      }
      acc[ka + bt[j].first] += va * bt[j].second;
    }
  }
  if (p >= kExact && truncated) p = ctx_.d;
  Jet r(ctx_, p);
  for (auto& [k, v] : acc)
    if (v != cd(0.0)) r.terms_.emplace_hint(r.terms_.end(), k, v);
  return r;
}

Jet Jet::operator-() const { return *this * cd(-1.0); }

Jet Jet::operator*(cd s) const {
  Jet r(ctx_, prec_);
  if (s == cd(0.0)) return r;
  for (auto& [k, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), k, v * s);
  return r;
}

Jet Jet::conj() const {
  Jet r(ctx_, prec_);
  for (auto& [k, v] : terms_) r.terms_.emplace(key_swap(ctx_, k), std::conj(v));
  return r;
}

Jet Jet::derivative(int i, bool holomorphic) const {
  if (i < 0 || i >= ctx_.m) throw Error(ErrorKind::InvalidArgument, "derivative index out of range");
  const int var = holomorphic ? i : ctx_.m + i;
  Jet r(ctx_, exact() ? kExact : prec_ - 1);
  const Key u = key_unit(var);
  for (auto& [k, v] : terms_) {
    const int e = key_exp(k, var);
    if (e == 0) continue;
    r.add_term(k - u, v * double(e));
  }
  return r;
}

Jet Jet::antiderivative(int i, bool holomorphic) const {
  if (i < 0 || i >= ctx_.m) throw Error(ErrorKind::InvalidArgument, "index out of range");
  const int var = holomorphic ? i : ctx_.m + i;
  Jet r(ctx_, exact() ? kExact : std::min(prec_ + 1, ctx_.d));
  const Key u = key_unit(var);
  for (auto& [k, v] : terms_) {
    const int e = key_exp(k, var);
    if (key_degree(k) + 1 > ctx_.d || e + 1 > 15) {
      if (r.exact()) r.prec_ = ctx_.d;
      continue;
    }
    r.add_term(k + u, v / double(e + 1));
  }
  return r;
}

cd Jet::evaluate(const std::vector<cd>& t) const {
  if (static_cast<int>(t.size()) != ctx_.m) throw Error(ErrorKind::InvalidArgument, "point dimension");
  cd s = 0.0;
  for (auto& [k, v] : terms_) {
    cd term = v;
    for (int i = 0; i < ctx_.m; ++i) {
      int a = key_exp(k, i), b = key_exp(k, ctx_.m + i);
      if (a) term *= std::pow(t[i], a);
      if (b) term *= std::pow(std::conj(t[i]), b);
    }
    s += term;
  }
  return s;
}

Jet Jet::homogeneous_part(int deg) const {
  Jet r(ctx_, prec_);
  for (auto& [k, v] : terms_)
    if (key_degree(k) == deg) r.terms_.emplace(k, v);
  return r;
}

Jet Jet::holomorphic_part() const {
  Jet r(ctx_, prec_);
  const Key lowmask = (Key{1} << (4 * ctx_.m)) - 1;
  for (auto& [k, v] : terms_)
    if ((k & ~lowmask) == 0) r.terms_.emplace(k, v);
  return r;
}

Jet Jet::exp() const {
  const cd a0 = constant_term();
  Jet n = *this - Jet::constant(ctx_, a0);
  Jet sum = Jet::constant(ctx_, 1.0);
  Jet term = Jet::constant(ctx_, 1.0);
  for (int k = 1; k <= ctx_.d; ++k) {
    term = term * n * cd(1.0 / k);
    if (term.is_zero()) break;
    sum = sum + term;
  }
  if (!n.is_zero() && sum.exact()) sum = sum.with_precision(ctx_.d);
  return sum.with_precision(prec_) * std::exp(a0);
}

Jet ring_ops(const Jet& a, const Jet& b, RingOp op, cd scalar) {
  switch (op) {
    case RingOp::Add: return a + b;
    case RingOp::Sub: return a - b;
    case RingOp::Mul: return a * b;
    case RingOp::ScalarMul: check_ctx(a.context(), b.context()); return a * scalar;
  }
  return a;
}

Jet differentiate(const Jet& a, int var, bool holomorphic) { return a.derivative(var, holomorphic); }

Jet invert_unit(const Jet& a) {
  const cd a0 = a.constant_term();
  if (std::abs(a0) <= 1e-12 * std::max(1.0, a.max_abs()))
    throw Error(ErrorKind::NonUnit, "constant term is zero");
  const JetContext& ctx = a.context();
  Jet n = (a - Jet::constant(ctx, a0)) * (1.0 / a0);
  if (n.is_zero()) return Jet::constant(ctx, 1.0 / a0).with_precision(a.precision());
  Jet sum = Jet::constant(ctx, 1.0);
  Jet term = Jet::constant(ctx, 1.0);
  for (int k = 1; k <= ctx.d; ++k) {
    term = term * n * cd(-1.0);
    if (term.is_zero()) break;
    sum = sum + term;
  }
  return sum.with_precision(std::min(a.precision(), ctx.d)) * (1.0 / a0);
}

bool is_holomorphic(const Jet& a, double tol) {
  const JetContext& ctx = a.context();
  const Key lowmask = (Key{1} << (4 * ctx.m)) - 1;
  for (auto& [k, v] : a.terms())
    if ((k & ~lowmask) != 0 && std::abs(v) > tol) return false;
  return true;
}

// ---------------------------------------------------------------- MatrixJet

MatrixJet::MatrixJet(const JetContext& ctx, int rows, int cols)
    : ctx_(ctx), rows_(rows), cols_(cols), e_(static_cast<size_t>(rows * cols), Jet(ctx)) {
  if (rows <= 0 || cols <= 0) throw Error(ErrorKind::InvalidArgument, "matrix dimensions must be positive");
}

MatrixJet MatrixJet::identity(const JetContext& ctx, int n) {
  MatrixJet r(ctx, n, n);
  for (int i = 0; i < n; ++i) r(i, i) = Jet::constant(ctx, 1.0);
  return r;
}

MatrixJet MatrixJet::from_constant(const JetContext& ctx, const Eigen::MatrixXcd& M) {
  MatrixJet r(ctx, static_cast<int>(M.rows()), static_cast<int>(M.cols()));
  for (int i = 0; i < r.rows_; ++i)
    for (int j = 0; j < r.cols_; ++j) r(i, j) = Jet::constant(ctx, M(i, j));
  return r;
}

MatrixJet MatrixJet::scalar(const Jet& s, int n) {
  MatrixJet r(s.context(), n, n);
  for (int i = 0; i < n; ++i) r(i, i) = s;
  return r;
}

static void check_same_shape(const MatrixJet& a, const MatrixJet& b) {
  if (a.context() != b.context()) throw Error(ErrorKind::ContextMismatch, "matrix jets from different contexts");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::InvalidArgument, "matrix shape mismatch");
}

MatrixJet MatrixJet::operator+(const MatrixJet& o) const {
  check_same_shape(*this, o);
  MatrixJet r = *this;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

MatrixJet MatrixJet::operator-(const MatrixJet& o) const {
  check_same_shape(*this, o);
  MatrixJet r = *this;
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

MatrixJet MatrixJet::operator*(const MatrixJet& o) const {
  if (ctx_ != o.ctx_) throw Error(ErrorKind::ContextMismatch, "matrix jets from different contexts");
  if (cols_ != o.rows_) throw Error(ErrorKind::InvalidArgument, "matrix product shape mismatch");
  MatrixJet r(ctx_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < o.cols_; ++j) {
      Jet s(ctx_);
      for (int k = 0; k < cols_; ++k) {
        const Jet& a = (*this)(i, k);
        const Jet& b = o(k, j);
        if (a.is_zero() || b.is_zero()) {
          // still track precision of the factors
          s = s + Jet(ctx_, std::min(a.precision(), b.precision()));
          continue;
        }
        s = s + a * b;
      }
      r(i, j) = s;
    }
  return r;
}

MatrixJet MatrixJet::operator-() const { return *this * cd(-1.0); }

MatrixJet MatrixJet::operator*(cd s) const {
  MatrixJet r = *this;
  for (auto& x : r.e_) x = x * s;
  return r;
}

MatrixJet MatrixJet::operator*(const Jet& s) const {
  MatrixJet r = *this;
  for (auto& x : r.e_) x = x * s;
  return r;
}

MatrixJet MatrixJet::transpose() const {
  MatrixJet r(ctx_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

MatrixJet MatrixJet::conj() const {
  MatrixJet r = *this;
  for (auto& x : r.e_) x = x.conj();
  return r;
}

MatrixJet MatrixJet::derivative(int i, bool holomorphic) const {
  MatrixJet r = *this;
  for (auto& x : r.e_) x = x.derivative(i, holomorphic);
  return r;
}

MatrixJet MatrixJet::antiderivative(int i, bool holomorphic) const {
  MatrixJet r = *this;
  for (auto& x : r.e_) x = x.antiderivative(i, holomorphic);
  return r;
}

MatrixJet MatrixJet::with_precision(int p) const {
  MatrixJet r = *this;
  for (auto& x : r.e_) x = x.with_precision(p);
  return r;
}

Jet MatrixJet::trace() const {
  Jet s(ctx_);
  for (int i = 0; i < std::min(rows_, cols_); ++i) s = s + (*this)(i, i);
  return s;
}

Eigen::MatrixXcd MatrixJet::constant_term() const {
  Eigen::MatrixXcd M(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) M(i, j) = (*this)(i, j).constant_term();
  return M;
}

Eigen::MatrixXcd MatrixJet::evaluate(const std::vector<cd>& t) const {
  Eigen::MatrixXcd M(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) M(i, j) = (*this)(i, j).evaluate(t);
  return M;
}

double MatrixJet::max_abs() const {
  double m = 0.0;
  for (auto& x : e_) m = std::max(m, x.max_abs());
  return m;
}

int MatrixJet::precision() const {
  int p = kExact;
  for (auto& x : e_) p = std::min(p, x.precision());
  return p;
}

bool MatrixJet::is_zero() const {
  for (auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

MatrixJet commutator(const MatrixJet& a, const MatrixJet& b) { return a * b - b * a; }

MatrixJet invert_matrix(const MatrixJet& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "inverse of non-square matrix");
  const JetContext& ctx = a.context();
  const int n = a.rows();
  Eigen::MatrixXcd A0 = a.constant_term();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A0);
  const auto& s = svd.singularValues();
  if (s(n - 1) <= 1e-12 * std::max(1.0, s(0)))
    throw Error(ErrorKind::NonUnit, "constant-term matrix is singular");
  Eigen::MatrixXcd A0inv = A0.inverse();
  MatrixJet inv0 = MatrixJet::from_constant(ctx, A0inv);
  MatrixJet nmat = inv0 * (a - MatrixJet::from_constant(ctx, A0));
  if (nmat.is_zero()) return inv0.with_precision(a.precision());
  MatrixJet sum = MatrixJet::identity(ctx, n);
  MatrixJet term = MatrixJet::identity(ctx, n);
  for (int k = 1; k <= ctx.d; ++k) {
    term = -(term * nmat);
    if (term.is_zero()) break;
    sum = sum + term;
  }
  return (sum * inv0).with_precision(std::min(a.precision(), ctx.d));
}

bool is_holomorphic(const MatrixJet& a, double tol) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!is_holomorphic(a(i, j), tol)) return false;
  return true;
}

// ---------------------------------------------------------------- LaurentJet

LaurentJet::LaurentJet(int lo, std::vector<MatrixJet> coeffs) : lo_(lo), c_(std::move(coeffs)) {
  if (c_.empty()) throw Error(ErrorKind::BadLaurentRange, "empty coefficient list");
  for (auto& m : c_) {
    if (m.context() != c_[0].context())
      throw Error(ErrorKind::BadLaurentRange, "coefficients from different contexts");
    if (m.rows() != c_[0].rows() || m.cols() != c_[0].cols())
      throw Error(ErrorKind::BadLaurentRange, "coefficient shape mismatch");
  }
}

LaurentJet LaurentJet::zero(const JetContext& ctx, int rows, int cols, int lo, int hi) {
  if (hi < lo) throw Error(ErrorKind::BadLaurentRange, "highest power below lowest");
  return LaurentJet(lo, std::vector<MatrixJet>(static_cast<size_t>(hi - lo + 1), MatrixJet(ctx, rows, cols)));
}

LaurentJet LaurentJet::single(int p, const MatrixJet& m) { return LaurentJet(p, {m}); }

MatrixJet LaurentJet::coeff(int p) const {
  if (p < lo_ || p > hi()) return MatrixJet(context(), rows(), cols());
  return c_[static_cast<size_t>(p - lo_)];
}

void LaurentJet::check_compatible(const LaurentJet& o) const {
  if (empty() || o.empty()) throw Error(ErrorKind::BadLaurentRange, "empty Laurent jet");
  if (context() != o.context()) throw Error(ErrorKind::BadLaurentRange, "Laurent jets from different contexts");
}

LaurentJet LaurentJet::operator+(const LaurentJet& o) const {
  check_compatible(o);
  const int l = std::min(lo_, o.lo_), h = std::max(hi(), o.hi());
  std::vector<MatrixJet> c;
  for (int p = l; p <= h; ++p) c.push_back(coeff(p) + o.coeff(p));
  return LaurentJet(l, std::move(c));
}

LaurentJet LaurentJet::operator-(const LaurentJet& o) const { return *this + o * cd(-1.0); }

LaurentJet LaurentJet::operator*(const LaurentJet& o) const {
  check_compatible(o);
  const int l = lo_ + o.lo_, h = hi() + o.hi();
  std::vector<MatrixJet> c(static_cast<size_t>(h - l + 1), MatrixJet(context(), rows(), o.cols()));
  for (int p = lo_; p <= hi(); ++p)
    for (int q = o.lo_; q <= o.hi(); ++q) {
      auto& slot = c[static_cast<size_t>(p + q - l)];
      slot = slot + coeff(p) * o.coeff(q);
    }
  return LaurentJet(l, std::move(c));
}

LaurentJet LaurentJet::operator*(cd s) const {
  LaurentJet r = *this;
  for (auto& m : r.c_) m = m * s;
  return r;
}

LaurentJet LaurentJet::z_dz() const {
  LaurentJet r = *this;
  for (int p = lo_; p <= hi(); ++p) r.at(p) = r.at(p) * cd(double(p));
  return r;
}

LaurentJet LaurentJet::reflect() const {
  LaurentJet r = *this;
  for (int p = lo_; p <= hi(); ++p)
    if (p % 2 != 0) r.at(p) = -r.at(p);
  return r;
}

LaurentJet LaurentJet::transpose() const {
  LaurentJet r = *this;
  for (auto& m : r.c_) m = m.transpose();
  return r;
}

LaurentJet LaurentJet::derivative(int i, bool holomorphic) const {
  LaurentJet r = *this;
  for (auto& m : r.c_) m = m.derivative(i, holomorphic);
  return r;
}

}  // namespace cvforge
