#include "cvforge/formal_iso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvforge/linsolve.hpp"

namespace cvforge {

namespace {

// Everything the order-k relations need, computed once.
struct PairData {
  JetContext ctx;
  int m = 0, n = 0;
  std::vector<MatrixJet> C, Ct, gr, gh;
  MatrixJet U, Ut, Q, V, G, Z;
};

PairData prepare(const ChartBundle& saito, const ChartBundle& cv) {
  PairData p;
  p.ctx = saito.ctx;
  p.m = saito.m();
  p.n = saito.n;
  p.C = saito.require_C();
  p.U = require(saito.U, "U");
  p.V = require(saito.V, "V");
  p.G = require(saito.g, "g");
  p.gr = saito.require_gamma10();
  const MatrixJet& k = require(cv.kappa, "kappa");
  p.Q = require(cv.Q, "Q");
  p.gh = chern_connection(require(cv.h, "h"));
  for (auto& c : p.C) p.Ct.push_back(kappa_conjugate(c, k));
  p.Ut = kappa_conjugate(p.U, k);
  p.Z = MatrixJet(p.ctx, p.n, p.n);
  return p;
}

double shared_mismatch(const ChartBundle& s, const ChartBundle& c) {
  if (s.ctx != c.ctx || s.n != c.n || s.C.size() != c.C.size())
    throw Error(ErrorKind::SharedDataMismatch, "charts have different shapes");
  double r = 0.0;
  for (size_t i = 0; i < s.C.size(); ++i) r = std::max(r, (s.C[i] - c.C[i]).max_abs());
  r = std::max(r, (require(s.U, "U") - require(c.U, "U")).max_abs());
  r = std::max(r, (require(s.g, "g") - require(c.g, "g")).max_abs());
  return r;
}

const MatrixJet& at(const PairData& p, const std::vector<MatrixJet>& A, int j) {
  return j < 0 ? p.Z : A[static_cast<size_t>(j)];
}

// Blocks: a_0..a_{m-1}, b, c_0..c_{m-1}, d.
std::vector<MatrixJet> blocks(const PairData& p, const std::vector<MatrixJet>& A, int k) {
  std::vector<MatrixJet> out;
  const MatrixJet& Ak = A[static_cast<size_t>(k)];
  const MatrixJet& A1 = at(p, A, k - 1);
  const MatrixJet& A2 = at(p, A, k - 2);
  for (int i = 0; i < p.m; ++i)
    out.push_back(commutator(p.C[i], Ak) + A1.derivative(i, true) + p.gh[i] * A1 - A1 * p.gr[i]);
  out.push_back(commutator(p.U, Ak) + A1 * cd(k - 1) - p.Q * A1 + A1 * p.V - p.Ut * A2);
  for (int j = 0; j < p.m; ++j) out.push_back(Ak.derivative(j, false) + p.Ct[j] * A1);
  MatrixJet d = p.Z;
  for (int a = 0; a <= k; ++a) {
    MatrixJet term = A[static_cast<size_t>(a)].transpose() * p.G * A[static_cast<size_t>(k - a)];
    d += ((k - a) % 2 == 0) ? term : -term;
  }
  out.push_back(d);
  return out;
}

// Valid degree of the a and b blocks: how far A_k can be determined.
int solvable_degree(const PairData& p, const std::vector<MatrixJet>& bl) {
  int v = p.ctx.d;
  for (int i = 0; i <= p.m; ++i) v = std::min(v, std::min(bl[static_cast<size_t>(i)].precision(), p.ctx.d));
  return v;
}

std::vector<int> row_degrees(const PairData& p, const std::vector<MatrixJet>& bl) {
  std::vector<int> his;
  for (auto& b : bl) his.push_back(std::min(b.precision(), p.ctx.d));
  return his;
}

Eigen::VectorXcd flatten(const std::vector<MatrixJet>& bl, const std::vector<int>& his) {
  std::vector<cd> v;
  for (size_t i = 0; i < bl.size(); ++i) append_coefficients(bl[i], 0, his[i], v);
  return to_vector(v);
}

// Radial primitive in the tbar variables: solves dbar F = w when w is dbar-closed.
MatrixJet dbar_primitive(const PairData& p, const std::vector<MatrixJet>& w) {
  const JetContext& ctx = p.ctx;
  int prec = kExact;
  for (auto& wj : w) prec = std::min(prec, wj.precision());
  bool dropped = false;
  MatrixJet out(ctx, p.n, p.n);
  for (int r = 0; r < p.n; ++r)
    for (int c = 0; c < p.n; ++c) {
      Jet acc(ctx);
      for (int j = 0; j < p.m; ++j)
        for (auto& [key, v] : w[static_cast<size_t>(j)](r, c).terms()) {
          int bdeg = 0;
          for (int q = 0; q < ctx.m; ++q) bdeg += key_exp(key, ctx.m + q);
          if (key_degree(key) + 1 > ctx.d || key_exp(key, ctx.m + j) + 1 > 15) {
            dropped = true;
            continue;
          }
          acc.add_term(key + key_unit(ctx.m + j), v / double(bdeg + 1));
        }
      out(r, c) = acc;
    }
  int rp = prec >= kExact ? (dropped ? ctx.d : kExact) : std::min(prec + 1, ctx.d);
  return rp >= kExact ? out : out.with_precision(rp);
}

MatrixJet particular(const PairData& p, const MatrixJet& Aprev) {
  std::vector<MatrixJet> w;
  for (int j = 0; j < p.m; ++j) w.push_back(-(p.Ct[j] * Aprev));
  return dbar_primitive(p, w);
}

// Holomorphic matrix polynomials of degree <= deg; index (r*n + c)*nk + key.
struct HolBasis {
  JetContext ctx;
  int n = 0;
  std::vector<Key> keys;
  HolBasis(const JetContext& c, int n_, int deg) : ctx(c), n(n_), keys(monomials_up_to(c, deg, true)) {}
  int size() const { return n * n * static_cast<int>(keys.size()); }
  MatrixJet unit(int idx) const {
    const int nk = static_cast<int>(keys.size());
    MatrixJet M(ctx, n, n);
    const int e = idx / nk;
    M(e / n, e % n) = Jet::from_key(ctx, keys[static_cast<size_t>(idx % nk)]);
    return M;
  }
  MatrixJet combine(const Eigen::VectorXcd& x, Eigen::Index offset = 0) const {
    const int nk = static_cast<int>(keys.size());
    MatrixJet M(ctx, n, n);
    for (int e = 0; e < n * n; ++e) {
      Jet j(ctx);
      for (int q = 0; q < nk; ++q) {
        cd v = x(offset + e * nk + q);
        if (v != cd(0.0)) j.add_term(keys[static_cast<size_t>(q)], v);
      }
      M(e / n, e % n) = j;
    }
    return M;
  }
};

// Linear part of the order-k blocks in a holomorphic change of A_k.
std::vector<MatrixJet> linear_order(const PairData& p, const MatrixJet& dA, int k) {
  std::vector<MatrixJet> out;
  for (int i = 0; i < p.m; ++i) out.push_back(commutator(p.C[i], dA));
  out.push_back(commutator(p.U, dA));
  for (int j = 0; j < p.m; ++j) out.push_back(dA.derivative(j, false));
  MatrixJet gd = p.G * dA;
  out.push_back(dA.transpose() * p.G + (k % 2 == 0 ? gd : -gd));
  return out;
}

// Linear part of the order-(k+1) blocks in (dA_k, dA_{k+1}) around the current A_1.
std::vector<MatrixJet> linear_next(const PairData& p, const MatrixJet& dk, const MatrixJet& dk1,
                                   const MatrixJet& A1, int k) {
  std::vector<MatrixJet> out;
  for (int i = 0; i < p.m; ++i)
    out.push_back(commutator(p.C[i], dk1) + dk.derivative(i, true) + p.gh[i] * dk - dk * p.gr[i]);
  out.push_back(commutator(p.U, dk1) + dk * cd(k) - p.Q * dk + dk * p.V);
  for (int j = 0; j < p.m; ++j) out.push_back(dk1.derivative(j, false) + p.Ct[j] * dk);
  MatrixJet gd = p.G * dk1;
  MatrixJet d = dk1.transpose() * p.G + ((k + 1) % 2 == 0 ? gd : -gd);
  MatrixJet cross = A1.transpose() * p.G * dk;
  d = d - dk.transpose() * p.G * A1 + (k % 2 == 0 ? cross : -cross);
  out.push_back(d);
  return out;
}

double inf_norm(const Eigen::VectorXcd& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

int numeric_rank(const Eigen::MatrixXcd& M, double tol) {
  if (M.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++r;
  return r;
}

}  // namespace

std::vector<MatrixJet> formal_iso_blocks(const ChartBundle& saito, const ChartBundle& cv,
                                         const std::vector<MatrixJet>& A, int k) {
  if (k < 1 || static_cast<int>(A.size()) <= k) throw Error(ErrorKind::InvalidArgument, "need A_0..A_k");
  return blocks(prepare(saito, cv), A, k);
}

FormalIso solve_formal_iso(const ChartBundle& saito, const ChartBundle& cv, int K, double tol) {
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "order must be positive");
  const double mag = std::max(saito.max_input_magnitude(), cv.max_input_magnitude());
  const double thr = pass_threshold(tol, mag);
  const double mismatch = shared_mismatch(saito, cv);
  if (mismatch > thr)
    throw Error(ErrorKind::SharedDataMismatch, "C, U or g differ by " + std::to_string(mismatch));

  const PairData p = prepare(saito, cv);
  FormalIso iso;
  iso.K = K;
  iso.A.push_back(MatrixJet::identity(p.ctx, p.n));

  for (int k = 1; k <= K; ++k) {
    OrderLog lg;
    lg.order = k;
    lg.threshold = thr;

    std::vector<MatrixJet> A = iso.A;
    A.push_back(p.Z);
    const int pk = solvable_degree(p, blocks(p, A, k));
    lg.precision = pk;
    if (pk < 0) {
      lg.residual = std::numeric_limits<double>::quiet_NaN();
      iso.log.push_back(lg);
      break;
    }
    const MatrixJet Pk = particular(p, iso.A.back()).with_precision(pk);
    A.back() = Pk;
    const auto bl0 = blocks(p, A, k);
    const auto his = row_degrees(p, bl0);
    const Eigen::VectorXcd r0 = flatten(bl0, his);

    HolBasis basis(p.ctx, p.n, pk);
    lg.unknowns = basis.size();
    Eigen::MatrixXcd J(r0.size(), basis.size());
    for (int c = 0; c < basis.size(); ++c) J.col(c) = flatten(linear_order(p, basis.unit(c), k), his);
    LeastSquares ls = solve_least_squares(J, -r0);
    Eigen::VectorXcd x = ls.x;
    Eigen::MatrixXcd N = ls.nullspace;

    A.back() = (Pk + basis.combine(x)).with_precision(pk);
    lg.residual = inf_norm(flatten(blocks(p, A, k), his));
    lg.solvable = lg.residual <= thr;
    lg.kernel_dim = static_cast<int>(N.cols());

    // Fix the order-k freedom with the order-(k+1) relations.
    if (lg.solvable && N.cols() > 0) {
      const MatrixJet A0k = A.back();
      std::vector<MatrixJet> B = A;
      B.push_back(p.Z);
      const int pk1 = solvable_degree(p, blocks(p, B, k + 1));
      if (pk1 >= 0) {
        lg.lookahead = true;
        HolBasis next(p.ctx, p.n, pk1);
        const Eigen::Index ny = N.cols(), nu = ny + next.size();
        Eigen::VectorXcd z = Eigen::VectorXcd::Zero(nu);
        std::vector<int> his1;
        Eigen::MatrixXcd JL;
        std::vector<MatrixJet> dk_cols, dk1_cols;
        for (Eigen::Index c = 0; c < ny; ++c) {
          MatrixJet dk = basis.combine(N.col(c));
          dk_cols.push_back(dk);
          dk1_cols.push_back(particular(p, dk));
        }
        const int iters = (k == 1) ? 8 : 1;
        for (int it = 0; it < iters; ++it) {
          B[static_cast<size_t>(k)] = (A0k + basis.combine(N * z.head(ny))).with_precision(pk);
          B[static_cast<size_t>(k + 1)] =
              (particular(p, B[static_cast<size_t>(k)]) + next.combine(z, ny)).with_precision(pk1);
          const auto bl = blocks(p, B, k + 1);
          if (his1.empty()) his1 = row_degrees(p, bl);
          const Eigen::VectorXcd r = flatten(bl, his1);
          const MatrixJet& A1 = B[1];
          JL.resize(r.size(), nu);
          for (Eigen::Index c = 0; c < ny; ++c)
            JL.col(c) = flatten(linear_next(p, dk_cols[static_cast<size_t>(c)], dk1_cols[static_cast<size_t>(c)], A1, k), his1);
          for (int c = 0; c < next.size(); ++c)
            JL.col(ny + c) = flatten(linear_next(p, p.Z, next.unit(c), A1, k), his1);
          LeastSquares step = solve_least_squares(JL, -r);
          z += step.x;
          if (step.x.norm() <= 1e-14 * (1.0 + z.norm())) break;
        }
        LeastSquares fin = solve_least_squares(JL, Eigen::VectorXcd::Zero(JL.rows()));
        Eigen::MatrixXcd Zy = fin.nullspace.topRows(ny);
        lg.kernel_dim = numeric_rank(Zy, 1e-8);
        x += N * z.head(ny);
        A.back() = (Pk + basis.combine(x)).with_precision(pk);
        lg.residual = inf_norm(flatten(blocks(p, A, k), his));
        lg.solvable = lg.residual <= thr;
        if (k == 1 && lg.kernel_dim > 0) {
          Eigen::BDCSVD<Eigen::MatrixXcd> svd(N * Zy, Eigen::ComputeThinU);
          for (int c = 0; c < lg.kernel_dim; ++c) iso.kernel_1.push_back(basis.combine(svd.matrixU().col(c)));
        }
      } else if (k == 1) {
        for (Eigen::Index c = 0; c < N.cols(); ++c) iso.kernel_1.push_back(basis.combine(N.col(c)));
      }
    } else if (k == 1) {
      for (Eigen::Index c = 0; c < N.cols(); ++c) iso.kernel_1.push_back(basis.combine(N.col(c)));
    }
    lg.rank = lg.unknowns - lg.kernel_dim;
    iso.log.push_back(lg);
    if (!lg.solvable) break;
    iso.A.push_back(A.back());
    iso.achieved = k;
  }
  return iso;
}

MatrixJet potential_from_first_order(const MatrixJet& A1, const ChartBundle& cv) {
  MatrixJet P = -h_adjoint(A1, require(cv.h, "h"));
  return (P + g_adjoint(P, require(cv.g, "g"))) * cd(0.5);
}

MatrixJet extract_potential(const FormalIso& iso, const ChartBundle& cv) {
  if (iso.achieved < 1 || iso.A.size() < 2) throw Error(ErrorKind::OrderTooLow, "first order not solved");
  return potential_from_first_order(iso.A[1], cv);
}

StructureReport check_harmonic(const ChartBundle& saito, const ChartBundle& cv, const MatrixJet& A, double tol) {
  const PairData p = prepare(saito, cv);
  const double thr = pass_threshold(tol, std::max(saito.max_input_magnitude(), cv.max_input_magnitude()));
  const MatrixJet B = h_adjoint(A, require(cv.h, "h"));
  StructureReport rep;
  rep.name = "harmonic_potential";
  std::vector<MatrixJet> conn, dbar;
  for (int i = 0; i < p.m; ++i) {
    conn.push_back(p.gh[i] - (p.gr[i] - commutator(B, p.C[i])));
    dbar.push_back(B.derivative(i, false) - p.Ct[i]);
  }
  rep.add("connection", residual_norm(conn), thr);
  rep.add("higgs_endomorphism", residual_norm(p.Q - (p.V - commutator(p.U, B))), thr);
  rep.add("dbar_potential", residual_norm(dbar), thr);
  rep.add("g_symmetric", residual_norm(A - g_adjoint(A, p.G)), thr);
  return rep;
}

}  // namespace cvforge
