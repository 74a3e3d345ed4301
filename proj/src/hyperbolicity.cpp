#include "cvforge/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "cvforge/errors.hpp"
#include "cvforge/linsolve.hpp"

namespace cvforge {

namespace {

double h_norm2(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& Hinv) {
  return (A.transpose() * H * A.conjugate() * Hinv).trace().real();
}

template <class F>
void parallel_for(int count, F&& body) {
  const int nt = std::max(1, std::min(worker_threads(), count));
  if (nt == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += nt) body(i);
    });
  for (auto& th : pool) th.join();
}

Eigen::VectorXcd trace_powers(const Eigen::MatrixXcd& A) {
  const Eigen::Index n = A.rows();
  Eigen::VectorXcd F(n);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    P = P * A;
    F(k) = P.trace();
  }
  return F;
}

// One attempt from a random symmetric start; false if Newton stalls or
// collapses onto 0.
bool project_nilpotent(Eigen::MatrixXcd& A) {
  const Eigen::Index n = A.rows();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> idx;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) idx.emplace_back(i, j);
  for (int it = 0; it < 60; ++it) {
    A /= A.norm();
    Eigen::VectorXcd F = trace_powers(A);
    if (F.cwiseAbs().maxCoeff() < 1e-14) return true;
    Eigen::MatrixXcd J(n, static_cast<Eigen::Index>(idx.size()));
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      // d tr(A^{k+1}) = (k+1) tr(A^k dA)
      for (size_t c = 0; c < idx.size(); ++c) {
        auto [i, j] = idx[c];
        cd v = (i == j) ? P(i, i) : P(i, j) + P(j, i);
        J(k, static_cast<Eigen::Index>(c)) = static_cast<double>(k + 1) * v;
      }
      P = P * A;
    }
    Eigen::VectorXcd step = solve_least_squares(J, F, 1e-12).x;
    for (size_t c = 0; c < idx.size(); ++c) {
      auto [i, j] = idx[c];
      A(i, j) -= step(static_cast<Eigen::Index>(c));
      if (i != j) A(j, i) = A(i, j);
    }
    if (A.norm() < 1e-6) return false;
  }
  A /= A.norm();
  return trace_powers(A).cwiseAbs().maxCoeff() < 1e-10;
}

NilpotentSample draw_sample(int n, std::uint64_t seed, int index, int salt = 0) {
  std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(salt)};
  std::mt19937_64 rng(sq);
  std::normal_distribution<double> nd;
  for (int attempt = 0; attempt < 25; ++attempt) {
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) A(i, j) = A(j, i) = cd(nd(rng), nd(rng));
    if (!project_nilpotent(A)) continue;
    NilpotentSample s;
    s.A = A;
    s.symmetry_residual = (A - A.transpose()).cwiseAbs().maxCoeff();
    s.nilpotency_residual = trace_powers(A).cwiseAbs().maxCoeff();
    if (s.symmetry_residual >= 1e-10 || s.nilpotency_residual >= 1e-8) continue;
    s.rho = rho(A);
    return s;
  }
  throw Error(ErrorKind::ProjectionFailed, "nilpotent projection did not converge after the retry budget");
}

// kappa-real, h-orthonormal basis of K at the base point (columns).
Eigen::MatrixXcd real_frame(const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& k) {
  const Eigen::Index n = H.rows();
  auto ip = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return (a.transpose() * H * b.conjugate())(0, 0).real();
  };
  Eigen::MatrixXcd V(n, n);
  Eigen::Index have = 0;
  for (Eigen::Index j = 0; j < n && have < n; ++j)
    for (cd s : {cd(1.0), cd(0.0, 1.0)}) {
      if (have == n) break;
      Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n);
      u(j) = s;
      Eigen::VectorXcd x = u + k * u.conjugate();
      for (Eigen::Index c = 0; c < have; ++c) x -= ip(x, V.col(c)) * V.col(c);
      double nx = ip(x, x);
      if (nx > 1e-10) V.col(have++) = x / std::sqrt(nx);
    }
  if (have < n) throw Error(ErrorKind::NotPositiveDefinite, "h is not positive on the real structure");
  return V;
}

}  // namespace

int worker_threads() {
  if (const char* s = std::getenv("CVFORGE_THREADS")) {
    int v = std::atoi(s);
    if (v > 0) return v;
  }
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(h);
}

double rho(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& H) {
  Eigen::MatrixXcd Hinv = H.inverse();
  double a2 = h_norm2(A, H, Hinv);
  if (a2 <= 0.0 || A.cwiseAbs().maxCoeff() == 0.0) throw Error(ErrorKind::ZeroMatrix, "rho of the zero matrix");
  Eigen::MatrixXcd flat = (Hinv * A.transpose() * H).conjugate();
  Eigen::MatrixXcd N = A * flat - flat * A;
  return -h_norm2(N, H, Hinv) / (a2 * a2);
}

double rho(const Eigen::MatrixXcd& A) {
  return rho(A, Eigen::MatrixXcd::Identity(A.rows(), A.cols()));
}

std::vector<NilpotentSample> sample_nilpotent_cone(int n, int count, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "nilpotent sampling needs n >= 2");
  if (count < 0) throw Error(ErrorKind::InvalidArgument, "negative sample count");
  std::vector<NilpotentSample> out(static_cast<size_t>(count));
  std::vector<std::exception_ptr> err(static_cast<size_t>(count));
  parallel_for(count, [&](int i) {
    try {
      out[static_cast<size_t>(i)] = draw_sample(n, seed, i);
    } catch (...) {
      err[static_cast<size_t>(i)] = std::current_exception();
    }
  });
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return out;
}

K0Estimate bound_k0(const ChartBundle& b, int count, std::uint64_t seed, bool refine) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "bound_k0 needs at least one sample");
  CanonicalData cdata = canonical_data(b);
  if (classify_point(cdata.f).kind != PointKind::Irreducible)
    throw Error(ErrorKind::NotIrreducible, "base point is not irreducible");
  SectionalEvaluator ev(cdata, b);
  const int m = b.m();
  const Eigen::MatrixXcd H0 = require(b.h, "h").constant_term();
  const Eigen::MatrixXcd V = real_frame(H0, require(b.kappa, "kappa").constant_term());
  const Eigen::MatrixXcd Vinv = V.inverse();
  const Eigen::MatrixXcd H0inv = H0.inverse();
  const Eigen::MatrixXcd gramT_inv = ev.hM0().transpose().inverse();
  std::vector<Eigen::MatrixXcd> C0, mult0;
  for (auto& C : b.require_C()) C0.push_back(C.constant_term());
  for (auto& M : cdata.f.mult) mult0.push_back(M.constant_term());
  const Eigen::VectorXcd e0 = cdata.f.e.constant_term();

  auto drop_unit = [&](Eigen::VectorXcd X) {
    Eigen::MatrixXcd MX = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i) MX += X(i) * mult0[static_cast<size_t>(i)];
    X -= (MX.trace() / static_cast<double>(m)) * e0;
    return X;
  };
  // X with C_X the h^end-projection of the sample onto F, minus its unit component
  auto direction = [&](const Eigen::MatrixXcd& Av) -> Eigen::VectorXcd {
    Eigen::MatrixXcd AK = V * Av * Vinv;
    Eigen::VectorXcd r(m);
    for (int a = 0; a < m; ++a)
      r(a) = (AK.transpose() * H0 * C0[static_cast<size_t>(a)].conjugate() * H0inv).trace();
    return drop_unit(gramT_inv * r);
  };

  // A sample h^end-orthogonal to F carries no tangent direction (on SG-unfolded
  // one of the two nilpotent lines is); such draws are replaced by a fresh one.
  std::vector<NilpotentSample> samples(static_cast<size_t>(count));
  std::vector<double> sect(static_cast<size_t>(count), 0.0);
  std::vector<Eigen::VectorXcd> dirs(static_cast<size_t>(count));
  std::vector<char> ok(static_cast<size_t>(count), 0);
  std::vector<std::exception_ptr> err(static_cast<size_t>(count));
  parallel_for(count, [&](int i) {
    try {
      for (int salt = 0; salt < 64; ++salt) {
        NilpotentSample smp = draw_sample(b.n, seed, i, salt);
        Eigen::VectorXcd X = direction(smp.A);
        double n2 = ev.norm2(X);
        if (!(n2 > 1e-12)) continue;
        X /= std::sqrt(n2);
        samples[static_cast<size_t>(i)] = smp;
        dirs[static_cast<size_t>(i)] = X;
        sect[static_cast<size_t>(i)] = ev.direct(X);
        ok[static_cast<size_t>(i)] = 1;
        return;
      }
    } catch (...) {
      err[static_cast<size_t>(i)] = std::current_exception();
    }
  });
  for (auto& e : err)
    if (e) std::rethrow_exception(e);

  K0Estimate est;
  bool first = true;
  for (int i = 0; i < count; ++i) {
    if (!ok[static_cast<size_t>(i)]) continue;
    const auto& s = samples[static_cast<size_t>(i)];
    if (first) est.rho_min = est.rho_max = s.rho;
    est.rho_min = std::min(est.rho_min, s.rho);
    est.rho_max = std::max(est.rho_max, s.rho);
    double v = sect[static_cast<size_t>(i)];
    ++est.evaluated;
    if (first || v > est.sect_max) {
      est.sect_max = v;
      est.argmax = dirs[static_cast<size_t>(i)];
      est.argmax_index = i;
    }
    if (first || v < est.sect_min) est.sect_min = v;
    first = false;
  }
  if (est.evaluated == 0) throw Error(ErrorKind::ProjectionFailed, "no sample gave a direction in the maximal ideal");

  if (refine) {
    // random hill climb inside the maximal ideal
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd X = est.argmax;
    double best = est.sect_max, step = 0.5;
    for (int it = 0; it < 400 && step > 1e-8; ++it) {
      Eigen::VectorXcd Y(m);
      for (int i = 0; i < m; ++i) Y(i) = cd(nd(rng), nd(rng));
      Eigen::VectorXcd Z = X + step * drop_unit(Y);
      double n2 = ev.norm2(Z);
      if (!(n2 > 1e-20)) continue;
      Z /= std::sqrt(n2);
      double v = ev.direct(Z);
      if (v > best) {
        best = v;
        X = Z;
        step *= 1.5;
      } else {
        step *= 0.9;
      }
    }
    if (best > est.sect_max) {
      est.sect_max = best;
      est.argmax = X;
      est.argmax_index = -1;
    }
    est.refined = true;
  }

  est.k0 = -est.sect_max;
  est.histogram.assign(10, 0);
  const double width = est.sect_max - est.sect_min;
  for (int i = 0; i < count; ++i) {
    if (!ok[static_cast<size_t>(i)]) continue;
    int bin = width > 0.0 ? static_cast<int>((sect[static_cast<size_t>(i)] - est.sect_min) / width * 10.0) : 0;
    est.histogram[static_cast<size_t>(std::clamp(bin, 0, 9))]++;
  }
  return est;
}

double bound_k1(double k0, double lambda0) {
  if (!(k0 > 0.0) || !(lambda0 > 0.0)) throw Error(ErrorKind::NonPositiveInput, "k0 and lambda0 must be positive");
  return k0 * lambda0 * lambda0;
}

}  // namespace cvforge
