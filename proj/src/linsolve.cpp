#include "cvforge/linsolve.hpp"

#include <algorithm>

namespace cvforge {

namespace {

template <class Mat, class Vec, class Out>
void lsq_impl(const Mat& J, const Vec& rhs, double rank_tol, Out& out) {
  const Eigen::Index n = J.cols();
  out.x = Vec::Zero(n);
  out.rank = 0;
  if (n == 0) {
    out.nullspace = Mat(0, 0);
    out.singular = Eigen::VectorXd();
    return;
  }
  // Reduce tall systems to a square triangular factor first; singular values
  // and right singular vectors are unchanged.
  Mat R;
  Vec b;
  if (J.rows() > n) {
    Eigen::HouseholderQR<Mat> qr(J);
    Mat QtB = qr.householderQ().adjoint() * rhs;
    R = qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
    b = QtB.topRows(n);
  } else {
    R = J;
    b = rhs;
  }
  Eigen::BDCSVD<Mat> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * std::max(smax, 1e-300) && s(i) > 0) ++r;
  out.rank = r;
  Vec ub = svd.matrixU().leftCols(r).adjoint() * b;
  for (int i = 0; i < r; ++i) ub(i) /= s(i);
  out.x = svd.matrixV().leftCols(r) * ub;
  out.nullspace = svd.matrixV().rightCols(n - r);
  out.singular = s;
}

}  // namespace

LeastSquares solve_least_squares(const Eigen::MatrixXcd& J, const Eigen::VectorXcd& rhs, double rank_tol) {
  LeastSquares out;
  lsq_impl(J, rhs, rank_tol, out);
  return out;
}

RealLeastSquares solve_least_squares(const Eigen::MatrixXd& J, const Eigen::VectorXd& rhs, double rank_tol) {
  RealLeastSquares out;
  lsq_impl(J, rhs, rank_tol, out);
  return out;
}

void append_coefficients(const MatrixJet& M, int lo, int hi, std::vector<cd>& out) {
  if (hi < lo) return;
  const JetContext& ctx = M.context();
  std::vector<Key> keys;
  for (Key k : monomials_up_to(ctx, hi))
    if (key_degree(k) >= lo) keys.push_back(k);
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      for (Key k : keys) out.push_back(M(i, j).coeff(k));
}

Eigen::VectorXcd to_vector(const std::vector<cd>& v) {
  Eigen::VectorXcd r(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = v[i];
  return r;
}

}  // namespace cvforge
