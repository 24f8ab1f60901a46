#pragma once

#include <Eigen/SVD>

#include "tailcs/types.hpp"

namespace tailcs {

inline constexpr double kDefaultRankTol = 1e-10;

template <typename Scalar>
Index numerical_rank(const MatrixX<Scalar>& a, double tol = kDefaultRankTol) {
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double smax = sv(0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  return rank;
}

template <typename Scalar>
MatrixX<Scalar> submatrix_columns(const MatrixX<Scalar>& a, const SupportSet& t) {
  if (t.ambient() != a.cols())
    throw std::invalid_argument("submatrix_columns: support ambient does not match column count");
  return a(Eigen::all, t.indices());
}

template <typename Scalar>
struct LeastSquaresResult {
  VecX<Scalar> x;
  double residual_norm = 0.0;
};

template <typename Scalar>
LeastSquaresResult<Scalar> least_squares(const MatrixX<Scalar>& a, const VecX<Scalar>& b,
                                         double tol = kDefaultRankTol) {
  if (a.rows() != b.size())
    throw std::invalid_argument("least_squares: row count does not match rhs length");
  if (a.cols() > a.rows())
    throw RankDeficientError("least_squares: more columns than rows");
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= tol * sv(0))
    throw RankDeficientError("least_squares: matrix is numerically rank deficient");
  LeastSquaresResult<Scalar> out;
  out.x = svd.solve(b);
  out.residual_norm = (a * out.x - b).norm();
  return out;
}

// Orthonormal basis of the numerical null space (right singular vectors whose
// singular value is <= tol * sigma_max). Column count = cols - numerical rank.
template <typename Scalar>
MatrixX<Scalar> kernel_basis(const MatrixX<Scalar>& a, double tol = kDefaultRankTol) {
  if (a.size() == 0) throw std::invalid_argument("kernel_basis: empty matrix");
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

// Euclidean projection onto {x : Ax = b}, with the Gram factorization cached
// so repeated projections against the same A reuse it.
template <typename Scalar>
class AffineProjector {
 public:
  explicit AffineProjector(MatrixX<Scalar> a, double tol = kDefaultRankTol) : a_(std::move(a)) {
    if (a_.size() == 0) throw std::invalid_argument("AffineProjector: empty matrix");
    Eigen::JacobiSVD<MatrixX<Scalar>> svd(a_);
    const auto& sv = svd.singularValues();
    if (a_.rows() > a_.cols() || sv(sv.size() - 1) <= tol * sv(0))
      throw RankDeficientError("affine_project: AA* is numerically singular");
    llt_.compute(a_ * a_.adjoint());
    if (llt_.info() != Eigen::Success)
      throw RankDeficientError("affine_project: Gram factorization failed");
  }

  VecX<Scalar> project(const VecX<Scalar>& b, const VecX<Scalar>& x0) const {
    if (b.size() != a_.rows() || x0.size() != a_.cols())
      throw std::invalid_argument("affine_project: dimension mismatch");
    return x0 - a_.adjoint() * llt_.solve(a_ * x0 - b);
  }

  const MatrixX<Scalar>& matrix() const { return a_; }

 private:
  MatrixX<Scalar> a_;
  Eigen::LLT<MatrixX<Scalar>> llt_;
};

template <typename Scalar>
VecX<Scalar> affine_project(const MatrixX<Scalar>& a, const VecX<Scalar>& b,
                            const VecX<Scalar>& x0,
                            const AffineProjector<Scalar>* cache = nullptr) {
  if (cache) return cache->project(b, x0);
  return AffineProjector<Scalar>(a).project(b, x0);
}

}  // namespace tailcs
