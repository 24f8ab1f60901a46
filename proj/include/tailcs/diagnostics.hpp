#pragma once

#include <Eigen/QR>

#include "tailcs/linalg.hpp"
#include "tailcs/rng.hpp"
#include "tailcs/tailmin.hpp"

namespace tailcs {

template <typename Scalar>
struct SparseSignal {
  Index ambient = 0;
  SupportSet support;
  VecX<Scalar> values;

  VecX<Scalar> to_dense() const {
    VecX<Scalar> x = VecX<Scalar>::Zero(ambient);
    for (Index k = 0; k < support.size(); ++k) x(support.indices()[static_cast<std::size_t>(k)]) = values(k);
    return x;
  }

  static SparseSignal from_dense(const VecX<Scalar>& x, double zero_tol = 1e-12) {
    SparseSignal s;
    s.ambient = x.size();
    std::vector<Index> idx;
    std::vector<Scalar> vals;
    for (Index j = 0; j < x.size(); ++j) {
      if (std::abs(x(j)) > zero_tol) {
        idx.push_back(j);
        vals.push_back(x(j));
      }
    }
    s.support = SupportSet(std::move(idx), x.size());
    s.values = Eigen::Map<const VecX<Scalar>>(vals.data(), static_cast<Index>(vals.size()));
    return s;
  }
};

template <typename Scalar>
struct L0SolutionSet {
  std::vector<SparseSignal<Scalar>> solutions;
  Index s_bound = 0;
  double residual_tol = 0.0;
  // Supports skipped because the column submatrix was numerically rank deficient.
  std::vector<SupportSet> rank_deficient_supports;
};

struct FailureWitness {
  SparseSignal<double> x;
  VecX<double> v;  // kernel vector of A
  SupportSet T0;
  double mass_T0 = 0.0;
  double mass_complement = 0.0;
};

inline constexpr Index kSparkSizeLimit = 24;
inline constexpr std::uint64_t kL0EnumerationCap = 1000000;

// C(n, k) clamped at cap+1 to avoid overflow.
inline std::uint64_t binomial_capped(Index n, Index k, std::uint64_t cap) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (Index i = 0; i < k; ++i) {
    r = r * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
    if (r > cap) return cap + 1;
  }
  return r;
}

namespace detail {

// Visits size-k subsets of [0, n) in lexicographic order until the visitor
// returns false.
template <typename Visitor>
void for_each_combination(Index n, Index k, Visitor&& visit) {
  if (k < 0 || k > n) return;
  std::vector<Index> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), Index(0));
  for (;;) {
    if (!visit(static_cast<const std::vector<Index>&>(idx))) return;
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

template <typename Scalar>
bool columns_dependent(const MatrixX<Scalar>& a, const std::vector<Index>& cols, double tol) {
  MatrixX<Scalar> sub = a(Eigen::all, cols);
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(sub);
  const auto& sv = svd.singularValues();
  if (static_cast<Index>(cols.size()) > a.rows()) return true;
  return sv(sv.size() - 1) <= tol * sv(0);
}

}  // namespace detail

// Smallest number of linearly dependent columns; cols+1 when the kernel is
// trivial. Enumerates subsets by increasing size, so the cost is exponential
// in the worst case; guarded by size_limit.
template <typename Scalar>
Index spark(const MatrixX<Scalar>& a, Index size_limit = kSparkSizeLimit,
            double tol = kDefaultRankTol) {
  if (a.cols() > size_limit)
    throw SizeLimitError("spark: column count exceeds the enumeration guard");
  const Index rank = numerical_rank(a, tol);
  for (Index k = 1; k <= rank; ++k) {
    bool found = false;
    detail::for_each_combination(a.cols(), k, [&](const std::vector<Index>& t) {
      if (detail::columns_dependent(a, t, tol)) {
        found = true;
        return false;
      }
      return true;
    });
    if (found) return k;
  }
  // No dependent subset of size <= rank: any rank+1 columns are dependent,
  // and rank == cols means the kernel is trivial (sentinel cols+1).
  return rank + 1;
}

// True iff spark(A) = m + 1; equivalently every m-column subset is independent
// (a dependent smaller subset extends to a dependent m-subset).
template <typename Scalar>
bool is_full_spark(const MatrixX<Scalar>& a, Index size_limit = kSparkSizeLimit,
                   double tol = kDefaultRankTol) {
  if (a.rows() > a.cols()) throw std::invalid_argument("is_full_spark: requires m <= N");
  if (a.cols() > size_limit)
    throw SizeLimitError("is_full_spark: column count exceeds the enumeration guard");
  bool full = true;
  detail::for_each_combination(a.cols(), a.rows(), [&](const std::vector<Index>& t) {
    if (detail::columns_dependent(a, t, tol)) {
      full = false;
      return false;
    }
    return true;
  });
  return full;
}

// Enumerates every size-s support, least-squares fits the column submatrix,
// and collects all distinct solutions with residual below tol.
template <typename Scalar>
L0SolutionSet<Scalar> l0_bruteforce_solutions(const MatrixX<Scalar>& a, const VecX<Scalar>& b,
                                              Index s, double tol) {
  if (a.rows() != b.size())
    throw std::invalid_argument("l0_bruteforce_solutions: rhs length does not match rows");
  if (s < 0 || s > a.cols())
    throw std::invalid_argument("l0_bruteforce_solutions: s out of range");
  if (binomial_capped(a.cols(), s, kL0EnumerationCap) > kL0EnumerationCap)
    throw SizeLimitError("l0_bruteforce_solutions: C(N, s) exceeds the enumeration guard");

  L0SolutionSet<Scalar> out;
  out.s_bound = s;
  out.residual_tol = tol;

  const Index n = a.cols();
  std::vector<VecX<Scalar>> dense_admitted;

  auto admit = [&](const VecX<Scalar>& z) {
    SparseSignal<Scalar> sig = SparseSignal<Scalar>::from_dense(z, 1e-9);
    VecX<Scalar> canonical = sig.to_dense();
    for (const auto& seen : dense_admitted)
      if ((seen - canonical).cwiseAbs().maxCoeff() <= 1e-9) return;
    dense_admitted.push_back(std::move(canonical));
    out.solutions.push_back(std::move(sig));
  };

  if (s == 0) {
    if (b.norm() <= tol) admit(VecX<Scalar>::Zero(n));
    return out;
  }

  detail::for_each_combination(n, s, [&](const std::vector<Index>& t) {
    MatrixX<Scalar> sub = a(Eigen::all, t);
    Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(sub);
    qr.setThreshold(kDefaultRankTol);
    if (qr.rank() < s) {
      out.rank_deficient_supports.emplace_back(t, n);
      return true;
    }
    VecX<Scalar> y = qr.solve(b);
    if ((sub * y - b).norm() <= tol) {
      VecX<Scalar> z = VecX<Scalar>::Zero(n);
      for (std::size_t k = 0; k < t.size(); ++k) z(t[k]) = y(static_cast<Index>(k));
      admit(z);
    }
    return true;
  });

  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const SparseSignal<Scalar>& lhs, const SparseSignal<Scalar>& rhs) {
              return lhs.support.indices() < rhs.support.indices();
            });
  return out;
}

// Real-field sign-pattern checks (exhaustive LPs over the kernel).
bool nsp_holds(const MatrixX<double>& a, const SupportSet& t);
bool recovery_certificate(const MatrixX<double>& a, const SparseSignal<double>& x);
FailureWitness construct_bp_failure(const MatrixX<double>& a, Index s, std::uint64_t seed);

}  // namespace tailcs
