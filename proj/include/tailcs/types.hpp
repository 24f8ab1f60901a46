#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tailcs {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// A factor product (or the matrix itself) lacks the rank the routine needs.
struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A combinatorial guard was exceeded (subset enumeration, simplex size cap).
struct SizeLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The right-hand side is numerically outside the range of the constraint matrix.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Strictly increasing index set inside an ambient dimension.
class SupportSet {
 public:
  SupportSet() = default;

  SupportSet(std::vector<Index> indices, Index ambient)
      : indices_(std::move(indices)), ambient_(ambient) {
    if (ambient_ < 0) throw std::invalid_argument("SupportSet: negative ambient dimension");
    Index prev = -1;
    for (Index i : indices_) {
      if (i <= prev) throw std::invalid_argument("SupportSet: indices must be strictly increasing");
      if (i >= ambient_) throw std::invalid_argument("SupportSet: index out of ambient range");
      prev = i;
    }
  }

  static SupportSet full(Index ambient) {
    std::vector<Index> idx(static_cast<std::size_t>(ambient));
    for (Index i = 0; i < ambient; ++i) idx[static_cast<std::size_t>(i)] = i;
    return SupportSet(std::move(idx), ambient);
  }

  Index size() const { return static_cast<Index>(indices_.size()); }
  Index ambient() const { return ambient_; }
  const std::vector<Index>& indices() const { return indices_; }

  bool contains(Index i) const {
    return std::binary_search(indices_.begin(), indices_.end(), i);
  }

  SupportSet complement() const {
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(ambient_ - size()));
    std::size_t k = 0;
    for (Index i = 0; i < ambient_; ++i) {
      if (k < indices_.size() && indices_[k] == i) {
        ++k;
      } else {
        out.push_back(i);
      }
    }
    return SupportSet(std::move(out), ambient_);
  }

  bool operator==(const SupportSet& other) const {
    return ambient_ == other.ambient_ && indices_ == other.indices_;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t k = 0; k < indices_.size(); ++k) {
      if (k > 0) s += ',';
      s += std::to_string(indices_[k]);
    }
    return s;
  }

 private:
  std::vector<Index> indices_;
  Index ambient_ = 0;
};

}  // namespace tailcs
