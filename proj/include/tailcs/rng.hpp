#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "tailcs/types.hpp"

namespace tailcs {

// Counter-based generator: every draw is a pure function of (seed, counter),
// so the same inputs reproduce the same stream independent of draw order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const {
    std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // (0, 1]
  double uniform_open(std::uint64_t counter) const {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal, one value per index (Box-Muller on counters 2k, 2k+1).
  double normal(std::uint64_t index) const {
    const double u1 = uniform_open(2 * index);
    const double u2 = uniform(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t counter, std::uint64_t n) const {
    return bits(counter) % n;
  }

 private:
  std::uint64_t seed_;
};

// Derives an independent stream seed; used to split one seed into
// (matrix, support, value) streams and per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return CounterRng(seed).bits(stream);
}

inline MatrixX<double> gaussian_matrix(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("gaussian_matrix: dimensions must be positive");
  CounterRng rng(seed);
  MatrixX<double> a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      a(i, j) = rng.normal(static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) +
                           static_cast<std::uint64_t>(j));
  return a;
}

// d x n oversampled DFT with unit-norm columns: entry (j,k) = exp(2*pi*i*j*k/n)/sqrt(d).
inline MatrixX<Complex> fourier_frame(Index d, Index n) {
  if (d < 1 || d > n) throw std::invalid_argument("fourier_frame: need 1 <= d <= n");
  MatrixX<Complex> f(d, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index j = 0; j < d; ++j)
    for (Index k = 0; k < n; ++k) {
      const Index phase = (j * k) % n;
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(n);
      f(j, k) = std::polar(scale, angle);
    }
  return f;
}

// Uniformly random size-s subset of [0, n), sorted (partial Fisher-Yates).
inline SupportSet random_support(Index n, Index s, std::uint64_t seed) {
  if (s < 0 || s > n) throw std::invalid_argument("random_support: s out of range");
  CounterRng rng(seed);
  std::vector<Index> pool(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < s; ++i) {
    const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(i),
                                                     static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  std::vector<Index> idx(pool.begin(), pool.begin() + s);
  std::sort(idx.begin(), idx.end());
  return SupportSet(std::move(idx), n);
}

}  // namespace tailcs
