#pragma once

#include <algorithm>
#include <numeric>

#include "tailcs/solver.hpp"

namespace tailcs {

enum class TailMinTermination { Converged, MaxIter, SupportCycle };

inline const char* to_string(TailMinTermination t) {
  switch (t) {
    case TailMinTermination::Converged: return "converged";
    case TailMinTermination::MaxIter: return "max_iter";
    case TailMinTermination::SupportCycle: return "support_cycle";
  }
  return "unknown";
}

template <typename Scalar>
struct TailMinTrace {
  std::vector<VecX<Scalar>> iterates;
  std::vector<SupportSet> supports;
  TailMinTermination terminated_by = TailMinTermination::MaxIter;
};

template <typename Scalar>
struct TailMinResult {
  SolverReport<Scalar> report;
  TailMinTrace<Scalar> trace;
  int total_inner_iterations = 0;
};

// Indices of the s entries of largest modulus, ties toward the smaller index.
template <typename Scalar>
SupportSet top_s_support(const VecX<Scalar>& x, Index s) {
  if (s < 1 || s > x.size()) throw std::invalid_argument("top_s_support: s out of range");
  std::vector<Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&x](Index a, Index b) { return std::abs(x(a)) > std::abs(x(b)); });
  std::vector<Index> idx(order.begin(), order.begin() + s);
  std::sort(idx.begin(), idx.end());
  return SupportSet(std::move(idx), x.size());
}

// Sum of moduli outside the s largest entries.
template <typename Scalar>
double tail_l1(const VecX<Scalar>& x, Index s) {
  if (s < 0 || s > x.size()) throw std::invalid_argument("tail_l1: s out of range");
  std::vector<double> mags(static_cast<std::size_t>(x.size()));
  for (Index j = 0; j < x.size(); ++j) mags[static_cast<std::size_t>(j)] = std::abs(x(j));
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double tail = 0.0;
  for (std::size_t k = static_cast<std::size_t>(s); k < mags.size(); ++k) tail += mags[k];
  return tail;
}

namespace detail {

// Shared outer loop. SolveFn maps a 0/1 weight vector (0 on the estimated
// support) to a SolverReport; SupportFn maps an iterate to the coefficient
// vector whose top-s entries define the next support.
template <typename Scalar, typename SolveFn, typename SupportFn>
TailMinResult<Scalar> tail_min_loop(Index weight_len, Index s, double eps_outer, int max_outer,
                                    SolveFn&& solve_with_weights, SupportFn&& coefficients) {
  if (eps_outer <= 0) throw std::invalid_argument("tail_min: eps_outer must be positive");
  if (max_outer < 1) throw std::invalid_argument("tail_min: max_outer must be >= 1");

  TailMinResult<Scalar> out;
  auto& tr = out.trace;

  VecX<double> weights = VecX<double>::Ones(weight_len);
  SolverReport<Scalar> rep = solve_with_weights(weights);
  out.total_inner_iterations = rep.iterations;

  auto record = [&](const SolverReport<Scalar>& r) {
    tr.iterates.push_back(r.solution);
    tr.supports.push_back(top_s_support<Scalar>(coefficients(r.solution), s));
  };
  record(rep);

  SolverReport<Scalar> best = rep;
  double best_tail = tail_l1<Scalar>(coefficients(rep.solution), s);

  std::vector<SupportSet> seen{tr.supports.back()};
  tr.terminated_by = TailMinTermination::MaxIter;

  for (int k = 2; k <= max_outer; ++k) {
    weights.setOnes();
    for (Index j : tr.supports.back().indices()) weights(j) = 0.0;
    SolverReport<Scalar> next = solve_with_weights(weights);
    out.total_inner_iterations += next.iterations;
    const double diff = (next.solution - rep.solution).norm();
    rep = std::move(next);
    record(rep);

    const double tail = tail_l1<Scalar>(coefficients(rep.solution), s);
    if (tail < best_tail) {
      best_tail = tail;
      best = rep;
    }

    if (diff < eps_outer) {
      tr.terminated_by = TailMinTermination::Converged;
      out.report = rep;
      return out;
    }
    const SupportSet& current = tr.supports.back();
    if (std::find(seen.begin(), seen.end(), current) != seen.end()) {
      tr.terminated_by = TailMinTermination::SupportCycle;
      out.report = best;
      return out;
    }
    seen.push_back(current);
  }
  out.report = rep;
  return out;
}

}  // namespace detail

// Step 1 solves plain basis pursuit; every later step re-estimates the support
// from the previous iterate and minimizes the l1 mass off that support.
template <typename Scalar>
TailMinResult<Scalar> tail_min_synthesis(const MatrixX<Scalar>& a, const VecX<Scalar>& b, Index s,
                                         const SolverOptions& opts = {}, double eps_outer = 1e-8,
                                         int max_outer = 50) {
  if (s < 1 || s >= a.cols()) throw std::invalid_argument("tail_min_synthesis: need 1 <= s < N");
  AffineProjector<Scalar> proj(a);
  return detail::tail_min_loop<Scalar>(
      a.cols(), s, eps_outer, max_outer,
      [&](const VecX<double>& w) { return solve_weighted_l1<Scalar>(proj, b, w, opts); },
      [](const VecX<Scalar>& x) { return x; });
}

template <typename Scalar>
TailMinResult<Scalar> tail_min_analysis(const MatrixX<Scalar>& a, const MatrixX<Scalar>& d,
                                        const VecX<Scalar>& b, Index s,
                                        const SolverOptions& opts = {}, double eps_outer = 1e-8,
                                        int max_outer = 50) {
  if (s < 1 || s >= d.cols()) throw std::invalid_argument("tail_min_analysis: need 1 <= s < D.cols");
  AnalysisOperator<Scalar> op(a, d);
  return detail::tail_min_loop<Scalar>(
      d.cols(), s, eps_outer, max_outer,
      [&](const VecX<double>& w) { return solve_weighted_l1_analysis<Scalar>(op, b, w, opts); },
      [&d](const VecX<Scalar>& f) { return VecX<Scalar>(d.adjoint() * f); });
}

}  // namespace tailcs
