#pragma once

#include "tailcs/solver.hpp"
#include "tailcs/types.hpp"

namespace tailcs {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  VecX<double> x;
  double objective = 0.0;
  int iterations = 0;
};

// Two-phase dense simplex with Bland's rule for
//   min c^T x  s.t.  Ax = b, x >= 0.
LpResult solve_standard_form_lp(const MatrixX<double>& a, const VecX<double>& b,
                                const VecX<double>& c, double pivot_tol = 1e-9);

// Exact basis pursuit oracle: min ||x||_1 s.t. Ax = b via the split LP
// min 1^T (p+q), [A -A](p;q) = b, p,q >= 0. Real field, desk-scale only.
SolverReport<double> simplex_bp(const MatrixX<double>& a, const VecX<double>& b);

}  // namespace tailcs
