#include "tailcs/diagnostics.hpp"

#include <limits>

#include "tailcs/simplex.hpp"

namespace tailcs {

namespace {

constexpr double kLpMargin = 1e-9;

// max a^T c  subject to  ||R c||_1 <= 1, c free. The caller guarantees
// rank(R) equals the number of unknowns, so the program is bounded.
//
// Standard form uses c = c+ - c-, per-row magnitudes t_i with two inequality
// slacks each, and one slack on the l1 budget.
double max_functional_over_kernel_ball(const MatrixX<double>& r, const VecX<double>& a) {
  const Index q = r.rows();
  const Index k = r.cols();
  const Index ncols = 2 * k + 3 * q + 1;
  const Index nrows = 2 * q + 1;

  MatrixX<double> lp = MatrixX<double>::Zero(nrows, ncols);
  VecX<double> rhs = VecX<double>::Zero(nrows);
  VecX<double> cost = VecX<double>::Zero(ncols);

  for (Index i = 0; i < q; ++i) {
    lp.row(i).segment(0, k) = r.row(i);
    lp.row(i).segment(k, k) = -r.row(i);
    lp(i, 2 * k + i) = -1.0;          // -t_i
    lp(i, 2 * k + q + i) = 1.0;       // slack of (Rc)_i <= t_i
    lp.row(q + i).segment(0, k) = -r.row(i);
    lp.row(q + i).segment(k, k) = r.row(i);
    lp(q + i, 2 * k + i) = -1.0;
    lp(q + i, 2 * k + 2 * q + i) = 1.0;  // slack of -(Rc)_i <= t_i
  }
  lp.row(2 * q).segment(2 * k, q).setOnes();
  lp(2 * q, 2 * k + 3 * q) = 1.0;  // budget slack
  rhs(2 * q) = 1.0;

  cost.segment(0, k) = -a;
  cost.segment(k, k) = a;

  LpResult res = solve_standard_form_lp(lp, rhs, cost);
  if (res.status == LpStatus::Unbounded) return std::numeric_limits<double>::infinity();
  if (res.status == LpStatus::Infeasible)
    throw std::logic_error("kernel-ball LP reported infeasible");
  return -res.objective;
}

MatrixX<double> rows_of(const MatrixX<double>& v, const SupportSet& rows) {
  return v(rows.indices(), Eigen::all);
}

bool full_column_rank(const MatrixX<double>& m) {
  if (m.rows() < m.cols()) return false;
  Eigen::ColPivHouseholderQR<MatrixX<double>> qr(m);
  qr.setThreshold(kDefaultRankTol);
  return qr.rank() == m.cols();
}

}  // namespace

bool nsp_holds(const MatrixX<double>& a, const SupportSet& t) {
  if (t.ambient() != a.cols())
    throw std::invalid_argument("nsp_holds: support ambient does not match column count");
  if (t.size() > 20) throw SizeLimitError("nsp_holds: |T| exceeds the sign-pattern guard");

  const MatrixX<double> v = kernel_basis(a);
  if (v.cols() == 0) return true;  // trivial kernel: vacuously true
  if (t.size() == 0) return true;  // ||v_T||_1 = 0 < ||v||_1 for nonzero v

  const MatrixX<double> vc = rows_of(v, t.complement());
  // A nonzero kernel vector vanishing off T makes the strict inequality impossible.
  if (!full_column_rank(vc)) return false;

  const MatrixX<double> vt = rows_of(v, t);
  const Index st = t.size();
  // Sign patterns come in +/- pairs with equal optima; fix the first sign.
  const std::uint64_t patterns = 1ull << (st - 1);
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    VecX<double> sigma(st);
    sigma(0) = 1.0;
    for (Index i = 1; i < st; ++i) sigma(i) = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
    const VecX<double> functional = vt.transpose() * sigma;
    if (max_functional_over_kernel_ball(vc, functional) >= 1.0 - kLpMargin) return false;
  }
  return true;
}

bool recovery_certificate(const MatrixX<double>& a, const SparseSignal<double>& x) {
  if (x.ambient != a.cols())
    throw std::invalid_argument("recovery_certificate: signal ambient does not match columns");
  for (Index k = 0; k < x.values.size(); ++k)
    if (std::abs(x.values(k)) <= 1e-12)
      throw std::invalid_argument("recovery_certificate: signal values must be nonzero");

  const MatrixX<double> v = kernel_basis(a);
  if (v.cols() == 0) return true;  // vacuous quantifier

  const SupportSet& s = x.support;
  const MatrixX<double> vc = rows_of(v, s.complement());
  // Kernel directions supported inside S defeat uniqueness outright.
  if (!full_column_rank(vc)) return false;

  VecX<double> sgn(s.size());
  for (Index k = 0; k < s.size(); ++k) sgn(k) = x.values(k) > 0 ? 1.0 : -1.0;
  const VecX<double> functional = rows_of(v, s).transpose() * sgn;
  // The feasible set is symmetric, so one LP covers both global signs.
  return max_functional_over_kernel_ball(vc, functional) < 1.0 - kLpMargin;
}

FailureWitness construct_bp_failure(const MatrixX<double>& a, Index s, std::uint64_t seed) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (!(2 * s > m && s <= m))
    throw std::invalid_argument("construct_bp_failure: need m/2 < s <= m");
  if (n < m + 1)
    throw std::invalid_argument("construct_bp_failure: need N >= m + 1");

  const SupportSet cols = random_support(n, m + 1, mix_seed(seed, 1));
  const MatrixX<double> sub = submatrix_columns(a, cols);
  const MatrixX<double> ker = kernel_basis(sub);
  if (ker.cols() != 1)
    throw std::invalid_argument(
        "construct_bp_failure: selected columns are not in general position (A not full spark?)");

  VecX<double> v = VecX<double>::Zero(n);
  for (Index k = 0; k <= m; ++k) {
    if (std::abs(ker(k, 0)) <= 1e-10)
      throw std::invalid_argument(
          "construct_bp_failure: degenerate kernel vector (A not full spark?)");
    v(cols.indices()[static_cast<std::size_t>(k)]) = ker(k, 0);
  }

  FailureWitness w;
  w.v = v;
  w.T0 = top_s_support(v, s);
  w.mass_T0 = 0.0;
  for (Index j : w.T0.indices()) w.mass_T0 += std::abs(v(j));
  w.mass_complement = v.cwiseAbs().sum() - w.mass_T0;

  CounterRng rng(mix_seed(seed, 2));
  VecX<double> values(s);
  for (Index k = 0; k < s; ++k) {
    const Index j = w.T0.indices()[static_cast<std::size_t>(k)];
    const double magnitude = 1.0 + rng.uniform(static_cast<std::uint64_t>(k));
    values(k) = v(j) > 0 ? magnitude : -magnitude;
  }
  w.x = SparseSignal<double>{n, w.T0, std::move(values)};
  return w;
}

}  // namespace tailcs
