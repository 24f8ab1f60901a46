#pragma once

#include <Eigen/LU>

#include "tailcs/linalg.hpp"

namespace tailcs {

struct SolverOptions {
  double penalty = 1.0;  // splitting parameter rho
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  int max_iter = 20000;
};

template <typename Scalar>
struct SolverReport {
  VecX<Scalar> solution;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// z * max(1 - kappa/|z|, 0): magnitude shrinks by kappa, phase kept.
template <typename Scalar>
Scalar soft_threshold(Scalar z, double kappa) {
  if (kappa < 0) throw std::invalid_argument("soft_threshold: kappa must be nonnegative");
  const double mag = std::abs(z);
  if (mag <= kappa) return Scalar(0);
  return z * ((mag - kappa) / mag);
}

namespace detail {

inline void check_options(const SolverOptions& opts) {
  if (opts.penalty <= 0 || opts.abs_tol <= 0 || opts.rel_tol <= 0 || opts.max_iter < 1)
    throw std::invalid_argument("SolverOptions: all fields must be positive");
}

inline void check_weights(const VecX<double>& w, Index expected) {
  if (w.size() != expected)
    throw std::invalid_argument("weights length does not match problem size");
  for (Index j = 0; j < w.size(); ++j)
    if (!(w(j) >= 0) || !std::isfinite(w(j)))
      throw std::invalid_argument("weights must be finite and nonnegative");
}

template <typename Scalar>
double weighted_l1(const VecX<Scalar>& x, const VecX<double>& w) {
  double s = 0.0;
  for (Index j = 0; j < x.size(); ++j) s += w(j) * std::abs(x(j));
  return s;
}

// Exact least-squares refit on the active set of the splitting iterate.
// Accepted only when it is feasible and does not worsen the objective, so a
// sparse optimum is returned at machine precision instead of solver tolerance.
template <typename Scalar>
void polish(const MatrixX<Scalar>& a, const VecX<Scalar>& b, const VecX<double>& w,
            const VecX<Scalar>& z, SolverReport<Scalar>& rep) {
  const Index n = a.cols();
  const double zmax = z.size() ? z.cwiseAbs().maxCoeff() : 0.0;
  std::vector<Index> active;
  for (Index j = 0; j < n; ++j)
    if (w(j) == 0.0 || std::abs(z(j)) > 1e-8 * zmax) active.push_back(j);
  if (active.empty() || static_cast<Index>(active.size()) == n) return;

  MatrixX<Scalar> as = a(Eigen::all, active);
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(as, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  VecX<Scalar> y = svd.solve(b);
  VecX<Scalar> candidate = VecX<Scalar>::Zero(n);
  for (std::size_t k = 0; k < active.size(); ++k) candidate(active[k]) = y(static_cast<Index>(k));

  const double feas = (a * candidate - b).norm();
  if (feas > 1e-10 * (1.0 + b.norm())) return;
  const double obj = weighted_l1(candidate, w);
  if (obj > rep.objective + 1e-9 * (1.0 + rep.objective)) return;
  rep.solution = std::move(candidate);
  rep.objective = obj;
}

}  // namespace detail

// min sum_j w_j |x_j|  s.t.  Ax = b, by alternating the weighted l1 prox with
// the affine projection (scaled-dual splitting). Zero weights pass through the
// prox unchanged, which is what makes the tail subproblems a special case.
template <typename Scalar>
SolverReport<Scalar> solve_weighted_l1(const AffineProjector<Scalar>& proj, const VecX<Scalar>& b,
                                       const VecX<double>& weights,
                                       const SolverOptions& opts = {}) {
  detail::check_options(opts);
  const MatrixX<Scalar>& a = proj.matrix();
  if (b.size() != a.rows())
    throw std::invalid_argument("solve_weighted_l1: rhs length does not match rows");
  detail::check_weights(weights, a.cols());

  const Index n = a.cols();
  const double rho = opts.penalty;
  const double sqn = std::sqrt(static_cast<double>(n));

  VecX<Scalar> x = VecX<Scalar>::Zero(n);
  VecX<Scalar> z = VecX<Scalar>::Zero(n);
  VecX<Scalar> z_old = z;
  VecX<Scalar> u = VecX<Scalar>::Zero(n);

  SolverReport<Scalar> rep;
  for (int k = 1; k <= opts.max_iter; ++k) {
    x = proj.project(b, z - u);
    z_old.swap(z);
    for (Index j = 0; j < n; ++j) z(j) = soft_threshold<Scalar>(x(j) + u(j), weights(j) / rho);
    u += x - z;

    const double r_norm = (x - z).norm();
    const double s_norm = rho * (z - z_old).norm();
    const double eps_pri = sqn * opts.abs_tol + opts.rel_tol * std::max(x.norm(), z.norm());
    const double eps_dual = sqn * opts.abs_tol + opts.rel_tol * rho * u.norm();
    rep.iterations = k;
    rep.primal_residual = r_norm;
    rep.dual_residual = s_norm;
    if (r_norm <= eps_pri && s_norm <= eps_dual) {
      rep.converged = true;
      break;
    }
  }
  rep.solution = x;
  rep.objective = detail::weighted_l1(x, weights);
  detail::polish(a, b, weights, z, rep);
  return rep;
}

template <typename Scalar>
SolverReport<Scalar> solve_weighted_l1(const MatrixX<Scalar>& a, const VecX<Scalar>& b,
                                       const VecX<double>& weights,
                                       const SolverOptions& opts = {}) {
  return solve_weighted_l1(AffineProjector<Scalar>(a), b, weights, opts);
}

// KKT operator for the analysis subproblem  min ||D^* f - v||^2  s.t.  Af = b,
// factored once and reused across iterations and outer tail steps.
template <typename Scalar>
class AnalysisOperator {
 public:
  AnalysisOperator(MatrixX<Scalar> a, MatrixX<Scalar> d) : a_(std::move(a)), d_(std::move(d)) {
    if (a_.cols() != d_.rows())
      throw std::invalid_argument("AnalysisOperator: A.cols must equal D.rows");
    const Index dim = d_.rows();
    const Index m = a_.rows();
    MatrixX<Scalar> kkt = MatrixX<Scalar>::Zero(dim + m, dim + m);
    kkt.topLeftCorner(dim, dim) = d_ * d_.adjoint();
    kkt.topRightCorner(dim, m) = a_.adjoint();
    kkt.bottomLeftCorner(m, dim) = a_;
    lu_.compute(kkt);
    if (!lu_.isInvertible())
      throw RankDeficientError("analysis solve: KKT system is numerically singular");
  }

  VecX<Scalar> constrained_fit(const VecX<Scalar>& b, const VecX<Scalar>& v) const {
    const Index dim = d_.rows();
    VecX<Scalar> rhs(dim + a_.rows());
    rhs.head(dim) = d_ * v;
    rhs.tail(a_.rows()) = b;
    return lu_.solve(rhs).head(dim);
  }

  const MatrixX<Scalar>& sensing() const { return a_; }
  const MatrixX<Scalar>& dictionary() const { return d_; }

 private:
  MatrixX<Scalar> a_;
  MatrixX<Scalar> d_;
  Eigen::FullPivLU<MatrixX<Scalar>> lu_;
};

// min sum_j w_j |(D^* f)_j|  s.t.  Af = b. With D = I this reduces to the
// synthesis solver step for step.
template <typename Scalar>
SolverReport<Scalar> solve_weighted_l1_analysis(const AnalysisOperator<Scalar>& op,
                                                const VecX<Scalar>& b,
                                                const VecX<double>& weights,
                                                const SolverOptions& opts = {}) {
  detail::check_options(opts);
  const MatrixX<Scalar>& a = op.sensing();
  const MatrixX<Scalar>& d = op.dictionary();
  if (b.size() != a.rows())
    throw std::invalid_argument("solve_weighted_l1_analysis: rhs length does not match rows");
  detail::check_weights(weights, d.cols());

  const Index p = d.cols();
  const Index dim = d.rows();
  const double rho = opts.penalty;
  const double sqp = std::sqrt(static_cast<double>(p));
  const double sqd = std::sqrt(static_cast<double>(dim));

  VecX<Scalar> f = VecX<Scalar>::Zero(dim);
  VecX<Scalar> z = VecX<Scalar>::Zero(p);
  VecX<Scalar> z_old = z;
  VecX<Scalar> u = VecX<Scalar>::Zero(p);
  VecX<Scalar> df = VecX<Scalar>::Zero(p);

  SolverReport<Scalar> rep;
  for (int k = 1; k <= opts.max_iter; ++k) {
    f = op.constrained_fit(b, z - u);
    df = d.adjoint() * f;
    z_old.swap(z);
    for (Index j = 0; j < p; ++j) z(j) = soft_threshold<Scalar>(df(j) + u(j), weights(j) / rho);
    u += df - z;

    const double r_norm = (df - z).norm();
    const double s_norm = rho * (d * (z - z_old)).norm();
    const double eps_pri = sqp * opts.abs_tol + opts.rel_tol * std::max(df.norm(), z.norm());
    const double eps_dual = sqd * opts.abs_tol + opts.rel_tol * rho * (d * u).norm();
    rep.iterations = k;
    rep.primal_residual = r_norm;
    rep.dual_residual = s_norm;
    if (r_norm <= eps_pri && s_norm <= eps_dual) {
      rep.converged = true;
      break;
    }
  }
  rep.solution = f;
  rep.objective = detail::weighted_l1(df, weights);
  return rep;
}

template <typename Scalar>
SolverReport<Scalar> solve_weighted_l1_analysis(const MatrixX<Scalar>& a, const MatrixX<Scalar>& d,
                                                const VecX<Scalar>& b,
                                                const VecX<double>& weights,
                                                const SolverOptions& opts = {}) {
  return solve_weighted_l1_analysis(AnalysisOperator<Scalar>(a, d), b, weights, opts);
}

}  // namespace tailcs
