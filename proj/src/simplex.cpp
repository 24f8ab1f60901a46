#include "tailcs/simplex.hpp"

#include <cmath>
#include <limits>

namespace tailcs {

namespace {

// Full-tableau pivoting. Bland's rule: entering column is the lowest index
// with negative reduced cost, leaving row breaks ratio ties by lowest basic
// index. Terminates on any LP without anti-cycling heuristics.
class Tableau {
 public:
  Tableau(const MatrixX<double>& a, const VecX<double>& b, double pivot_tol)
      : m_(a.rows()), n_(a.cols()), tol_(pivot_tol) {
    t_ = MatrixX<double>::Zero(m_, n_ + m_ + 1);
    t_.topLeftCorner(m_, n_) = a;
    t_.col(n_ + m_) = b;
    for (Index i = 0; i < m_; ++i) {
      if (t_(i, n_ + m_) < 0) t_.row(i) = -t_.row(i);
      t_(i, n_ + i) = 1.0;  // artificial
    }
    basis_.resize(m_);
    for (Index i = 0; i < m_; ++i) basis_[i] = n_ + i;
    blocked_.assign(n_ + m_, false);
  }

  // Runs phase 1; returns the residual infeasibility.
  double phase1(int& iterations) {
    VecX<double> cost = VecX<double>::Zero(n_ + m_);
    cost.tail(m_).setOnes();
    run(cost, iterations);
    double infeas = 0.0;
    for (Index i = 0; i < m_; ++i)
      if (basis_[i] >= n_) infeas += t_(i, n_ + m_);
    drive_out_artificials();
    for (Index j = n_; j < n_ + m_; ++j) blocked_[j] = true;
    return infeas;
  }

  bool phase2(const VecX<double>& c, int& iterations) {
    VecX<double> cost = VecX<double>::Zero(n_ + m_);
    cost.head(n_) = c;
    return run(cost, iterations);
  }

  VecX<double> primal() const {
    VecX<double> x = VecX<double>::Zero(n_);
    for (Index i = 0; i < m_; ++i)
      if (basis_[i] < n_) x(basis_[i]) = t_(i, n_ + m_);
    return x;
  }

 private:
  // Returns false on unboundedness.
  bool run(const VecX<double>& cost, int& iterations) {
    VecX<double> reduced = cost;
    for (Index i = 0; i < m_; ++i)
      if (cost(basis_[i]) != 0.0) reduced -= cost(basis_[i]) * t_.row(i).head(n_ + m_).transpose();

    for (;;) {
      Index enter = -1;
      for (Index j = 0; j < n_ + m_; ++j) {
        if (blocked_[j]) continue;
        if (reduced(j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      double best_ratio = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m_; ++i) {
        const double piv = t_(i, enter);
        if (piv > tol_) best_ratio = std::min(best_ratio, t_(i, n_ + m_) / piv);
      }
      if (!std::isfinite(best_ratio)) return false;
      Index leave = -1;
      for (Index i = 0; i < m_; ++i) {
        const double piv = t_(i, enter);
        if (piv > tol_ && t_(i, n_ + m_) / piv <= best_ratio + tol_ &&
            (leave < 0 || basis_[i] < basis_[leave]))
          leave = i;
      }

      pivot(leave, enter);
      const double factor = reduced(enter);
      if (factor != 0.0) reduced -= factor * t_.row(leave).head(n_ + m_).transpose();
      ++iterations;
    }
  }

  void pivot(Index row, Index col) {
    t_.row(row) /= t_(row, col);
    for (Index i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double factor = t_(i, col);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(row);
    }
    basis_[row] = col;
  }

  // Pivots artificial variables out of the basis where a structural column is
  // available; rows with none are redundant and keep a zero-valued artificial.
  void drive_out_artificials() {
    for (Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      Index col = -1;
      for (Index j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > tol_) {
          col = j;
          break;
        }
      }
      if (col >= 0) pivot(i, col);
    }
  }

  Index m_, n_;
  double tol_;
  MatrixX<double> t_;
  std::vector<Index> basis_;
  std::vector<bool> blocked_;
};

}  // namespace

LpResult solve_standard_form_lp(const MatrixX<double>& a, const VecX<double>& b,
                                const VecX<double>& c, double pivot_tol) {
  if (a.rows() != b.size() || a.cols() != c.size())
    throw std::invalid_argument("solve_standard_form_lp: dimension mismatch");
  LpResult res;
  Tableau tab(a, b, pivot_tol);
  const double infeas = tab.phase1(res.iterations);
  if (infeas > 1e-8 * (1.0 + b.cwiseAbs().sum())) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  if (!tab.phase2(c, res.iterations)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.x = tab.primal();
  res.objective = c.dot(res.x);
  return res;
}

SolverReport<double> simplex_bp(const MatrixX<double>& a, const VecX<double>& b) {
  if (a.rows() != b.size())
    throw std::invalid_argument("simplex_bp: rhs length does not match rows");
  if (a.rows() > 32 || a.cols() > 64)
    throw SizeLimitError("simplex_bp: problem exceeds the m<=32, N<=64 guard");

  const Index m = a.rows();
  const Index n = a.cols();
  MatrixX<double> split(m, 2 * n);
  split.leftCols(n) = a;
  split.rightCols(n) = -a;
  const VecX<double> cost = VecX<double>::Ones(2 * n);

  LpResult lp = solve_standard_form_lp(split, b, cost);
  if (lp.status == LpStatus::Infeasible)
    throw InfeasibleError("simplex_bp: b is numerically outside range(A)");
  if (lp.status == LpStatus::Unbounded)
    throw std::logic_error("simplex_bp: unbounded split LP");

  SolverReport<double> rep;
  rep.solution = lp.x.head(n) - lp.x.tail(n);
  rep.objective = lp.objective;
  rep.primal_residual = (a * rep.solution - b).norm();
  rep.dual_residual = 0.0;
  rep.iterations = lp.iterations;
  rep.converged = true;
  return rep;
}

}  // namespace tailcs
