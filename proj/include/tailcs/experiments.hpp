#pragma once

#include <optional>

#include "tailcs/solver.hpp"
#include "tailcs/types.hpp"

namespace tailcs {

enum class Method { BP, TailMin, Analysis, TailAnalysis, L0Oracle };

const char* to_string(Method m);
Method parse_method(const std::string& name);

struct FourierDict {
  Index d = 0;  // rows; must equal the sensing matrix column count
  Index n = 0;  // frame vectors
};

struct OuterOptions {
  double eps_outer = 1e-8;
  int max_outer = 50;
};

struct TrialSpec {
  Index m = 0;
  Index N = 0;
  std::optional<FourierDict> dictionary;
  Index s = 1;
  Method method = Method::BP;
  std::uint64_t seed = 0;
  double success_tol = 1e-6;
  SolverOptions solver_opts;
  OuterOptions outer;
  // Overrides the derived per-trial matrix seed (sweep --fixed-matrix).
  std::optional<std::uint64_t> matrix_seed_override;
  // Wall time is recorded only on request so that records stay bit-exact
  // reproducible by default.
  bool measure_time = false;
};

struct TrialRecord {
  TrialSpec spec;
  bool success = false;
  double relative_error = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;
  std::optional<std::string> error;
};

struct SweepRow {
  Index s = 0;
  Method method = Method::BP;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_iterations = 0.0;
  double mean_wall_ms = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

// relative error ||x_hat - x||/||x||, absolute norm when ||x|| = 0.
template <typename Scalar>
std::pair<bool, double> success(const VecX<Scalar>& x_hat, const VecX<Scalar>& x_true,
                                double tol) {
  if (x_hat.size() != x_true.size())
    throw std::invalid_argument("success: length mismatch");
  const double ref = x_true.norm();
  const double err = ref > 0 ? (x_hat - x_true).norm() / ref : x_hat.norm();
  return {err < tol, err};
}

TrialRecord run_trial(const TrialSpec& spec);

SweepTable sweep_sparsity(const TrialSpec& base, const std::vector<Index>& s_values,
                          const std::vector<Method>& methods, int trials_per_cell,
                          std::vector<TrialRecord>* raw_records = nullptr);

// One header row; floats at 6 significant digits; '\n' newlines.
std::string to_csv(const SweepTable& table);

std::string to_json(const TrialRecord& record);
std::string records_to_json(const std::vector<TrialRecord>& records);

// TAILCS_THREADS caps sweep parallelism (0 or unset = hardware concurrency).
int sweep_thread_count();

}  // namespace tailcs
