#include "tailcs/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include <nlohmann/json.hpp>

#include "tailcs/diagnostics.hpp"
#include "tailcs/rng.hpp"
#include "tailcs/tailmin.hpp"

namespace tailcs {

namespace {

using json = nlohmann::ordered_json;

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int method_id(Method m) { return static_cast<int>(m) + 1; }

void validate(const TrialSpec& spec) {
  if (spec.m < 1 || spec.N < 1) throw std::invalid_argument("TrialSpec: dimensions must be positive");
  if (spec.s < 1) throw std::invalid_argument("TrialSpec: s must be >= 1");
  if (!(spec.success_tol > 0)) throw std::invalid_argument("TrialSpec: success_tol must be positive");
  const bool needs_dict = spec.method == Method::Analysis || spec.method == Method::TailAnalysis;
  if (needs_dict && !spec.dictionary)
    throw std::invalid_argument("TrialSpec: analysis methods require a dictionary");
  if (spec.dictionary && spec.dictionary->d != spec.N)
    throw std::invalid_argument("TrialSpec: dictionary rows must equal N (the signal dimension)");
  const Index signal_dim = spec.dictionary ? spec.dictionary->n : spec.N;
  if (spec.s > signal_dim) throw std::invalid_argument("TrialSpec: s exceeds the signal dimension");
}

VecX<double> sparse_signal_values(const SupportSet& support, Index n, std::uint64_t seed) {
  CounterRng rng(seed);
  VecX<double> x = VecX<double>::Zero(n);
  for (Index k = 0; k < support.size(); ++k) {
    double v = rng.normal(static_cast<std::uint64_t>(k));
    // Resample the measure-zero exact zero so the signal stays s-sparse.
    if (v == 0.0) v = rng.normal(static_cast<std::uint64_t>(k) + (1ull << 32));
    x(support.indices()[static_cast<std::size_t>(k)]) = v;
  }
  return x;
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::BP: return "bp";
    case Method::TailMin: return "tailmin";
    case Method::Analysis: return "analysis";
    case Method::TailAnalysis: return "tailanalysis";
    case Method::L0Oracle: return "l0";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "bp") return Method::BP;
  if (name == "tailmin") return Method::TailMin;
  if (name == "analysis") return Method::Analysis;
  if (name == "tailanalysis") return Method::TailAnalysis;
  if (name == "l0") return Method::L0Oracle;
  throw std::invalid_argument("unknown method: " + name);
}

TrialRecord run_trial(const TrialSpec& spec) {
  validate(spec);
  TrialRecord rec;
  rec.spec = spec;

  const std::uint64_t matrix_seed =
      spec.matrix_seed_override ? *spec.matrix_seed_override : mix_seed(spec.seed, 1);
  const std::uint64_t support_seed = mix_seed(spec.seed, 2);
  const std::uint64_t value_seed = mix_seed(spec.seed, 3);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const MatrixX<double> a = gaussian_matrix(spec.m, spec.N, matrix_seed);
    const Index signal_dim = spec.dictionary ? spec.dictionary->n : spec.N;
    const SupportSet support = random_support(signal_dim, spec.s, support_seed);
    const VecX<double> x = sparse_signal_values(support, signal_dim, value_seed);

    switch (spec.method) {
      case Method::BP: {
        const VecX<double> b = a * x;
        auto rep = solve_weighted_l1<double>(a, b, VecX<double>::Ones(spec.N), spec.solver_opts);
        std::tie(rec.success, rec.relative_error) = success<double>(rep.solution, x, spec.success_tol);
        rec.iterations = rep.iterations;
        break;
      }
      case Method::TailMin: {
        const VecX<double> b = a * x;
        auto res = tail_min_synthesis<double>(a, b, spec.s, spec.solver_opts,
                                              spec.outer.eps_outer, spec.outer.max_outer);
        std::tie(rec.success, rec.relative_error) =
            success<double>(res.report.solution, x, spec.success_tol);
        rec.iterations = res.total_inner_iterations;
        break;
      }
      case Method::L0Oracle: {
        const VecX<double> b = a * x;
        const double tol = 1e-8 * (1.0 + b.norm());
        auto set = l0_bruteforce_solutions<double>(a, b, spec.s, tol);
        if (set.solutions.size() == 1) {
          std::tie(rec.success, rec.relative_error) =
              success<double>(set.solutions[0].to_dense(), x, spec.success_tol);
        } else {
          rec.success = false;
          rec.relative_error = std::numeric_limits<double>::infinity();
        }
        rec.iterations = static_cast<int>(set.solutions.size());
        break;
      }
      case Method::Analysis:
      case Method::TailAnalysis: {
        const MatrixX<Complex> d = fourier_frame(spec.dictionary->d, spec.dictionary->n);
        const MatrixX<Complex> ac = a.cast<Complex>();
        const VecX<Complex> f = d * x.cast<Complex>();
        const VecX<Complex> b = ac * f;
        if (spec.method == Method::Analysis) {
          auto rep = solve_weighted_l1_analysis<Complex>(
              ac, d, b, VecX<double>::Ones(spec.dictionary->n), spec.solver_opts);
          std::tie(rec.success, rec.relative_error) =
              success<Complex>(rep.solution, f, spec.success_tol);
          rec.iterations = rep.iterations;
        } else {
          auto res = tail_min_analysis<Complex>(ac, d, b, spec.s, spec.solver_opts,
                                                spec.outer.eps_outer, spec.outer.max_outer);
          std::tie(rec.success, rec.relative_error) =
              success<Complex>(res.report.solution, f, spec.success_tol);
          rec.iterations = res.total_inner_iterations;
        }
        break;
      }
    }
  } catch (const std::exception& e) {
    rec.success = false;
    rec.relative_error = std::numeric_limits<double>::infinity();
    rec.error = e.what();
  }
  if (spec.measure_time) {
    const auto t1 = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  return rec;
}

int sweep_thread_count() {
  int threads = 0;
  if (const char* env = std::getenv("TAILCS_THREADS")) threads = std::atoi(env);
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(threads, 1);
}

SweepTable sweep_sparsity(const TrialSpec& base, const std::vector<Index>& s_values,
                          const std::vector<Method>& methods, int trials_per_cell,
                          std::vector<TrialRecord>* raw_records) {
  if (trials_per_cell < 0) throw std::invalid_argument("sweep_sparsity: negative trial count");
  std::vector<Index> s_sorted = s_values;
  std::sort(s_sorted.begin(), s_sorted.end());
  s_sorted.erase(std::unique(s_sorted.begin(), s_sorted.end()), s_sorted.end());

  SweepTable table;
  if (trials_per_cell == 0 || s_sorted.empty() || methods.empty()) return table;

  struct Cell {
    Index s;
    Method method;
  };
  std::vector<Cell> cells;
  for (Index s : s_sorted)
    for (Method m : methods) cells.push_back({s, m});

  // Fail fast on malformed cells; computational failures inside a trial are
  // recorded per record instead of aborting the sweep.
  for (const Cell& cell : cells) {
    TrialSpec probe = base;
    probe.s = cell.s;
    probe.method = cell.method;
    validate(probe);
  }

  const std::size_t total = cells.size() * static_cast<std::size_t>(trials_per_cell);
  std::vector<TrialRecord> records(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      const Cell& cell = cells[task / static_cast<std::size_t>(trials_per_cell)];
      const int trial_index = static_cast<int>(task % static_cast<std::size_t>(trials_per_cell));
      TrialSpec spec = base;
      spec.s = cell.s;
      spec.method = cell.method;
      spec.seed = mix_seed(mix_seed(mix_seed(base.seed, static_cast<std::uint64_t>(cell.s)),
                                    static_cast<std::uint64_t>(method_id(cell.method))),
                           static_cast<std::uint64_t>(trial_index));
      records[task] = run_trial(spec);
    }
  };

  const int nthreads = std::min<int>(sweep_thread_count(), static_cast<int>(total));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    SweepRow row;
    row.s = cells[c].s;
    row.method = cells[c].method;
    row.trials = trials_per_cell;
    double iter_sum = 0.0;
    double wall_sum = 0.0;
    for (int i = 0; i < trials_per_cell; ++i) {
      const TrialRecord& rec = records[c * static_cast<std::size_t>(trials_per_cell) +
                                       static_cast<std::size_t>(i)];
      if (rec.success) ++row.successes;
      iter_sum += rec.iterations;
      wall_sum += rec.wall_ms;
    }
    row.success_rate = static_cast<double>(row.successes) / trials_per_cell;
    row.mean_iterations = iter_sum / trials_per_cell;
    row.mean_wall_ms = wall_sum / trials_per_cell;
    table.rows.push_back(row);
  }

  if (raw_records) *raw_records = std::move(records);
  return table;
}

std::string to_csv(const SweepTable& table) {
  std::string out = "s,method,trials,successes,success_rate,mean_iterations,mean_wall_ms\n";
  for (const SweepRow& row : table.rows) {
    out += std::to_string(row.s) + ',' + to_string(row.method) + ',' +
           std::to_string(row.trials) + ',' + std::to_string(row.successes) + ',' +
           fmt6(row.success_rate) + ',' + fmt6(row.mean_iterations) + ',' +
           fmt6(row.mean_wall_ms) + '\n';
  }
  return out;
}

namespace {

json spec_to_json(const TrialSpec& spec) {
  json j;
  j["m"] = spec.m;
  j["N"] = spec.N;
  if (spec.dictionary) {
    j["dictionary"] = json{{"d", spec.dictionary->d}, {"n", spec.dictionary->n}};
  } else {
    j["dictionary"] = nullptr;
  }
  j["s"] = spec.s;
  j["method"] = to_string(spec.method);
  j["seed"] = spec.seed;
  j["success_tol"] = spec.success_tol;
  j["solver_opts"] = json{{"penalty", spec.solver_opts.penalty},
                          {"abs_tol", spec.solver_opts.abs_tol},
                          {"rel_tol", spec.solver_opts.rel_tol},
                          {"max_iter", spec.solver_opts.max_iter}};
  j["outer"] = json{{"eps_outer", spec.outer.eps_outer}, {"max_outer", spec.outer.max_outer}};
  return j;
}

json record_to_json(const TrialRecord& rec) {
  json j;
  j["spec"] = spec_to_json(rec.spec);
  j["success"] = rec.success;
  if (std::isfinite(rec.relative_error)) {
    j["relative_error"] = rec.relative_error;
  } else {
    j["relative_error"] = nullptr;
  }
  j["iterations"] = rec.iterations;
  j["wall_ms"] = rec.wall_ms;
  if (rec.error) j["error"] = *rec.error;
  return j;
}

}  // namespace

std::string to_json(const TrialRecord& record) { return record_to_json(record).dump(2); }

std::string records_to_json(const std::vector<TrialRecord>& records) {
  json arr = json::array();
  for (const TrialRecord& rec : records) arr.push_back(record_to_json(rec));
  return arr.dump(2);
}

}  // namespace tailcs
