#include "tailcs/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tailcs/diagnostics.hpp"
#include "tailcs/experiments.hpp"
#include "tailcs/matrix_io.hpp"
#include "tailcs/rng.hpp"
#include "tailcs/simplex.hpp"
#include "tailcs/svg.hpp"
#include "tailcs/tailmin.hpp"

namespace tailcs {

namespace {

using json = nlohmann::ordered_json;

MatrixX<Complex> to_complex(const TaggedMatrix& a) {
  if (is_real(a)) return std::get<MatrixX<double>>(a).cast<Complex>();
  return std::get<MatrixX<Complex>>(a);
}

VecX<Complex> to_complex(const TaggedVec& v) {
  if (std::holds_alternative<VecX<double>>(v))
    return std::get<VecX<double>>(v).cast<Complex>();
  return std::get<VecX<Complex>>(v);
}

bool is_real_vec(const TaggedVec& v) { return std::holds_alternative<VecX<double>>(v); }

VecX<double> require_real_vec(const TaggedVec& v, const std::string& what) {
  if (!is_real_vec(v)) throw std::invalid_argument(what + " must be real-valued");
  return std::get<VecX<double>>(v);
}

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw std::invalid_argument("bad index list: " + text);
    out.push_back(std::stoll(tok));
  }
  return out;
}

std::vector<Index> parse_range(const std::string& text) {
  Index lo = 0, hi = 0, step = 1;
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    return parse_index_list(text);
  }
  const auto c2 = text.find(':', c1 + 1);
  lo = std::stoll(text.substr(0, c1));
  if (c2 == std::string::npos) {
    hi = std::stoll(text.substr(c1 + 1));
  } else {
    hi = std::stoll(text.substr(c1 + 1, c2 - c1 - 1));
    step = std::stoll(text.substr(c2 + 1));
  }
  if (step < 1) throw std::invalid_argument("range step must be >= 1");
  std::vector<Index> out;
  for (Index s = lo; s <= hi; s += step) out.push_back(s);
  if (out.empty()) throw std::invalid_argument("empty range: " + text);
  return out;
}

template <typename Scalar>
void print_report(std::ostream& out, const SolverReport<Scalar>& rep) {
  out << "objective: " << format_scalar(rep.objective) << '\n';
  out << "primal_residual: " << format_scalar(rep.primal_residual) << '\n';
  out << "dual_residual: " << format_scalar(rep.dual_residual) << '\n';
  out << "iterations: " << rep.iterations << '\n';
  out << "converged: " << (rep.converged ? "true" : "false") << '\n';
  out << "solution:\n";
  for (Index j = 0; j < rep.solution.size(); ++j)
    out << format_scalar(rep.solution(j)) << '\n';
}

template <typename Scalar>
json vec_to_json(const VecX<Scalar>& v) {
  json arr = json::array();
  for (Index j = 0; j < v.size(); ++j) {
    if constexpr (std::is_same_v<Scalar, Complex>) {
      arr.push_back(json::array({v(j).real(), v(j).imag()}));
    } else {
      arr.push_back(v(j));
    }
  }
  return arr;
}

template <typename Scalar>
void write_trace(const std::string& path, const TailMinTrace<Scalar>& tr) {
  json j;
  j["terminated_by"] = to_string(tr.terminated_by);
  json iters = json::array();
  for (const auto& it : tr.iterates) iters.push_back(vec_to_json(it));
  j["iterates"] = std::move(iters);
  json sups = json::array();
  for (const auto& sup : tr.supports) {
    json s = json::array();
    for (Index i : sup.indices()) s.push_back(i);
    sups.push_back(std::move(s));
  }
  j["supports"] = std::move(sups);
  std::ofstream os(path);
  if (!os) throw std::invalid_argument("cannot open for writing: " + path);
  os << j.dump(2) << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::invalid_argument("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

struct GenMatrixArgs {
  std::string kind;
  Index m = 0, N = 0, d = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct SolveArgs {
  std::string method;
  std::string input, b, dict, weights;
  double tol = 1e-8;
};

struct TailminArgs {
  std::string input, b, dict, trace;
  Index s = 0;
  double eps_outer = 1e-8;
  int max_outer = 50;
  double tol = 1e-8;
};

struct DiagnoseArgs {
  std::string input, T, x, b;
  Index s = -1;
};

struct FailureArgs {
  Index m = 0, N = 0, s = 0;
  std::uint64_t seed = 0;
};

struct SweepArgs {
  Index m = 0, N = 0, dict_d = 0, dict_N = 0;
  std::string s_range, methods, out, svg, json_path;
  int trials = 200;
  std::uint64_t seed = 0;
  bool fixed_matrix = false;
  bool timing = false;
  double success_tol = 1e-6;
};

int do_gen_matrix(const GenMatrixArgs& a, std::ostream& out) {
  TaggedMatrix mat;
  if (a.kind == "gaussian") {
    mat = gaussian_matrix(a.m, a.N, a.seed);
  } else if (a.kind == "fourier") {
    const Index rows = a.d > 0 ? a.d : a.m;
    mat = fourier_frame(rows, a.N);
  } else {
    throw std::invalid_argument("gen-matrix: --kind must be gaussian or fourier");
  }
  write_matrix_file(a.out, mat);
  out << "wrote " << a.out << " (" << matrix_rows(mat) << "x" << matrix_cols(mat) << " "
      << (is_real(mat) ? "real" : "complex") << ")\n";
  return 0;
}

SolverOptions options_with_tol(double tol) {
  SolverOptions opts;
  opts.abs_tol = tol;
  opts.rel_tol = tol;
  return opts;
}

int do_solve(const SolveArgs& a, std::ostream& out) {
  const TaggedMatrix mat = read_matrix_file(a.input);
  const TaggedVec rhs = read_vector_file(a.b);
  const SolverOptions opts = options_with_tol(a.tol);

  if (a.method == "analysis") {
    if (a.dict.empty()) throw std::invalid_argument("solve: --method analysis requires --dict");
    const TaggedMatrix dict = read_matrix_file(a.dict);
    const MatrixX<Complex> ac = to_complex(mat);
    const MatrixX<Complex> dc = to_complex(dict);
    VecX<double> w = VecX<double>::Ones(dc.cols());
    if (!a.weights.empty()) w = require_real_vec(read_vector_file(a.weights), "weights");
    print_report(out, solve_weighted_l1_analysis<Complex>(ac, dc, to_complex(rhs), w, opts));
    return 0;
  }

  if (a.method != "bp" && a.method != "weighted")
    throw std::invalid_argument("solve: --method must be bp, weighted, or analysis");

  const bool complex_problem = !is_real(mat) || !is_real_vec(rhs);
  const Index n = matrix_cols(mat);
  VecX<double> w = VecX<double>::Ones(n);
  if (a.method == "weighted") {
    if (a.weights.empty()) throw std::invalid_argument("solve: --method weighted requires --weights");
    w = require_real_vec(read_vector_file(a.weights), "weights");
  }
  if (complex_problem) {
    print_report(out, solve_weighted_l1<Complex>(to_complex(mat), to_complex(rhs), w, opts));
  } else {
    print_report(out, solve_weighted_l1<double>(std::get<MatrixX<double>>(mat),
                                                std::get<VecX<double>>(rhs), w, opts));
  }
  return 0;
}

template <typename Scalar>
int report_tailmin(const TailMinResult<Scalar>& res, const std::string& trace_path,
                   std::ostream& out) {
  out << "terminated_by: " << to_string(res.trace.terminated_by) << '\n';
  out << "outer_iterations: " << res.trace.iterates.size() << '\n';
  out << "support: " << res.trace.supports.back().to_string() << '\n';
  print_report(out, res.report);
  if (!trace_path.empty()) write_trace(trace_path, res.trace);
  return 0;
}

int do_tailmin(const TailminArgs& a, std::ostream& out) {
  const TaggedMatrix mat = read_matrix_file(a.input);
  const TaggedVec rhs = read_vector_file(a.b);
  const SolverOptions opts = options_with_tol(a.tol);

  if (!a.dict.empty()) {
    const TaggedMatrix dict = read_matrix_file(a.dict);
    auto res = tail_min_analysis<Complex>(to_complex(mat), to_complex(dict), to_complex(rhs),
                                          a.s, opts, a.eps_outer, a.max_outer);
    return report_tailmin(res, a.trace, out);
  }
  if (is_real(mat) && is_real_vec(rhs)) {
    auto res = tail_min_synthesis<double>(std::get<MatrixX<double>>(mat),
                                          std::get<VecX<double>>(rhs), a.s, opts, a.eps_outer,
                                          a.max_outer);
    return report_tailmin(res, a.trace, out);
  }
  auto res = tail_min_synthesis<Complex>(to_complex(mat), to_complex(rhs), a.s, opts,
                                         a.eps_outer, a.max_outer);
  return report_tailmin(res, a.trace, out);
}

MatrixX<double> require_real_matrix(const TaggedMatrix& a, const std::string& what) {
  if (!is_real(a)) throw std::invalid_argument(what + " requires a real matrix");
  return std::get<MatrixX<double>>(a);
}

int do_diagnose(const std::string& which, const DiagnoseArgs& a, std::ostream& out) {
  const TaggedMatrix mat = read_matrix_file(a.input);

  if (which == "spark") {
    const Index sp = is_real(mat) ? spark(std::get<MatrixX<double>>(mat))
                                  : spark(std::get<MatrixX<Complex>>(mat));
    out << sp << '\n';
    return 0;
  }
  if (which == "full-spark") {
    const bool full = is_real(mat) ? is_full_spark(std::get<MatrixX<double>>(mat))
                                   : is_full_spark(std::get<MatrixX<Complex>>(mat));
    out << (full ? "true" : "false") << '\n';
    return 0;
  }
  if (which == "nsp") {
    if (a.T.empty()) throw std::invalid_argument("diagnose nsp: --T is required");
    const MatrixX<double> m = require_real_matrix(mat, "diagnose nsp");
    const SupportSet t(parse_index_list(a.T), m.cols());
    out << (nsp_holds(m, t) ? "true" : "false") << '\n';
    return 0;
  }
  if (which == "certificate") {
    if (a.x.empty()) throw std::invalid_argument("diagnose certificate: --x is required");
    const MatrixX<double> m = require_real_matrix(mat, "diagnose certificate");
    const VecX<double> x = require_real_vec(read_vector_file(a.x), "signal");
    out << (recovery_certificate(m, SparseSignal<double>::from_dense(x)) ? "true" : "false")
        << '\n';
    return 0;
  }
  if (which == "l0") {
    if (a.b.empty() || a.s < 0)
      throw std::invalid_argument("diagnose l0: --b and --s are required");
    const TaggedVec rhs = read_vector_file(a.b);
    auto print_set = [&out](const auto& set) {
      out << "solutions: " << set.solutions.size() << '\n';
      for (const auto& sig : set.solutions) {
        out << "support=" << sig.support.to_string() << " values=";
        for (Index k = 0; k < sig.values.size(); ++k) {
          if (k > 0) out << ' ';
          out << format_scalar(sig.values(k));
        }
        out << '\n';
      }
      if (!set.rank_deficient_supports.empty())
        out << "skipped_rank_deficient: " << set.rank_deficient_supports.size() << '\n';
    };
    if (is_real(mat) && is_real_vec(rhs)) {
      const MatrixX<double> m = std::get<MatrixX<double>>(mat);
      const VecX<double> b = std::get<VecX<double>>(rhs);
      print_set(l0_bruteforce_solutions<double>(m, b, a.s, 1e-8 * (1.0 + b.norm())));
    } else {
      const MatrixX<Complex> m = to_complex(mat);
      const VecX<Complex> b = to_complex(rhs);
      print_set(l0_bruteforce_solutions<Complex>(m, b, a.s, 1e-8 * (1.0 + b.norm())));
    }
    return 0;
  }
  throw std::invalid_argument("diagnose: unknown check " + which);
}

int do_failure_demo(const FailureArgs& a, std::ostream& out) {
  const MatrixX<double> mat = gaussian_matrix(a.m, a.N, mix_seed(a.seed, 1));
  const FailureWitness w = construct_bp_failure(mat, a.s, mix_seed(a.seed, 2));
  const VecX<double> x = w.x.to_dense();
  const VecX<double> b = mat * x;
  const SolverReport<double> bp = simplex_bp(mat, b);
  const auto [ok, rel] = success<double>(bp.solution, x, 1e-6);

  out << "T0: " << w.T0.to_string() << '\n';
  out << "mass_T0: " << format_scalar(w.mass_T0) << '\n';
  out << "mass_complement: " << format_scalar(w.mass_complement) << '\n';
  out << "mass_ratio: " << format_scalar(w.mass_T0 / w.mass_complement) << '\n';
  out << "x_l1: " << format_scalar(x.cwiseAbs().sum()) << '\n';
  out << "bp_l1: " << format_scalar(bp.objective) << '\n';
  out << "bp_relative_error: " << format_scalar(rel) << '\n';
  out << "bp_recovered: " << (ok ? "true" : "false") << '\n';
  out << "certificate: " << (recovery_certificate(mat, w.x) ? "true" : "false") << '\n';
  return 0;
}

int do_sweep(const SweepArgs& a, std::ostream& out) {
  if ((a.dict_d > 0) != (a.dict_N > 0))
    throw std::invalid_argument("sweep: --dict-d and --dict-N must be given together");

  TrialSpec base;
  base.m = a.m;
  base.N = a.N;
  if (a.dict_d > 0) base.dictionary = FourierDict{a.dict_d, a.dict_N};
  base.seed = a.seed;
  base.success_tol = a.success_tol;
  base.measure_time = a.timing;
  if (a.fixed_matrix) base.matrix_seed_override = mix_seed(a.seed, 0xF17Edull);

  const std::vector<Index> s_values = parse_range(a.s_range);
  std::vector<Method> methods;
  {
    std::stringstream ss(a.methods);
    std::string tok;
    while (std::getline(ss, tok, ',')) methods.push_back(parse_method(tok));
    if (methods.empty()) throw std::invalid_argument("sweep: --methods is empty");
  }

  std::vector<TrialRecord> records;
  const SweepTable table =
      sweep_sparsity(base, s_values, methods, a.trials, a.json_path.empty() ? nullptr : &records);

  write_text_file(a.out, to_csv(table));
  out << "wrote " << a.out << '\n';
  if (!a.svg.empty()) {
    write_text_file(a.svg, svg_success_chart(table));
    out << "wrote " << a.svg << '\n';
  }
  if (!a.json_path.empty()) {
    write_text_file(a.json_path, records_to_json(records) + "\n");
    out << "wrote " << a.json_path << '\n';
  }
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tailcs: sparse recovery with l1 tail minimization"};
  app.require_subcommand(1);

  GenMatrixArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-matrix", "generate a sensing matrix or frame");
  gen_cmd->add_option("--kind", gen.kind, "gaussian|fourier")->required();
  gen_cmd->add_option("--m", gen.m, "rows");
  gen_cmd->add_option("--N", gen.N, "columns")->required();
  gen_cmd->add_option("--d", gen.d, "fourier frame rows (defaults to --m)");
  gen_cmd->add_option("--seed", gen.seed, "rng seed");
  gen_cmd->add_option("--out", gen.out, "output path")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "solve one weighted l1 problem");
  solve_cmd->add_option("--method", solve.method, "bp|weighted|analysis")->required();
  solve_cmd->add_option("--input", solve.input, "matrix file")->required();
  solve_cmd->add_option("--b", solve.b, "rhs vector file")->required();
  solve_cmd->add_option("--dict", solve.dict, "dictionary matrix file");
  solve_cmd->add_option("--weights", solve.weights, "weight vector file");
  solve_cmd->add_option("--tol", solve.tol, "solver tolerance");

  TailminArgs tmin;
  auto* tmin_cmd = app.add_subcommand("tailmin", "run the tail minimization loop");
  tmin_cmd->add_option("--input", tmin.input, "matrix file")->required();
  tmin_cmd->add_option("--b", tmin.b, "rhs vector file")->required();
  tmin_cmd->add_option("--s", tmin.s, "sparsity level")->required();
  tmin_cmd->add_option("--dict", tmin.dict, "dictionary matrix file (analysis form)");
  tmin_cmd->add_option("--eps-outer", tmin.eps_outer, "outer stopping tolerance");
  tmin_cmd->add_option("--max-outer", tmin.max_outer, "outer iteration cap");
  tmin_cmd->add_option("--trace", tmin.trace, "write the iterate trace as JSON");
  tmin_cmd->add_option("--tol", tmin.tol, "inner solver tolerance");

  DiagnoseArgs diag;
  auto* diag_cmd = app.add_subcommand("diagnose", "spark / NSP / certificate / l0 oracles");
  diag_cmd->require_subcommand(1);
  std::vector<CLI::App*> diag_subs;
  for (const char* name : {"spark", "full-spark", "nsp", "certificate", "l0"}) {
    auto* sub = diag_cmd->add_subcommand(name);
    sub->add_option("--input", diag.input, "matrix file")->required();
    sub->add_option("--T", diag.T, "comma-separated support indices");
    sub->add_option("--x", diag.x, "signal vector file");
    sub->add_option("--b", diag.b, "rhs vector file");
    sub->add_option("--s", diag.s, "sparsity bound");
    diag_subs.push_back(sub);
  }

  FailureArgs fail;
  auto* fail_cmd = app.add_subcommand("failure-demo", "construct a basis pursuit failure witness");
  fail_cmd->add_option("--m", fail.m, "rows")->required();
  fail_cmd->add_option("--N", fail.N, "columns")->required();
  fail_cmd->add_option("--s", fail.s, "sparsity level")->required();
  fail_cmd->add_option("--seed", fail.seed, "rng seed");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sparsity sweep");
  sweep_cmd->add_option("--m", sweep.m, "rows")->required();
  sweep_cmd->add_option("--N", sweep.N, "columns")->required();
  sweep_cmd->add_option("--dict-d", sweep.dict_d, "dictionary rows (enables analysis methods)");
  sweep_cmd->add_option("--dict-N", sweep.dict_N, "dictionary columns");
  sweep_cmd->add_option("--s", sweep.s_range, "sparsity grid LO:HI:STEP or list")->required();
  sweep_cmd->add_option("--methods", sweep.methods, "comma list: bp,tailmin,analysis,tailanalysis,l0")
      ->required();
  sweep_cmd->add_option("--trials", sweep.trials, "trials per (s, method) cell");
  sweep_cmd->add_option("--seed", sweep.seed, "base seed");
  sweep_cmd->add_option("--out", sweep.out, "CSV output path")->required();
  sweep_cmd->add_option("--svg", sweep.svg, "optional SVG chart path");
  sweep_cmd->add_option("--json", sweep.json_path, "optional raw trial records (JSON)");
  sweep_cmd->add_option("--success-tol", sweep.success_tol, "relative error threshold");
  sweep_cmd->add_flag("--fixed-matrix", sweep.fixed_matrix, "one matrix for the whole sweep");
  sweep_cmd->add_flag("--timing", sweep.timing,
                      "record wall time per trial (breaks byte reproducibility)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(gen_cmd)) return do_gen_matrix(gen, out);
    if (app.got_subcommand(solve_cmd)) return do_solve(solve, out);
    if (app.got_subcommand(tmin_cmd)) return do_tailmin(tmin, out);
    if (app.got_subcommand(diag_cmd)) {
      const char* names[] = {"spark", "full-spark", "nsp", "certificate", "l0"};
      for (std::size_t i = 0; i < diag_subs.size(); ++i)
        if (diag_cmd->got_subcommand(diag_subs[i])) return do_diagnose(names[i], diag, out);
    }
    if (app.got_subcommand(fail_cmd)) return do_failure_demo(fail, out);
    if (app.got_subcommand(sweep_cmd)) return do_sweep(sweep, out);
  } catch (const SizeLimitError& e) {
    err << "SizeLimit: " << e.what() << '\n';
    return 1;
  } catch (const RankDeficientError& e) {
    err << "RankDeficient: " << e.what() << '\n';
    return 1;
  } catch (const InfeasibleError& e) {
    err << "Infeasible: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace tailcs
