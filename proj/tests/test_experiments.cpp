#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tailcs/experiments.hpp"
#include "tailcs/rng.hpp"

using namespace tailcs;

TEST_CASE("success predicate") {
  VecX<double> x(3);
  x << 1, -2, 3;
  {
    const auto [ok, err] = success<double>(x, x, 1e-6);
    CHECK(ok);
    CHECK(err == 0.0);
  }
  {
    // zero-signal convention: absolute norm
    const VecX<double> zero = VecX<double>::Zero(3);
    const auto [ok, err] = success<double>(zero, zero, 1e-6);
    CHECK(ok);
    CHECK(err == 0.0);
    const auto [bad, err2] = success<double>(x, zero, 1e-6);
    CHECK(!bad);
    CHECK(err2 == doctest::Approx(x.norm()));
  }
  {
    const VecX<double> close = 1.0000009 * x;
    const auto [ok, err] = success<double>(close, x, 1e-6);
    CHECK(ok);
    CHECK(err == doctest::Approx(9e-7).epsilon(1e-2));
  }
  VecX<double> shorter(2);
  CHECK_THROWS_AS(success<double>(shorter, x, 1e-6), std::invalid_argument);
}

TEST_CASE("method names round trip") {
  for (Method m : {Method::BP, Method::TailMin, Method::Analysis, Method::TailAnalysis,
                   Method::L0Oracle})
    CHECK(parse_method(to_string(m)) == m);
  CHECK_THROWS_AS(parse_method("nope"), std::invalid_argument);
}

TEST_CASE("run_trial is bit-exact deterministic") {
  TrialSpec spec;
  spec.m = 8;
  spec.N = 16;
  spec.s = 3;
  spec.method = Method::BP;
  spec.seed = 12345;
  const TrialRecord r1 = run_trial(spec);
  const TrialRecord r2 = run_trial(spec);
  CHECK(r1.success == r2.success);
  CHECK(std::memcmp(&r1.relative_error, &r2.relative_error, sizeof(double)) == 0);
  CHECK(r1.iterations == r2.iterations);
  CHECK(r1.wall_ms == 0.0);  // timing off by default keeps records reproducible
}

TEST_CASE("run_trial l0 oracle method") {
  TrialSpec spec;
  spec.m = 8;
  spec.N = 12;
  spec.s = 5;
  spec.method = Method::L0Oracle;
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    spec.seed = seed;
    const TrialRecord rec = run_trial(spec);
    if (rec.success) ++good;
  }
  CHECK(good == 5);  // unique almost everywhere at s < m
}

TEST_CASE("run_trial basis pursuit at low sparsity succeeds") {
  TrialSpec spec;
  spec.m = 64;
  spec.N = 128;
  spec.s = 10;
  spec.method = Method::BP;
  spec.seed = 7;
  const TrialRecord rec = run_trial(spec);
  CHECK(rec.success);
  CHECK(rec.relative_error < 1e-6);
}

TEST_CASE("run_trial analysis methods measure the signal f") {
  TrialSpec spec;
  spec.m = 8;
  spec.N = 16;
  spec.dictionary = FourierDict{16, 32};
  spec.s = 1;
  spec.method = Method::Analysis;
  spec.seed = 3;
  const TrialRecord rec = run_trial(spec);
  CHECK(!rec.error);
  CHECK(std::isfinite(rec.relative_error));
}

TEST_CASE("run_trial rejects invalid specs") {
  TrialSpec spec;
  spec.m = 4;
  spec.N = 8;
  spec.s = 2;
  spec.method = Method::Analysis;  // analysis without a dictionary
  CHECK_THROWS_AS(run_trial(spec), std::invalid_argument);
  spec.method = Method::BP;
  spec.dictionary = FourierDict{4, 16};  // d != N
  CHECK_THROWS_AS(run_trial(spec), std::invalid_argument);
}

TEST_CASE("sweep_sparsity basics") {
  TrialSpec base;
  base.m = 6;
  base.N = 12;
  base.seed = 99;

  SUBCASE("zero trials gives an empty table") {
    const SweepTable t = sweep_sparsity(base, {2, 3}, {Method::BP}, 0);
    CHECK(t.rows.empty());
  }

  SUBCASE("rows ordered by s then method; csv bytes reproducible") {
    const std::vector<Method> methods = {Method::BP, Method::TailMin};
    const SweepTable t1 = sweep_sparsity(base, {3, 2}, methods, 8);
    REQUIRE(t1.rows.size() == 4);
    CHECK(t1.rows[0].s == 2);
    CHECK(t1.rows[0].method == Method::BP);
    CHECK(t1.rows[1].s == 2);
    CHECK(t1.rows[1].method == Method::TailMin);
    CHECK(t1.rows[2].s == 3);
    for (const auto& row : t1.rows) {
      CHECK(row.trials == 8);
      CHECK(row.successes <= row.trials);
      CHECK(row.success_rate == doctest::Approx(double(row.successes) / row.trials));
    }
    const SweepTable t2 = sweep_sparsity(base, {3, 2}, methods, 8);
    CHECK(to_csv(t1) == to_csv(t2));
    CHECK(to_csv(t1).substr(0, 63) ==
          "s,method,trials,successes,success_rate,mean_iterations,mean_w");
  }

  SUBCASE("seed isolation: extending the cell leaves earlier trials unchanged") {
    std::vector<TrialRecord> recs5, recs9;
    sweep_sparsity(base, {3}, {Method::BP}, 5, &recs5);
    sweep_sparsity(base, {3}, {Method::BP}, 9, &recs9);
    REQUIRE(recs5.size() == 5);
    REQUIRE(recs9.size() == 9);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(recs5[i].spec.seed == recs9[i].spec.seed);
      CHECK(recs5[i].relative_error == recs9[i].relative_error);
    }
  }

  SUBCASE("tailmin matches bp below the classical threshold") {
    const SweepTable t = sweep_sparsity(base, {2}, {Method::BP, Method::TailMin}, 30);
    REQUIRE(t.rows.size() == 2);
    CHECK(std::abs(t.rows[0].success_rate - t.rows[1].success_rate) <= 0.02);
  }
}

TEST_CASE("trial record json mirrors field names") {
  TrialSpec spec;
  spec.m = 4;
  spec.N = 8;
  spec.s = 2;
  spec.method = Method::BP;
  spec.seed = 5;
  const TrialRecord rec = run_trial(spec);
  const std::string j = to_json(rec);
  for (const char* key : {"\"spec\"", "\"m\"", "\"N\"", "\"dictionary\"", "\"s\"", "\"method\"",
                          "\"seed\"", "\"success_tol\"", "\"solver_opts\"", "\"penalty\"",
                          "\"abs_tol\"", "\"rel_tol\"", "\"max_iter\"", "\"outer\"",
                          "\"eps_outer\"", "\"max_outer\"", "\"success\"", "\"relative_error\"",
                          "\"iterations\"", "\"wall_ms\""})
    CHECK(j.find(key) != std::string::npos);
}

TEST_CASE("csv float formatting uses six significant digits") {
  SweepTable t;
  SweepRow row;
  row.s = 16;
  row.method = Method::BP;
  row.trials = 3;
  row.successes = 1;
  row.success_rate = 1.0 / 3.0;
  row.mean_iterations = 1234.5678;
  row.mean_wall_ms = 0.0;
  t.rows.push_back(row);
  CHECK(to_csv(t) ==
        "s,method,trials,successes,success_rate,mean_iterations,mean_wall_ms\n"
        "16,bp,3,1,0.333333,1234.57,0\n");
}
