#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <doctest.h>

#include "supchain/montecarlo.hpp"
#include "supchain/report.hpp"

using namespace supchain;

namespace {

ExperimentConfig indicator_config() {
  ExperimentConfig config;
  config.model = IndicatorModel{0.1};
  config.params = ChainingParams{1.0, 2.0, 0.5, 0.5};
  config.eps_list = {0.2, 0.1};
  config.grid_exponent = 9;
  config.replicates = 1000;
  config.sup_mode = SupMode::absolute;
  config.theory = false;
  config.threads = 1;
  return config;
}

ExperimentConfig cpp_config() {
  ExperimentConfig config;
  CppModel model;
  model.intensity = PowerLawIntensity{0.5, 1.0};
  model.kernel = KernelSpec::linear();
  model.eps = 0.1;
  config.model = model;
  config.params = ChainingParams{1.0, 2.0, 0.5, 0.5};
  config.eps_list = {0.2, 0.1};
  config.grid_exponent = 8;
  config.replicates = 1500;
  config.sup_mode = SupMode::centered;
  config.theory = true;
  config.threads = 1;
  return config;
}

}  // namespace

TEST_CASE("experiment config validation") {
  ExperimentConfig good = cpp_config();
  CHECK_NOTHROW(good.validate());

  ExperimentConfig bad = good;
  bad.eps_list = {};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.eps_list = {0.1, 0.2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.eps_list = {0.2, 0.2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.eps_list = {1.0, 0.5};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.grid_exponent = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.grid_exponent = 23;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  // Indicator runs must resolve the moving window: spacing <= eps / 2.
  ExperimentConfig ind = indicator_config();
  CHECK_NOTHROW(ind.validate());
  ind.grid_exponent = 4;  // spacing 1/16 > 0.05
  CHECK_THROWS_AS(ind.validate(), std::invalid_argument);
  ind.grid_exponent = 5;  // spacing 1/32 < 0.05
  CHECK_NOTHROW(ind.validate());

  bad = good;
  bad.replicates = 99;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.t0 = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.n_max = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = good;
  bad.threads = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  // Theory off skips the chaining hypotheses but still needs a threshold.
  ExperimentConfig loose = indicator_config();
  loose.params.alpha = -1.0;
  CHECK_NOTHROW(loose.validate());
  loose.params.delta = 0.0;
  CHECK_THROWS_AS(loose.validate(), std::invalid_argument);

  // Theory on enforces the full parameter hypotheses.
  ExperimentConfig strict = cpp_config();
  strict.params.gamma = 1.5;  // gamma >= alpha
  CHECK_THROWS_AS(strict.validate(), std::domain_error);
}

TEST_CASE("wilson interval") {
  BinomialCI mid = wilson_interval(30, 100);
  CHECK_EQ(mid.p_hat, doctest::Approx(0.3));
  CHECK_GT(mid.lo, 0.0);
  CHECK_LT(mid.lo, 0.3);
  CHECK_GT(mid.hi, 0.3);
  CHECK_LT(mid.hi, 1.0);

  // Boundary counts pin the matching endpoint exactly.
  BinomialCI none = wilson_interval(0, 500);
  CHECK_EQ(none.p_hat, 0.0);
  CHECK_EQ(none.lo, 0.0);
  CHECK_GT(none.hi, 0.0);
  BinomialCI all = wilson_interval(500, 500);
  CHECK_EQ(all.p_hat, 1.0);
  CHECK_EQ(all.hi, 1.0);
  CHECK_LT(all.lo, 1.0);
  CHECK_GT(all.lo, 0.98);

  // Wider z gives a wider interval.
  BinomialCI narrow = wilson_interval(30, 100, 1.0);
  BinomialCI wide = wilson_interval(30, 100, 3.0);
  CHECK_GT(narrow.lo, wide.lo);
  CHECK_LT(narrow.hi, wide.hi);

  CHECK_THROWS_AS(wilson_interval(-1, 100), std::domain_error);
  CHECK_THROWS_AS(wilson_interval(5, 0), std::domain_error);
  CHECK_THROWS_AS(wilson_interval(101, 100), std::domain_error);
  CHECK_THROWS_AS(wilson_interval(5, 100, 0.0), std::domain_error);
}

TEST_CASE("wilson interval coverage calibration") {
  // Frequentist coverage of the nominal 95% interval at p = 0.3, n = 200.
  std::mt19937_64 rng(7u);
  std::binomial_distribution<long> binom(200, 0.3);
  int covered = 0;
  int experiments = 2000;
  for (int i = 0; i < experiments; ++i) {
    long hits = binom(rng);
    BinomialCI ci = wilson_interval(hits, 200);
    if (ci.lo <= 0.3 && 0.3 <= ci.hi) ++covered;
  }
  double coverage = static_cast<double>(covered) / experiments;
  CHECK_GT(coverage, 0.93);
  CHECK_LT(coverage, 0.99);
}

TEST_CASE("indicator grid supremum is one surely") {
  ExperimentConfig config = indicator_config();
  config.eps_list = {0.05};
  config.grid_exponent = 11;
  SupEstimate absolute = estimate_sup_prob(config, 0.05);
  CHECK_EQ(absolute.exceed_count, config.replicates);
  CHECK_EQ(absolute.ci.p_hat, 1.0);
  CHECK_EQ(absolute.ci.hi, 1.0);
  CHECK_EQ(absolute.threshold, doctest::Approx(0.5));

  config.sup_mode = SupMode::centered;
  SupEstimate centered = estimate_sup_prob(config, 0.05);
  CHECK_EQ(centered.ci.p_hat, 1.0);
  CHECK_EQ(centered.threshold, doctest::Approx(0.25));
}

TEST_CASE("degenerate process never exceeds") {
  ExperimentConfig config = cpp_config();
  CppModel model = std::get<CppModel>(config.model);
  model.tau.fixed_tau = 0.1;  // empties the jump band at eps = 0.1
  config.model = model;
  config.eps_list = {0.1};
  SupEstimate estimate = estimate_sup_prob(config, 0.1);
  CHECK_EQ(estimate.exceed_count, 0);
  CHECK_EQ(estimate.ci.p_hat, 0.0);
  CHECK_EQ(estimate.ci.lo, 0.0);
}

TEST_CASE("sup estimates are deterministic and thread invariant") {
  ExperimentConfig config = cpp_config();
  config.params.delta = 0.2;
  config.eps_list = {0.1};
  config.replicates = 2000;

  SupEstimate one = estimate_sup_prob(config, 0.1);
  SupEstimate two = estimate_sup_prob(config, 0.1);
  CHECK_EQ(one.exceed_count, two.exceed_count);

  // An interior probability, so the test has teeth.
  CHECK_GT(one.exceed_count, 0);
  CHECK_LT(one.exceed_count, config.replicates);

  ExperimentConfig parallel = config;
  parallel.threads = 4;
  SupEstimate four = estimate_sup_prob(parallel, 0.1);
  CHECK_EQ(four.exceed_count, one.exceed_count);

  ExperimentConfig reseeded = config;
  reseeded.seed = config.seed + 1;
  SupEstimate other = estimate_sup_prob(reseeded, 0.1);
  CHECK_NE(other.exceed_count, one.exceed_count);
}

TEST_CASE("per path supremum grows with grid refinement and threshold tightening") {
  // The replicate stream depends only on (seed, eps, mode), so the same jump
  // sets underlie both runs and domination holds count by count.
  ExperimentConfig coarse = cpp_config();
  coarse.params.delta = 0.2;
  coarse.eps_list = {0.1};
  coarse.replicates = 1500;
  ExperimentConfig fine = coarse;
  fine.grid_exponent = coarse.grid_exponent + 2;
  SupEstimate a = estimate_sup_prob(coarse, 0.1);
  SupEstimate b = estimate_sup_prob(fine, 0.1);
  CHECK_GE(b.exceed_count, a.exceed_count);

  ExperimentConfig tight = coarse;
  tight.params.delta = 0.3;
  SupEstimate c = estimate_sup_prob(tight, 0.1);
  CHECK_LE(c.exceed_count, a.exceed_count);
}

TEST_CASE("sweep rows carry the analytic bound inputs") {
  ExperimentConfig config = cpp_config();
  SupExperimentResult result = run_sweep(config);
  REQUIRE_EQ(result.rows.size(), 2);

  PartitionOptions options;
  options.t0 = config.t0;
  PartitionFamily family(IndexSpace::unit_interval(), config.n_max, options);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    CHECK_EQ(row.eps, config.eps_list[i]);
    CHECK_EQ(row.replicates, config.replicates);
    CHECK_EQ(row.seed, config.seed);
    CHECK_EQ(row.b_eps, doctest::Approx(model_b_eps(config.model, row.eps)).epsilon(1e-15));
    CHECK_EQ(row.var_t0,
             doctest::Approx(model_var_t0(config.model, row.eps, config.t0)).epsilon(1e-15));
    TailBoundReport report = theory_report(config, family, row.eps);
    CHECK_EQ(row.entropy_sum, doctest::Approx(report.entropy.value()).epsilon(1e-15));
    CHECK_EQ(row.constant, doctest::Approx(report.constant).epsilon(1e-15));
    CHECK_EQ(row.theory_bound, doctest::Approx(report.chain_bound).epsilon(1e-15));
    CHECK_EQ(row.theory_bound_raw, doctest::Approx(report.chain_raw).epsilon(1e-15));
    CHECK_GE(row.ci_low, 0.0);
    CHECK_LE(row.ci_high, 1.0);
    CHECK_GE(row.empirical_prob, row.ci_low);
    CHECK_LE(row.empirical_prob, row.ci_high);
  }

  // Scales shrink along the sweep and the empirical tail goes with them.
  CHECK_GT(result.rows[0].empirical_prob, result.rows[1].empirical_prob);

  REQUIRE_EQ(result.checks.size(), 3);
  CHECK_EQ(result.checks[0].name, "bound_domination");
  CHECK_EQ(result.checks[1].name, "vanishing_limit");
  CHECK_EQ(result.checks[2].name, "monotone_trend");
  for (const SweepCheck& check : result.checks) {
    CAPTURE(check.name);
    CHECK(check.pass);
  }
  CHECK(result.pass);
}

TEST_CASE("absolute mode adds the centering term to the raw bound") {
  ExperimentConfig config = cpp_config();
  config.sup_mode = SupMode::absolute;
  config.eps_list = {0.1};
  config.replicates = 500;
  SupExperimentResult result = run_sweep(config);
  REQUIRE_EQ(result.rows.size(), 1);
  PartitionOptions options;
  options.t0 = config.t0;
  PartitionFamily family(IndexSpace::unit_interval(), config.n_max, options);
  TailBoundReport report = theory_report(config, family, 0.1);
  CHECK_EQ(result.rows[0].theory_bound, doctest::Approx(report.total_bound).epsilon(1e-15));
  double raw = report.chain_raw + 4.0 * report.var_t0 / (report.delta * report.delta);
  CHECK_EQ(result.rows[0].theory_bound_raw, doctest::Approx(raw).epsilon(1e-15));
}

TEST_CASE("indicator sweep records the failed vanishing check") {
  ExperimentConfig config = indicator_config();
  SupExperimentResult result = run_sweep(config);
  REQUIRE_EQ(result.rows.size(), 2);
  for (const SweepRow& row : result.rows) {
    CHECK_EQ(row.empirical_prob, 1.0);
    CHECK(std::isnan(row.theory_bound));
    CHECK(std::isnan(row.entropy_sum));
  }
  // No theory, so only the two empirical checks run; a supremum that never
  // shrinks fails the vanishing check while staying monotone.
  REQUIRE_EQ(result.checks.size(), 2);
  CHECK_EQ(result.checks[0].name, "vanishing_limit");
  CHECK_FALSE(result.checks[0].pass);
  CHECK_EQ(result.checks[1].name, "monotone_trend");
  CHECK(result.checks[1].pass);
  CHECK_FALSE(result.pass);
}

TEST_CASE("sweep failures name the offending scale") {
  ExperimentConfig config = cpp_config();
  CppModel model = std::get<CppModel>(config.model);
  model.eps = 0.5;
  model.tau.fixed_tau = 0.3;  // valid at eps = 0.5, impossible at eps = 0.25
  config.model = model;
  config.eps_list = {0.5, 0.25};
  bool threw = false;
  try {
    run_sweep(config);
  } catch (const std::runtime_error& e) {
    threw = true;
    CHECK_NE(std::string(e.what()).find("eps = 0.25"), std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("moment audit validates simulated increments") {
  ExperimentConfig config = indicator_config();
  config.replicates = 40000;
  std::vector<std::pair<double, double>> pairs = {
      {0.5, 0.5}, {0.2, 0.25}, {0.1, 0.4}, {0.95, 0.97}};
  std::vector<MomentAuditRow> rows = moment_audit(config, 0.1, pairs);
  REQUIRE_EQ(rows.size(), 4);

  CHECK_EQ(rows[0].mc_moment, 0.0);  // s == t is exact, not statistical
  CHECK(rows[0].ok);

  CHECK_EQ(rows[1].closed_form, doctest::Approx(0.1));
  CHECK_EQ(rows[1].bound, doctest::Approx(0.1));
  CHECK_EQ(rows[2].closed_form, doctest::Approx(0.2));
  CHECK_EQ(rows[3].closed_form, doctest::Approx(0.02));
  for (const MomentAuditRow& row : rows) {
    CAPTURE(row.s);
    CAPTURE(row.t);
    CHECK(row.ok);
    if (row.s != row.t) {
      CHECK_LT(std::abs(row.mc_moment - row.closed_form), 4.0 * row.std_error);
      CHECK_LE(row.mc_moment, row.bound + 4.0 * row.std_error);
    }
  }

  CHECK_THROWS_AS(moment_audit(config, 0.1, {{-0.1, 0.5}}), std::invalid_argument);
}

TEST_CASE("moment audit against the stochastic integral closed form") {
  ExperimentConfig config = cpp_config();
  config.replicates = 20000;
  std::vector<std::pair<double, double>> pairs = {{0.2, 0.7}, {0.4, 0.4}, {0.9, 0.1}};
  std::vector<MomentAuditRow> rows = moment_audit(config, 0.1, pairs);
  REQUIRE_EQ(rows.size(), 3);
  CppModel model = std::get<CppModel>(config.model).with_eps(0.1);
  double truncated_band =
      model.intensity.second_moment_band(model.select_tau(), 0.1);
  CHECK_EQ(rows[0].closed_form, doctest::Approx(0.25 * truncated_band).epsilon(1e-12));
  CHECK_EQ(rows[0].bound, doctest::Approx(model.b_eps() * 0.25).epsilon(1e-12));
  CHECK_EQ(rows[1].mc_moment, 0.0);
  for (const MomentAuditRow& row : rows) {
    CAPTURE(row.s);
    CAPTURE(row.t);
    CHECK(row.ok);
  }

  // No closed increment form for the hoelder kernel: the bound alone gates.
  ExperimentConfig rough = config;
  CppModel hoe = std::get<CppModel>(config.model);
  hoe.kernel = KernelSpec::hoelder(0.75);
  rough.model = hoe;
  rough.replicates = 5000;
  std::vector<MomentAuditRow> rough_rows = moment_audit(rough, 0.1, {{0.3, 0.6}});
  REQUIRE_EQ(rough_rows.size(), 1);
  CHECK(std::isnan(rough_rows[0].closed_form));
  CHECK(rough_rows[0].ok);
}

TEST_CASE("random pair audit stays within bounds") {
  ExperimentConfig config = indicator_config();
  config.replicates = 30000;
  std::mt19937_64 rng(91u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 8; ++i) pairs.emplace_back(unif(rng), unif(rng));
  for (const MomentAuditRow& row : moment_audit(config, 0.2, pairs)) {
    CAPTURE(row.s);
    CAPTURE(row.t);
    CHECK(row.ok);
  }
}

TEST_CASE("point estimators track their exact targets") {
  ExperimentConfig ind = indicator_config();
  ind.replicates = 30000;
  MeanEstimate second = mc_second_moment(ind, 0.1, 0.5);
  CHECK_GT(second.std_error, 0.0);
  CHECK_LT(std::abs(second.mean - 0.1), 5.0 * second.std_error);

  ExperimentConfig cpp = cpp_config();
  cpp.replicates = 20000;
  CppModel model = std::get<CppModel>(cpp.model).with_eps(0.1);
  MeanEstimate var = mc_second_moment(cpp, 0.1, 0.7);
  CHECK_LT(std::abs(var.mean - model.truncated_var_t0(0.7)), 5.0 * var.std_error);

  MeanEstimate ecf = mc_char_function(cpp, 0.1, 0.7, 5.0);
  CHECK_LT(std::abs(ecf.mean - model.char_function(0.7, 5.0)), 5.0 * ecf.std_error);

  MeanEstimate inc = mc_increment_moment(cpp, 0.1, 0.2, 0.7);
  double exact = model.kernel.increment_mean_square(0.2, 0.7) *
                 model.intensity.second_moment_band(model.select_tau(), 0.1);
  CHECK_LT(std::abs(inc.mean - exact), 5.0 * inc.std_error);

  // Deterministic reduction: identical runs agree bit for bit.
  MeanEstimate rerun = mc_increment_moment(cpp, 0.1, 0.2, 0.7);
  CHECK_EQ(inc.mean, rerun.mean);
  CHECK_EQ(inc.std_error, rerun.std_error);

  ExperimentConfig parallel = cpp;
  parallel.threads = 4;
  MeanEstimate threaded = mc_increment_moment(parallel, 0.1, 0.2, 0.7);
  CHECK_EQ(inc.mean, threaded.mean);
}

TEST_CASE("csv round trip preserves rows") {
  ExperimentConfig config = cpp_config();
  config.replicates = 500;
  SupExperimentResult result = run_sweep(config);
  std::string text = sweep_csv(result.rows);
  CHECK_EQ(text.substr(0, text.find('\n')), std::string(kSweepCsvHeader));
  std::vector<SweepRow> parsed = parse_sweep_csv(text);
  REQUIRE_EQ(parsed.size(), result.rows.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK_EQ(parsed[i].eps, result.rows[i].eps);
    CHECK_EQ(parsed[i].b_eps, result.rows[i].b_eps);
    CHECK_EQ(parsed[i].var_t0, result.rows[i].var_t0);
    CHECK_EQ(parsed[i].entropy_sum, result.rows[i].entropy_sum);
    CHECK_EQ(parsed[i].constant, result.rows[i].constant);
    CHECK_EQ(parsed[i].theory_bound, result.rows[i].theory_bound);
    CHECK_EQ(parsed[i].empirical_prob, result.rows[i].empirical_prob);
    CHECK_EQ(parsed[i].ci_low, result.rows[i].ci_low);
    CHECK_EQ(parsed[i].ci_high, result.rows[i].ci_high);
    CHECK_EQ(parsed[i].replicates, result.rows[i].replicates);
    CHECK_EQ(parsed[i].seed, result.rows[i].seed);
  }
  CHECK_EQ(sweep_csv(parsed), text);

  CHECK_THROWS_AS(parse_sweep_csv("nonsense\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_sweep_csv(std::string(kSweepCsvHeader) + "\n1,2,3\n"),
                  std::runtime_error);
}

TEST_CASE("format double survives round trips") {
  for (double x : {0.1, 1.0 / 3.0, 2.0421637021355784e-2, 1e-300, 0.0, 16089.685530573028}) {
    CAPTURE(x);
    CHECK_EQ(std::stod(format_double(x)), x);
  }
}
