#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "supchain/chaining.hpp"
#include "supchain/processes.hpp"
#include "supchain/rng.hpp"

namespace supchain {

using ModelSpec = std::variant<IndicatorModel, CppModel>;

enum class SupMode {
  centered,  // sup_t |X_t - X_t0| against threshold delta / 2
  absolute,  // sup_t |X_t| against threshold delta
};

// Full description of one Monte Carlo experiment over a list of scales.
struct ExperimentConfig {
  ModelSpec model;        // eps inside is a placeholder; runs use eps_list
  ChainingParams params;
  std::vector<double> eps_list;  // strictly decreasing, in (0, 1)
  int grid_exponent = 10;        // grid step 2^-grid_exponent on [0, 1]
  long replicates = 10000;       // >= 100
  std::uint64_t seed = kDefaultSeed;
  SupMode sup_mode = SupMode::centered;
  double t0 = 0.5;
  int n_max = 20;
  int threads = 0;       // 0: hardware concurrency
  bool theory = true;    // false: skip bound columns and hypothesis gating

  void validate() const;  // throws std::invalid_argument naming the bad field
};

// Wilson score interval for a binomial proportion.
struct BinomialCI {
  double p_hat = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  long successes = 0;
  long trials = 0;
};

inline constexpr double kZ95 = 1.959963984540054;

BinomialCI wilson_interval(long successes, long trials, double z = kZ95);

// Mean with standard error from a deterministic sequential reduction.
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
};

// Exceedance probability of the grid supremum at one scale.
struct SupEstimate {
  double eps = 0.0;
  double threshold = 0.0;
  long exceed_count = 0;
  BinomialCI ci;
};

SupEstimate estimate_sup_prob(const ExperimentConfig& config, double eps);

// One row of the sweep table.  Bound columns are NaN when theory is off.
struct SweepRow {
  double eps = 0.0;
  double b_eps = 0.0;
  double var_t0 = 0.0;
  double entropy_sum = 0.0;
  double constant = 0.0;
  double theory_bound = 0.0;      // clamped total or chain bound per sup_mode
  double theory_bound_raw = 0.0;  // unclamped counterpart
  double empirical_prob = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  long replicates = 0;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;   // informational; excluded from serialization
};

struct SweepCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SupExperimentResult {
  std::vector<SweepRow> rows;
  std::vector<SweepCheck> checks;
  bool pass = false;
};

SupExperimentResult run_sweep(const ExperimentConfig& config);

// Monte Carlo moment estimates against exact values and bounds.
struct MomentAuditRow {
  double s = 0.0;
  double t = 0.0;
  double mc_moment = 0.0;    // sample E (X_t - X_s)^2
  double std_error = 0.0;
  double closed_form = 0.0;  // exact moment; NaN when unavailable
  double bound = 0.0;        // analytic increment bound
  long replicates = 0;
  bool ok = false;
};

std::vector<MomentAuditRow> moment_audit(const ExperimentConfig& config, double eps,
                                         const std::vector<std::pair<double, double>>& pairs);

// Point estimators used by audits and acceptance checks.  All derive their
// random streams from (seed, purpose tag, replicate), so distinct estimators
// never share draws.
MeanEstimate mc_second_moment(const ExperimentConfig& config, double eps, double t);
MeanEstimate mc_increment_moment(const ExperimentConfig& config, double eps, double s, double t);
MeanEstimate mc_char_function(const ExperimentConfig& config, double eps, double t, double zeta);

// Analytic per-scale inputs for the bound: (b_eps, var_t0).
double model_b_eps(const ModelSpec& model, double eps);
double model_var_t0(const ModelSpec& model, double eps, double t0);

// Theory side of one sweep row at scale eps.
TailBoundReport theory_report(const ExperimentConfig& config, const PartitionFamily& family,
                              double eps);

}  // namespace supchain
