// Command line front end: evaluate tail bounds, run Monte Carlo sweeps, and
// audit the analytic moment formulas, all driven by a key = value config file.
//
// Exit codes: 0 success, 2 config or hypothesis error, 3 audit failure,
// 1 runtime or I/O error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "supchain/config.hpp"
#include "supchain/montecarlo.hpp"
#include "supchain/report.hpp"
#include "supchain/rng.hpp"

namespace {

using namespace supchain;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAudit = 3;

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> reps;
  std::optional<int> grid_exponent;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file (key = value)")
      ->required();
  cmd->add_option("--seed", opts.seed, "override the config seed");
  cmd->add_option("--reps", opts.reps, "override the replicate count");
  cmd->add_option("--grid-exponent", opts.grid_exponent, "override the grid exponent");
  cmd->add_option("--out", opts.out, "output path (CSV; the JSON summary, when produced, "
                                     "lands next to it with a .json extension)");
}

LabConfig load_with_overrides(const CommonOpts& opts) {
  LabConfig config = load_config(opts.config_path);
  if (opts.seed) config.experiment.seed = *opts.seed;
  if (opts.reps) config.experiment.replicates = *opts.reps;
  if (opts.grid_exponent) config.experiment.grid_exponent = *opts.grid_exponent;
  if (opts.out) {
    config.out_csv = *opts.out;
    config.out_json = std::filesystem::path(*opts.out).replace_extension(".json").string();
  }
  config.experiment.validate();
  return config;
}

// Hypothesis gate for theory runs; prints failures and says whether to stop.
bool hypotheses_hold(const ExperimentConfig& experiment,
                     std::vector<HypothesisCheck>& checks_out) {
  if (!experiment.theory) return true;
  PartitionOptions options;
  options.t0 = experiment.t0;
  PartitionFamily family(IndexSpace::unit_interval(), experiment.n_max, options);
  checks_out = hypothesis_check(experiment.params, family);
  if (all_pass(checks_out)) return true;
  std::cerr << "hypothesis violation:\n";
  for (const auto& check : checks_out) {
    if (!check.pass) {
      std::cerr << "  " << check.name << " fails (" << check.detail << ")\n";
    }
  }
  return false;
}

void emit(const std::string& text, const std::string& path, const char* label) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text_file(path, text);
    std::cout << label << " written to " << path << "\n";
  }
}

int cmd_bound(const CommonOpts& opts) {
  LabConfig config = load_with_overrides(opts);
  const ExperimentConfig& experiment = config.experiment;
  if (!experiment.theory) {
    std::cerr << "bound: config sets theory = none; nothing to evaluate\n";
    return kExitConfig;
  }
  std::vector<HypothesisCheck> checks;
  if (!hypotheses_hold(experiment, checks)) return kExitConfig;

  PartitionOptions options;
  options.t0 = experiment.t0;
  PartitionFamily family(IndexSpace::unit_interval(), experiment.n_max, options);
  std::vector<SweepRow> rows;
  for (double eps : experiment.eps_list) {
    TailBoundReport report = theory_report(experiment, family, eps);
    SweepRow row;
    row.eps = eps;
    row.b_eps = report.b_eps;
    row.var_t0 = report.var_t0;
    row.entropy_sum = report.entropy.value();
    row.constant = report.constant;
    row.theory_bound =
        (experiment.sup_mode == SupMode::centered) ? report.chain_bound : report.total_bound;
    rows.push_back(row);
    std::printf(
        "eps %-8g b_eps %-12.6g var_t0 %-12.6g S %-12.6g C %-12.6g "
        "chain %-10.6g center %-10.6g total %-10.6g\n",
        eps, report.b_eps, report.var_t0, report.entropy.value(), report.constant,
        report.chain_bound, report.center_bound, report.total_bound);
  }
  if (!config.out_csv.empty()) {
    write_text_file(config.out_csv, bound_csv(rows));
    std::cout << "bound table written to " << config.out_csv << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const CommonOpts& opts) {
  LabConfig config = load_with_overrides(opts);
  const ExperimentConfig& experiment = config.experiment;
  std::vector<HypothesisCheck> checks;
  if (!hypotheses_hold(experiment, checks)) return kExitConfig;

  SupExperimentResult result = run_sweep(experiment);
  for (const SweepRow& row : result.rows) {
    std::printf("eps %-8g empirical %-8.4f ci [%.4f, %.4f] bound %-10.6g (%.2fs)\n", row.eps,
                row.empirical_prob, row.ci_low, row.ci_high, row.theory_bound,
                row.runtime_seconds);
  }
  for (const auto& check : result.checks) {
    std::printf("check %-18s %s (%s)\n", check.name.c_str(), check.pass ? "pass" : "FAIL",
                check.detail.c_str());
  }
  emit(sweep_csv(result.rows), config.out_csv, "sweep table");
  emit(sweep_summary_json(result, checks, experiment), config.out_json, "summary");
  return kExitOk;
}

int cmd_audit(const CommonOpts& opts) {
  LabConfig config = load_with_overrides(opts);
  const ExperimentConfig& experiment = config.experiment;
  double eps = experiment.eps_list.front();
  bool failed = false;
  std::string worst;

  if (const auto* model = std::get_if<CppModel>(&experiment.model)) {
    long samples = std::max<long>(1000, experiment.replicates);
    KernelAuditReport kernel = kernel_hoelder_audit(model->kernel, samples, experiment.seed);
    std::printf("kernel %-9s worst ratio %.12g at (s=%.9g, t=%.9g, omega=%.9g) over %ld samples: %s\n",
                model->kernel.name(), kernel.worst_ratio, kernel.worst_s, kernel.worst_t,
                kernel.worst_omega, kernel.samples, kernel.ok ? "pass" : "FAIL");
    if (!kernel.ok) {
      failed = true;
      worst = "kernel ratio " + format_double(kernel.worst_ratio) + " at (s=" +
              format_double(kernel.worst_s) + ", t=" + format_double(kernel.worst_t) +
              ", omega=" + format_double(kernel.worst_omega) + ")";
    }
  }

  std::vector<std::pair<double, double>> pairs = {
      {experiment.t0, experiment.t0}, {0.2, 0.25}, {0.95, 0.97}, {0.2, 0.7}};
  std::mt19937_64 rng = replicate_rng(experiment.seed, 0x6d6f6d656e744155ull, 0);
  for (int i = 0; i < 16; ++i) {
    pairs.emplace_back(uniform01(rng), uniform01(rng));
  }
  std::vector<MomentAuditRow> rows = moment_audit(experiment, eps, pairs);
  for (const MomentAuditRow& row : rows) {
    std::printf("pair (%.6g, %.6g) mc %-12.6g stderr %-10.4g exact %-12.6g bound %-12.6g %s\n",
                row.s, row.t, row.mc_moment, row.std_error, row.closed_form, row.bound,
                row.ok ? "pass" : "FAIL");
    if (!row.ok && worst.empty()) {
      worst = "moment pair (s=" + format_double(row.s) + ", t=" + format_double(row.t) +
              "): mc " + format_double(row.mc_moment) + " vs bound " +
              format_double(row.bound);
    }
    failed = failed || !row.ok;
  }
  if (!config.out_csv.empty()) {
    write_text_file(config.out_csv, audit_csv(rows));
    std::cout << "audit table written to " << config.out_csv << "\n";
  }
  if (failed) {
    std::cerr << "audit failure: " << worst << "\n";
    return kExitAudit;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supchain: chaining tail bound calculator and Monte Carlo laboratory"};
  app.require_subcommand(1);
  CommonOpts bound_opts;
  CommonOpts sweep_opts;
  CommonOpts audit_opts;
  CLI::App* bound = app.add_subcommand("bound", "evaluate the tail bound per eps (no simulation)");
  add_common(bound, bound_opts);
  CLI::App* sweep =
      app.add_subcommand("sweep", "Monte Carlo sweep over eps_list vs the tail bound");
  add_common(sweep, sweep_opts);
  CLI::App* audit = app.add_subcommand("audit", "kernel and moment audits against closed forms");
  add_common(audit, audit_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;  // --help exits 0
  }

  try {
    if (bound->parsed()) return cmd_bound(bound_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (audit->parsed()) return cmd_audit(audit_opts);
    std::cerr << "no subcommand selected\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
