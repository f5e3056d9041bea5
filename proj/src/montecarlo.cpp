#include "supchain/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace supchain {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Purpose tags separating the random streams of the different estimators.
constexpr std::uint64_t kStreamSup = 1;
constexpr std::uint64_t kStreamMoment = 2;
constexpr std::uint64_t kStreamIncrement = 3;
constexpr std::uint64_t kStreamCharFn = 4;

std::uint64_t double_bits(double x) { return std::bit_cast<std::uint64_t>(x); }

std::string real_str(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Runs fn(r) for r in [0, replicates) across workers.  Each call writes only
// its own output slot, so scheduling cannot affect results.
template <class Fn>
void for_each_replicate(long replicates, int threads_opt, const Fn& fn) {
  int threads = threads_opt;
  if (threads <= 0) {
    threads = static_cast<int>(std::min(8u, std::max(1u, std::thread::hardware_concurrency())));
  }
  threads = static_cast<int>(
      std::min<long>(threads, std::max<long>(1, replicates / 64)));
  if (threads <= 1) {
    for (long r = 0; r < replicates; ++r) fn(r);
    return;
  }
  std::atomic<long> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    constexpr long kChunk = 64;
    for (;;) {
      long begin = next.fetch_add(kChunk);
      if (begin >= replicates) return;
      long end = std::min(replicates, begin + kChunk);
      try {
        for (long r = begin; r < end; ++r) fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> make_grid(int grid_exponent) {
  std::size_t count = (std::size_t{1} << grid_exponent) + 1;
  std::vector<double> grid(count);
  double step = std::ldexp(1.0, -grid_exponent);
  for (std::size_t i = 0; i < count; ++i) grid[i] = static_cast<double>(i) * step;
  grid.back() = 1.0;
  return grid;
}

// Deterministic mean and standard error: per-replicate samples land in a
// preassigned slot, then a fixed-order two-pass reduction.
MeanEstimate reduce_mean(const std::vector<double>& samples) {
  MeanEstimate est;
  est.n = static_cast<long>(samples.size());
  long double total = 0.0L;
  for (double x : samples) total += x;
  est.mean = static_cast<double>(total / est.n);
  long double ssd = 0.0L;
  for (double x : samples) {
    long double d = x - est.mean;
    ssd += d * d;
  }
  double variance = (est.n > 1) ? static_cast<double>(ssd / (est.n - 1)) : 0.0;
  est.std_error = std::sqrt(variance / static_cast<double>(est.n));
  return est;
}

ModelSpec model_at_eps(const ModelSpec& model, double eps) {
  if (const auto* ind = std::get_if<IndicatorModel>(&model)) {
    return ind->with_eps(eps);
  }
  return std::get<CppModel>(model).with_eps(eps);
}

}  // namespace

void ExperimentConfig::validate() const {
  std::visit([](const auto& m) { m.validate(); }, model);
  if (theory) {
    params.validate();
  } else if (!std::isfinite(params.delta) || !(params.delta > 0.0)) {
    throw std::invalid_argument("delta: must be finite and > 0");
  }
  if (eps_list.empty()) {
    throw std::invalid_argument("eps_list: must not be empty");
  }
  for (double eps : eps_list) {
    if (!std::isfinite(eps) || !(eps > 0.0) || !(eps < 1.0)) {
      throw std::invalid_argument("eps_list: entries must lie in (0, 1)");
    }
  }
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) {
      throw std::invalid_argument("eps_list: must be strictly decreasing");
    }
  }
  if (grid_exponent < 1 || grid_exponent > 22) {
    throw std::invalid_argument("grid_exponent: must lie in [1, 22]");
  }
  if (std::holds_alternative<IndicatorModel>(model)) {
    double spacing = std::ldexp(1.0, -grid_exponent);
    if (!(spacing <= eps_list.back() / 2.0)) {
      throw std::invalid_argument(
          "grid_exponent: grid spacing must be at most half the smallest eps "
          "for the indicator model");
    }
  }
  if (replicates < 100 || replicates > 100000000L) {
    throw std::invalid_argument("replicates: must lie in [100, 1e8]");
  }
  if (!std::isfinite(t0) || t0 < 0.0 || t0 > 1.0) {
    throw std::invalid_argument("t0: must lie in [0, 1]");
  }
  if (n_max < 2 || n_max > 60) {
    throw std::invalid_argument("n_max: must lie in [2, 60]");
  }
  if (threads < 0 || threads > 512) {
    throw std::invalid_argument("threads: must lie in [0, 512]");
  }
}

BinomialCI wilson_interval(long successes, long trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw std::domain_error("wilson_interval: requires 0 <= successes <= trials, trials > 0");
  }
  if (!(z > 0.0)) {
    throw std::domain_error("wilson_interval: z must be > 0");
  }
  BinomialCI ci;
  ci.successes = successes;
  ci.trials = trials;
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  ci.p_hat = p;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The score interval hits the boundary exactly at 0 or n successes; pin
  // those endpoints so rounding in sqrt never leaks a stray 1e-19.
  ci.lo = (successes == 0) ? 0.0 : std::max(0.0, center - half);
  ci.hi = (successes == trials) ? 1.0 : std::min(1.0, center + half);
  return ci;
}

double model_b_eps(const ModelSpec& model, double eps) {
  ModelSpec at = model_at_eps(model, eps);
  if (const auto* ind = std::get_if<IndicatorModel>(&at)) return ind->b_eps();
  return std::get<CppModel>(at).b_eps();
}

double model_var_t0(const ModelSpec& model, double eps, double t0) {
  ModelSpec at = model_at_eps(model, eps);
  if (const auto* ind = std::get_if<IndicatorModel>(&at)) return ind->var_t0(t0);
  return std::get<CppModel>(at).var_t0(t0);
}

SupEstimate estimate_sup_prob(const ExperimentConfig& config, double eps) {
  config.validate();
  SupEstimate out;
  out.eps = eps;
  out.threshold = (config.sup_mode == SupMode::centered) ? config.params.delta / 2.0
                                                         : config.params.delta;
  std::vector<double> grid = make_grid(config.grid_exponent);
  std::uint64_t stream =
      mix3(kStreamSup, double_bits(eps), static_cast<std::uint64_t>(config.sup_mode));
  std::vector<unsigned char> exceeded(static_cast<std::size_t>(config.replicates), 0);
  bool centered = config.sup_mode == SupMode::centered;
  double threshold = out.threshold;

  ModelSpec at = model_at_eps(config.model, eps);
  if (const auto* ind = std::get_if<IndicatorModel>(&at)) {
    IndicatorModel model = *ind;
    double t0 = config.t0;
    for_each_replicate(config.replicates, config.threads, [&](long r) {
      std::mt19937_64 rng = replicate_rng(config.seed, stream, static_cast<std::uint64_t>(r));
      double u = model.draw_u(rng);
      double center = centered ? model.value(t0, u) : 0.0;
      double sup = 0.0;
      for (double t : grid) {
        sup = std::max(sup, std::abs(model.value(t, u) - center));
      }
      exceeded[static_cast<std::size_t>(r)] = (sup >= threshold) ? 1 : 0;
    });
  } else {
    const CppModel model = std::get<CppModel>(at);
    const CppSampler sampler(model);
    double t0 = config.t0;
    for_each_replicate(config.replicates, config.threads, [&](long r) {
      thread_local JumpSet jumps;
      thread_local std::vector<double> values;
      values.resize(grid.size());
      std::mt19937_64 rng = replicate_rng(config.seed, stream, static_cast<std::uint64_t>(r));
      sampler.draw(rng, jumps);
      cpp_values_on_grid(model.kernel, jumps, grid, values);
      double center = centered ? cpp_value_at(model.kernel, jumps, t0) : 0.0;
      double sup = 0.0;
      for (double v : values) {
        sup = std::max(sup, std::abs(v - center));
      }
      exceeded[static_cast<std::size_t>(r)] = (sup >= threshold) ? 1 : 0;
    });
  }

  long count = 0;
  for (unsigned char hit : exceeded) count += hit;
  out.exceed_count = count;
  out.ci = wilson_interval(count, config.replicates);
  return out;
}

TailBoundReport theory_report(const ExperimentConfig& config, const PartitionFamily& family,
                              double eps) {
  return tail_bound(config.params, family, model_b_eps(config.model, eps),
                    model_var_t0(config.model, eps, config.t0));
}

SupExperimentResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  SupExperimentResult result;
  PartitionOptions options;
  options.t0 = config.t0;
  PartitionFamily family(IndexSpace::unit_interval(), config.n_max, options);
  for (double eps : config.eps_list) {
    try {
      SweepRow row;
      row.eps = eps;
      row.replicates = config.replicates;
      row.seed = config.seed;
      row.b_eps = model_b_eps(config.model, eps);
      row.var_t0 = model_var_t0(config.model, eps, config.t0);
      auto start = std::chrono::steady_clock::now();
      if (config.theory) {
        TailBoundReport report = theory_report(config, family, eps);
        row.entropy_sum = report.entropy.value();
        row.constant = report.constant;
        if (config.sup_mode == SupMode::centered) {
          row.theory_bound = report.chain_bound;
          row.theory_bound_raw = report.chain_raw;
        } else {
          row.theory_bound = report.total_bound;
          row.theory_bound_raw =
              report.chain_raw + 4.0 * report.var_t0 / (report.delta * report.delta);
        }
      } else {
        row.entropy_sum = kNaN;
        row.constant = kNaN;
        row.theory_bound = kNaN;
        row.theory_bound_raw = kNaN;
      }
      SupEstimate estimate = estimate_sup_prob(config, eps);
      row.empirical_prob = estimate.ci.p_hat;
      row.ci_low = estimate.ci.lo;
      row.ci_high = estimate.ci.hi;
      row.runtime_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      result.rows.push_back(row);
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep failed at eps = " + real_str(eps) + ": " + e.what());
    }
  }

  if (config.theory) {
    bool dominated = true;
    std::string detail;
    for (const SweepRow& row : result.rows) {
      double slack = row.ci_high - row.ci_low;  // 2 x half-width
      if (row.empirical_prob > row.theory_bound + slack) {
        dominated = false;
        detail = "violated at eps = " + real_str(row.eps) + ": empirical " +
                 real_str(row.empirical_prob) + " > bound " + real_str(row.theory_bound) +
                 " + 2 x half-width " + real_str(slack);
        break;
      }
    }
    if (dominated) detail = "empirical <= bound + 2 x half-width at every eps";
    result.checks.push_back({"bound_domination", dominated, detail});
  }
  {
    const SweepRow& first = result.rows.front();
    const SweepRow& last = result.rows.back();
    bool vanishing = last.empirical_prob < first.empirical_prob ||
                     (last.empirical_prob < 0.01 && first.empirical_prob < 0.01);
    result.checks.push_back(
        {"vanishing_limit", vanishing,
         "empirical " + real_str(first.empirical_prob) + " at eps = " + real_str(first.eps) +
             " vs " + real_str(last.empirical_prob) + " at eps = " + real_str(last.eps)});
  }
  {
    bool monotone = true;
    std::string detail = "non-increasing within Monte Carlo slack";
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
      const SweepRow& a = result.rows[i - 1];
      const SweepRow& b = result.rows[i];
      double slack = (a.ci_high - a.ci_low) + (b.ci_high - b.ci_low);
      if (b.empirical_prob > a.empirical_prob + slack) {
        monotone = false;
        detail = "empirical rose from " + real_str(a.empirical_prob) + " (eps = " +
                 real_str(a.eps) + ") to " + real_str(b.empirical_prob) + " (eps = " +
                 real_str(b.eps) + ")";
        break;
      }
    }
    result.checks.push_back({"monotone_trend", monotone, detail});
  }
  result.pass = true;
  for (const auto& check : result.checks) result.pass = result.pass && check.pass;
  return result;
}

namespace {

// Per-replicate samples of f(path) for scalar statistics at fixed points.
template <class Fn>
std::vector<double> sample_statistic(const ExperimentConfig& config, double eps,
                                     std::uint64_t stream, const Fn& fn) {
  std::vector<double> samples(static_cast<std::size_t>(config.replicates), 0.0);
  ModelSpec at = model_at_eps(config.model, eps);
  if (const auto* ind = std::get_if<IndicatorModel>(&at)) {
    IndicatorModel model = *ind;
    for_each_replicate(config.replicates, config.threads, [&](long r) {
      std::mt19937_64 rng = replicate_rng(config.seed, stream, static_cast<std::uint64_t>(r));
      double u = model.draw_u(rng);
      samples[static_cast<std::size_t>(r)] =
          fn([&](double t) { return model.value(t, u); });
    });
  } else {
    const CppModel model = std::get<CppModel>(at);
    const CppSampler sampler(model);
    for_each_replicate(config.replicates, config.threads, [&](long r) {
      thread_local JumpSet jumps;
      std::mt19937_64 rng = replicate_rng(config.seed, stream, static_cast<std::uint64_t>(r));
      sampler.draw(rng, jumps);
      samples[static_cast<std::size_t>(r)] =
          fn([&](double t) { return cpp_value_at(model.kernel, jumps, t); });
    });
  }
  return samples;
}

}  // namespace

MeanEstimate mc_second_moment(const ExperimentConfig& config, double eps, double t) {
  config.validate();
  std::uint64_t stream = mix3(kStreamMoment, double_bits(eps), double_bits(t));
  auto samples = sample_statistic(config, eps, stream, [&](const auto& value) {
    double x = value(t);
    return x * x;
  });
  return reduce_mean(samples);
}

MeanEstimate mc_increment_moment(const ExperimentConfig& config, double eps, double s, double t) {
  config.validate();
  std::uint64_t stream =
      mix3(kStreamIncrement, double_bits(eps), mix3(double_bits(s), double_bits(t), 0));
  auto samples = sample_statistic(config, eps, stream, [&](const auto& value) {
    double d = value(t) - value(s);
    return d * d;
  });
  return reduce_mean(samples);
}

MeanEstimate mc_char_function(const ExperimentConfig& config, double eps, double t, double zeta) {
  config.validate();
  std::uint64_t stream =
      mix3(kStreamCharFn, double_bits(eps), mix3(double_bits(t), double_bits(zeta), 0));
  auto samples = sample_statistic(config, eps, stream, [&](const auto& value) {
    return std::cos(zeta * value(t));
  });
  return reduce_mean(samples);
}

std::vector<MomentAuditRow> moment_audit(const ExperimentConfig& config, double eps,
                                         const std::vector<std::pair<double, double>>& pairs) {
  config.validate();
  std::vector<MomentAuditRow> rows;
  rows.reserve(pairs.size());
  ModelSpec at = model_at_eps(config.model, eps);
  for (const auto& [s, t] : pairs) {
    if (!(s >= 0.0) || !(s <= 1.0) || !(t >= 0.0) || !(t <= 1.0)) {
      throw std::invalid_argument("moment_audit: pairs must lie in [0, 1]^2");
    }
    MomentAuditRow row;
    row.s = s;
    row.t = t;
    row.replicates = config.replicates;
    MeanEstimate estimate = mc_increment_moment(config, eps, s, t);
    row.mc_moment = estimate.mean;
    row.std_error = estimate.std_error;
    if (const auto* ind = std::get_if<IndicatorModel>(&at)) {
      IndicatorMoments m = indicator_moments(*ind, s, t);
      row.closed_form = m.increment_moment;
      row.bound = m.increment_bound;
    } else {
      const CppModel& model = std::get<CppModel>(at);
      double kernel_part = model.kernel.increment_mean_square(s, t);
      row.closed_form = std::isnan(kernel_part)
                            ? kNaN
                            : kernel_part * model.intensity.second_moment_band(
                                                model.select_tau(), model.eps);
      row.bound = model.b_eps() * std::pow(std::abs(t - s), 1.0 + model.kernel.alpha);
    }
    if (s == t) {
      row.ok = (row.mc_moment == 0.0);
    } else {
      bool within_bound = row.mc_moment <= row.bound + 4.0 * row.std_error;
      bool matches_exact = std::isnan(row.closed_form) ||
                           std::abs(row.mc_moment - row.closed_form) <= 4.0 * row.std_error;
      row.ok = within_bound && matches_exact;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace supchain
