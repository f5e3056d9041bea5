#include "supchain/chaining.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace supchain {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void ChainingParams::validate() const {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw std::domain_error("params: alpha must be finite and > 0");
  }
  if (!std::isfinite(beta) || !(beta > 0.0)) {
    throw std::domain_error("params: beta must be finite and > 0");
  }
  if (!std::isfinite(gamma) || !(gamma >= 0.0)) {
    throw std::domain_error("params: gamma must be finite and >= 0");
  }
  if (!(gamma < alpha)) {
    throw std::domain_error("params: gamma must be < alpha");
  }
  if (!std::isfinite(delta) || !(delta > 0.0)) {
    throw std::domain_error("params: delta must be finite and > 0");
  }
}

double chaining_weight(int n, const ChainingParams& params, int n0) {
  params.validate();
  if (n < n0) {
    throw std::domain_error("chaining_weight: requires n >= n0");
  }
  double h = params.h();
  return (1.0 - std::exp2(-h)) * std::exp2(-h * static_cast<double>(n - n0));
}

EntropySum entropy_sum_counts(int n0, const std::vector<std::uint64_t>& pair_counts,
                              double gamma, double tail_coeff, double tail_base) {
  if (!std::isfinite(gamma) || !(gamma >= 0.0)) {
    throw std::domain_error("entropy_sum: gamma must be finite and >= 0");
  }
  if (!(tail_coeff >= 0.0) || !(tail_base > 0.0)) {
    throw std::domain_error("entropy_sum: tail model must have coeff >= 0 and base > 0");
  }
  EntropySum out;
  long double partial = 0.0L;
  int n = n0 + 1;
  for (std::uint64_t count : pair_counts) {
    partial += static_cast<long double>(count) *
               std::exp2l(-(1.0L + static_cast<long double>(gamma)) * n);
    ++n;
  }
  out.partial = static_cast<double>(partial);
  int n_past = n0 + static_cast<int>(pair_counts.size());  // last included level
  double ratio = tail_base * std::exp2(-(1.0 + gamma));
  if (ratio >= 1.0) {
    out.divergent = true;
    out.tail = kInf;
    return out;
  }
  out.tail = tail_coeff * std::pow(ratio, static_cast<double>(n_past + 1)) / (1.0 - ratio);
  return out;
}

EntropySum entropy_sum(const PartitionFamily& family, double gamma) {
  std::vector<std::uint64_t> counts;
  counts.reserve(static_cast<std::size_t>(family.n_max() - family.n0()));
  for (int n = family.n0() + 1; n <= family.n_max(); ++n) {
    counts.push_back(family.pair_count(n));
  }
  // Tail model |H_n| <= 5 |T_n| = 5 * 2^(n - n0) for the dyadic family.
  return entropy_sum_counts(family.n0(), counts, gamma, 5.0 * std::exp2(-family.n0()), 2.0);
}

double bound_constant(const ChainingParams& params, int n0) {
  params.validate();
  double h = params.h();
  return std::pow(params.delta / 2.0, -params.beta) *
         std::pow(1.0 - std::exp2(-h), -params.beta) *
         std::pow(6.0, 1.0 + params.alpha) *
         std::exp2(-params.beta * h * static_cast<double>(n0));
}

TailBoundReport tail_bound(const ChainingParams& params, const PartitionFamily& family,
                           double b_eps, double var_t0) {
  params.validate();
  if (!std::isfinite(b_eps) || !(b_eps >= 0.0)) {
    throw std::domain_error("tail_bound: b_eps must be finite and >= 0");
  }
  if (!std::isfinite(var_t0) || !(var_t0 >= 0.0)) {
    throw std::domain_error("tail_bound: var_t0 must be finite and >= 0");
  }
  TailBoundReport report;
  report.entropy = entropy_sum(family, params.gamma);
  report.constant = bound_constant(params, family.n0());
  report.b_eps = b_eps;
  report.var_t0 = var_t0;
  report.delta = params.delta;
  // Keep linearity in b_eps exact: zero stays zero even for a divergent sum.
  report.chain_raw = (b_eps == 0.0) ? 0.0 : report.constant * b_eps * report.entropy.value();
  report.chain_bound = std::min(1.0, report.chain_raw);
  report.center_bound = std::min(1.0, 4.0 * var_t0 / (params.delta * params.delta));
  report.total_bound = std::min(1.0, report.chain_bound + report.center_bound);
  return report;
}

namespace {

std::string real_str(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::vector<HypothesisCheck> hypothesis_check(const ChainingParams& params,
                                              const PartitionFamily& family) {
  std::vector<HypothesisCheck> checks;
  bool alpha_ok = std::isfinite(params.alpha) && params.alpha > 0.0;
  checks.push_back({"alpha > 0", alpha_ok, "alpha = " + real_str(params.alpha)});
  bool beta_ok = std::isfinite(params.beta) && params.beta > 0.0;
  checks.push_back({"beta > 0", beta_ok, "beta = " + real_str(params.beta)});
  bool gamma_ok = std::isfinite(params.gamma) && params.gamma >= 0.0 && params.gamma < params.alpha;
  checks.push_back({"0 <= gamma < alpha", gamma_ok,
                    "gamma = " + real_str(params.gamma) + ", alpha = " + real_str(params.alpha)});
  bool delta_ok = std::isfinite(params.delta) && params.delta > 0.0;
  checks.push_back({"delta > 0", delta_ok, "delta = " + real_str(params.delta)});
  double h = params.h();
  bool h_ok = std::isfinite(h) && h > 0.0;
  checks.push_back({"h = (alpha - gamma) / beta > 0", h_ok, "h = " + real_str(h)});
  bool entropy_ok = false;
  std::string entropy_detail;
  if (std::isfinite(params.gamma) && params.gamma >= 0.0) {
    EntropySum s = entropy_sum(family, params.gamma);
    entropy_ok = !s.divergent;
    entropy_detail = s.divergent ? "tail series diverges (needs gamma > 0)"
                                 : "S = " + real_str(s.value());
  } else {
    entropy_detail = "gamma = " + real_str(params.gamma) + " outside [0, alpha)";
  }
  checks.push_back({"entropy sum finite", entropy_ok, entropy_detail});
  return checks;
}

bool all_pass(const std::vector<HypothesisCheck>& checks) {
  for (const auto& check : checks) {
    if (!check.pass) return false;
  }
  return true;
}

}  // namespace supchain
