#pragma once

#include <string>
#include <vector>

#include "supchain/metric.hpp"

namespace supchain {

// Exponent and threshold bundle for the tail bound.  Plain aggregate so that
// deliberately invalid values can be inspected by hypothesis_check; every
// computation that relies on the constraints calls validate() first.
struct ChainingParams {
  double alpha = 1.0;  // increment moment exponent: E|X_t - X_s|^beta <= B_eps d(s,t)^(1+alpha)
  double beta = 2.0;   // moment order, >= 1
  double gamma = 0.5;  // entropy weight split, 0 <= gamma < alpha
  double delta = 0.5;  // tail threshold, > 0

  double h() const { return (alpha - gamma) / beta; }
  void validate() const;  // throws std::domain_error naming the violated constraint

  static ChainingParams with_default_gamma(double alpha, double beta, double delta) {
    return ChainingParams{alpha, beta, alpha / 2.0, delta};
  }
};

// Weight w_n = (1 - 2^-h) * 2^(-h (n - n0)) assigned to level n >= n0.
// The weights sum to 1 over n >= n0.
double chaining_weight(int n, const ChainingParams& params, int n0);

// Entropy sum S = sum_{n > n0} |H_n| 2^(-(1+gamma) n), split into the
// exactly accumulated part up to n_max and a geometric bound on the rest.
struct EntropySum {
  double partial = 0.0;   // levels n0+1 .. n_max, exact pair counts
  double tail = 0.0;      // bound on levels past n_max; +infinity when divergent
  bool divergent = false; // tail series fails to converge (gamma too small)
  double value() const { return partial + tail; }
};

EntropySum entropy_sum(const PartitionFamily& family, double gamma);

// Core summation over explicit pair counts for levels n0+1 .. n0+counts.size(),
// with the tail modeled as |H_n| <= tail_coeff * tail_base^n.  Exposed for
// tests with synthetic families.
EntropySum entropy_sum_counts(int n0, const std::vector<std::uint64_t>& pair_counts,
                              double gamma, double tail_coeff, double tail_base);

// Constant C = (delta/2)^-beta * (1 - 2^-h)^-beta * 6^(1+alpha) * 2^(-beta h n0).
double bound_constant(const ChainingParams& params, int n0);

// Full tail bound report for P(sup_t |X_t| >= delta).  The chained part
// controls sup_t |X_t - X_t0| at threshold delta/2, the centering part
// controls |X_t0| at delta/2 via Chebyshev.
struct TailBoundReport {
  EntropySum entropy;
  double constant = 0.0;      // C above
  double b_eps = 0.0;
  double var_t0 = 0.0;
  double delta = 0.0;
  double chain_raw = 0.0;     // C * b_eps * entropy value, unclamped
  double chain_bound = 0.0;   // min(1, chain_raw)
  double center_bound = 0.0;  // min(1, 4 var_t0 / delta^2)
  double total_bound = 0.0;   // min(1, chain_bound + center_bound)
};

TailBoundReport tail_bound(const ChainingParams& params, const PartitionFamily& family,
                           double b_eps, double var_t0);

// Per-hypothesis report of the bound's standing assumptions.  Never throws;
// meant for presenting violations rather than rejecting them.
struct HypothesisCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<HypothesisCheck> hypothesis_check(const ChainingParams& params,
                                              const PartitionFamily& family);
bool all_pass(const std::vector<HypothesisCheck>& checks);

}  // namespace supchain
