#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "supchain/chaining.hpp"
#include "supchain/metric.hpp"
#include "oracles.hpp"

using namespace supchain;

namespace {

ChainingParams make_params(double alpha, double beta, double gamma, double delta) {
  return ChainingParams{alpha, beta, gamma, delta};
}

}  // namespace

TEST_CASE("parameter validation") {
  ChainingParams good;
  CHECK_NOTHROW(good.validate());
  CHECK_EQ(good.h(), doctest::Approx(0.25));

  CHECK_NOTHROW(make_params(1.0, 2.0, 0.0, 0.5).validate());  // gamma = 0 allowed
  CHECK_THROWS_AS(make_params(0.0, 2.0, 0.0, 0.5).validate(), std::domain_error);
  CHECK_THROWS_AS(make_params(-1.0, 2.0, 0.5, 0.5).validate(), std::domain_error);
  CHECK_THROWS_AS(make_params(1.0, 0.0, 0.5, 0.5).validate(), std::domain_error);
  CHECK_THROWS_AS(make_params(1.0, 2.0, -0.1, 0.5).validate(), std::domain_error);
  CHECK_THROWS_AS(make_params(1.0, 2.0, 1.0, 0.5).validate(), std::domain_error);
  CHECK_THROWS_AS(make_params(1.0, 2.0, 1.5, 0.5).validate(), std::domain_error);
  CHECK_THROWS_AS(make_params(1.0, 2.0, 0.5, 0.0).validate(), std::domain_error);
  CHECK_THROWS_AS(make_params(1.0, 2.0, 0.5, -1.0).validate(), std::domain_error);

  ChainingParams derived = ChainingParams::with_default_gamma(1.4, 2.0, 0.3);
  CHECK_EQ(derived.gamma, doctest::Approx(0.7));
  CHECK_NOTHROW(derived.validate());
}

TEST_CASE("weight values") {
  // h = 1: the base weight is exactly one half.
  ChainingParams h1 = make_params(2.0, 2.0, 0.0, 0.5);
  CHECK_EQ(h1.h(), doctest::Approx(1.0));
  CHECK_EQ(chaining_weight(1, h1, 1), doctest::Approx(0.5).epsilon(1e-14));

  // h = 0.25 four levels up.
  ChainingParams q;
  CHECK_EQ(chaining_weight(5, q, 1),
           doctest::Approx((1.0 - std::exp2(-0.25)) * 0.5).epsilon(1e-14));

  CHECK_THROWS_AS(chaining_weight(0, q, 1), std::domain_error);
  CHECK_NOTHROW(chaining_weight(-1, q, -1));
}

TEST_CASE("weight normalization identity") {
  // Partial sums telescope: sum_{n=n0}^{N} w_n = 1 - 2^(-h (N + 1 - n0)).
  for (double h : {0.1, 0.25, 0.5, 1.0, 2.0}) {
    CAPTURE(h);
    // Realize h = (alpha - gamma) / beta with beta = 1.
    ChainingParams params = make_params(h + 0.25, 1.0, 0.25, 0.5);
    CHECK_EQ(params.h(), doctest::Approx(h).epsilon(1e-14));
    for (int n0 : {-1, 0, 1, 3}) {
      double sum = 0.0;
      for (int n = n0; n <= n0 + 500; ++n) {
        sum += chaining_weight(n, params, n0);
      }
      CHECK_LT(std::abs(sum + std::exp2(-501.0 * h) - 1.0), 1e-12);
    }
  }
}

TEST_CASE("entropy sum matches term-by-term oracle") {
  PartitionFamily family(IndexSpace::unit_interval(), 20);
  double gamma = 0.5;
  EntropySum sum = entropy_sum(family, gamma);
  CHECK_FALSE(sum.divergent);

  std::vector<std::uint64_t> counts;
  for (int n = family.n0() + 1; n <= family.n_max(); ++n) {
    counts.push_back(family.pair_count(n));
  }
  double oracle = oracles::term_by_term_entropy(family.n0(), counts, gamma);
  CHECK_EQ(sum.partial, doctest::Approx(oracle).epsilon(1e-12));

  // Tail bound is the closed geometric sum over 5 * 2^(n-1) from n_max + 1.
  double r = std::exp2(-gamma);
  double tail = 2.5 * std::pow(r, family.n_max() + 1) / (1.0 - r);
  CHECK_EQ(sum.tail, doctest::Approx(tail).epsilon(1e-12));

  // The first two levels contribute 2 * 2^-3 + 8 * 2^-4.5.
  PartitionFamily small(IndexSpace::unit_interval(), 3);
  EntropySum first = entropy_sum(small, gamma);
  CHECK_EQ(first.partial,
           doctest::Approx(2.0 * std::exp2(-3.0) + 8.0 * std::exp2(-4.5)).epsilon(1e-14));
}

TEST_CASE("entropy sum tail dominates the true remainder") {
  double gamma = 0.5;
  PartitionFamily shallow(IndexSpace::unit_interval(), 20);
  PartitionFamily deep(IndexSpace::unit_interval(), 40);
  EntropySum s20 = entropy_sum(shallow, gamma);
  EntropySum s40 = entropy_sum(deep, gamma);
  // Extending the exact range can only tighten the conservative total.
  CHECK_GE(s20.value(), s40.value());
  CHECK_GE(s40.value(), s40.partial);
  // The exact level sums agree where they overlap, so the tail really covers
  // the dropped levels.
  CHECK_GE(s20.tail, s40.partial - s20.partial);
}

TEST_CASE("entropy sum divergence flag") {
  PartitionFamily family(IndexSpace::unit_interval(), 10);
  EntropySum zero = entropy_sum(family, 0.0);
  CHECK(zero.divergent);
  CHECK(std::isinf(zero.value()));
  CHECK(std::isfinite(zero.partial));  // exact part still reported
  CHECK_THROWS_AS(entropy_sum(family, -0.3), std::domain_error);
  EntropySum fine = entropy_sum(family, 0.01);
  CHECK_FALSE(fine.divergent);
}

TEST_CASE("entropy sum over synthetic single point counts") {
  // One pair per level with no growth: sum_{n >= 1} 2^(-2n) = 1/3 at gamma 1.
  std::vector<std::uint64_t> ones(30, 1);
  EntropySum sum = entropy_sum_counts(0, ones, 1.0, 1.0, 1.0);
  CHECK_FALSE(sum.divergent);
  CHECK_EQ(sum.value(), doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("bound constant arithmetic") {
  // alpha 1, beta 2, gamma 0.5 (h = 0.25), delta 2, n0 = 1.
  ChainingParams params = make_params(1.0, 2.0, 0.5, 2.0);
  double expected = std::pow(1.0 - std::exp2(-0.25), -2.0) * 36.0 * std::exp2(-0.5);
  CHECK_EQ(bound_constant(params, 1), doctest::Approx(expected).epsilon(1e-13));

  // Doubling delta at beta 2 divides the constant by four.
  ChainingParams doubled = params;
  doubled.delta = 4.0;
  CHECK_EQ(bound_constant(doubled, 1) * 4.0,
           doctest::Approx(bound_constant(params, 1)).epsilon(1e-13));

  // Positive over a parameter grid, including negative n0.
  for (double alpha : {0.3, 1.0, 2.0}) {
    for (double beta : {1.0, 2.0, 4.0}) {
      for (double frac : {0.0, 0.4, 0.9}) {
        for (int n0 : {-1, 0, 1}) {
          ChainingParams p = make_params(alpha, beta, frac * alpha, 0.5);
          CAPTURE(alpha);
          CAPTURE(beta);
          CAPTURE(frac);
          CAPTURE(n0);
          CHECK_GT(bound_constant(p, n0), 0.0);
        }
      }
    }
  }
}

TEST_CASE("tail bound report") {
  PartitionFamily family(IndexSpace::unit_interval(), 20);
  ChainingParams params;

  SUBCASE("zero b_eps gives zero chain bound") {
    TailBoundReport r = tail_bound(params, family, 0.0, 0.01);
    CHECK_EQ(r.chain_raw, 0.0);
    CHECK_EQ(r.chain_bound, 0.0);
    CHECK_EQ(r.total_bound, r.center_bound);

    // Even against a divergent entropy sum: linearity in b_eps wins.
    ChainingParams boundary = make_params(1.0, 2.0, 0.0, 0.5);
    TailBoundReport d = tail_bound(boundary, family, 0.0, 0.01);
    CHECK(d.entropy.divergent);
    CHECK_EQ(d.chain_raw, 0.0);
  }

  SUBCASE("unclamped chain is the exact product") {
    TailBoundReport r = tail_bound(params, family, 3e-4, 1e-4);
    double expected = bound_constant(params, family.n0()) * 3e-4 *
                      entropy_sum(family, params.gamma).value();
    CHECK_EQ(r.chain_raw, doctest::Approx(expected).epsilon(1e-12));
    CHECK_EQ(r.chain_bound, doctest::Approx(std::min(1.0, expected)).epsilon(1e-12));
    CHECK_EQ(r.center_bound, doctest::Approx(4.0 * 1e-4 / 0.25).epsilon(1e-12));
    CHECK_EQ(r.total_bound,
             doctest::Approx(std::min(1.0, r.chain_bound + r.center_bound)).epsilon(1e-12));
  }

  SUBCASE("bounds are clamped probabilities") {
    TailBoundReport r = tail_bound(params, family, 10.0, 10.0);
    CHECK_GT(r.chain_raw, 1.0);
    CHECK_EQ(r.chain_bound, 1.0);
    CHECK_EQ(r.center_bound, 1.0);
    CHECK_EQ(r.total_bound, 1.0);
  }

  SUBCASE("monotonicity on a grid") {
    double prev = -1.0;
    for (double b : {0.0, 1e-6, 1e-4, 1e-2, 1.0}) {
      TailBoundReport r = tail_bound(params, family, b, 1e-4);
      CHECK_GE(r.total_bound, prev);
      prev = r.total_bound;
    }
    prev = -1.0;
    for (double v : {0.0, 1e-6, 1e-4, 1e-2, 1.0}) {
      TailBoundReport r = tail_bound(params, family, 1e-5, v);
      CHECK_GE(r.total_bound, prev);
      prev = r.total_bound;
    }
    prev = 2.0;
    for (double delta : {0.1, 0.2, 0.5, 1.0, 2.0}) {
      ChainingParams p = params;
      p.delta = delta;
      TailBoundReport r = tail_bound(p, family, 1e-4, 1e-4);
      CHECK_LE(r.total_bound, prev);
      prev = r.total_bound;
    }
  }

  SUBCASE("vanishing inputs drive the bound to zero") {
    double prev = 2.0;
    for (int k = 4; k <= 40; k += 4) {
      double scale = std::exp2(-k);
      TailBoundReport r = tail_bound(params, family, scale, scale);
      CHECK_LE(r.total_bound, prev);
      prev = r.total_bound;
    }
    CHECK_LT(prev, 1e-6);
  }

  SUBCASE("negative inputs are rejected") {
    CHECK_THROWS_AS(tail_bound(params, family, -1e-9, 0.0), std::domain_error);
    CHECK_THROWS_AS(tail_bound(params, family, 0.0, -1e-9), std::domain_error);
  }
}

TEST_CASE("tail bound against a from-scratch evaluation") {
  // Fully independent re-derivation: every constant from its defining
  // formula in long double, no shared code with the library.
  long double alpha = 1.0L, beta = 2.0L, gamma = 0.5L, delta = 0.5L;
  long double rho = 0.5L, c = 1.0L, eps = 0.02L, t0 = 0.5L;
  int n0 = 1;
  long double h = (alpha - gamma) / beta;

  long double constant = std::pow(delta / 2.0L, -beta) *
                         std::pow(1.0L - std::pow(2.0L, -h), -beta) *
                         std::pow(6.0L, 1.0L + alpha) * std::pow(2.0L, -beta * h * n0);

  int n_max = 20;
  long double entropy = 0.0L;
  for (int n = n0 + 1; n <= n_max; ++n) {
    long double pairs = 6.0L * std::pow(2.0L, static_cast<long double>(n - 1 - n0)) - 4.0L;
    entropy += pairs * std::pow(2.0L, -(1.0L + gamma) * n);
  }
  long double ratio = std::pow(2.0L, -gamma);
  entropy += 5.0L * std::pow(2.0L, static_cast<long double>(-n0)) *
             std::pow(ratio, static_cast<long double>(n_max + 1)) / (1.0L - ratio);

  long double b_eps = 2.0L * c * std::pow(eps, 2.0L - rho) / (2.0L - rho);
  long double var_t0 = t0 * t0 * b_eps;  // linear kernel: mean square t0^2, c_bar 1

  long double chain = constant * b_eps * entropy;
  long double center = 4.0L * var_t0 / (delta * delta);

  PartitionFamily family(IndexSpace::unit_interval(), n_max);
  ChainingParams params;
  TailBoundReport r =
      tail_bound(params, family, static_cast<double>(b_eps), static_cast<double>(var_t0));
  CHECK_EQ(r.constant, doctest::Approx(static_cast<double>(constant)).epsilon(1e-12));
  CHECK_EQ(r.entropy.value(), doctest::Approx(static_cast<double>(entropy)).epsilon(1e-12));
  CHECK_EQ(r.chain_raw, doctest::Approx(static_cast<double>(chain)).epsilon(1e-12));
  CHECK_EQ(r.center_bound,
           doctest::Approx(static_cast<double>(std::min(1.0L, center))).epsilon(1e-12));
  CHECK_EQ(r.total_bound,
           doctest::Approx(static_cast<double>(std::min(
               1.0L, std::min(1.0L, chain) + std::min(1.0L, center)))).epsilon(1e-12));
}

TEST_CASE("hypothesis check") {
  PartitionFamily family(IndexSpace::unit_interval(), 20);

  SUBCASE("valid defaults pass every hypothesis") {
    std::vector<HypothesisCheck> checks = hypothesis_check(ChainingParams{}, family);
    CHECK_EQ(checks.size(), 6);
    for (const auto& c : checks) {
      CAPTURE(c.name);
      CHECK(c.pass);
    }
    CHECK(all_pass(checks));
  }

  SUBCASE("gamma at alpha fails the strict inequality") {
    std::vector<HypothesisCheck> checks =
        hypothesis_check(make_params(1.0, 2.0, 1.0, 0.5), family);
    CHECK_FALSE(all_pass(checks));
    bool found = false;
    for (const auto& c : checks) {
      if (c.name.find("gamma") != std::string::npos) {
        found = true;
        CHECK_FALSE(c.pass);
      }
    }
    CHECK(found);
  }

  SUBCASE("negative gamma fails without throwing") {
    std::vector<HypothesisCheck> checks =
        hypothesis_check(make_params(1.0, 2.0, -0.1, 0.5), family);
    CHECK_FALSE(all_pass(checks));
  }

  SUBCASE("gamma zero passes the range but fails entropy finiteness") {
    std::vector<HypothesisCheck> checks =
        hypothesis_check(make_params(1.0, 2.0, 0.0, 0.5), family);
    CHECK_FALSE(all_pass(checks));
    for (const auto& c : checks) {
      if (c.name.find("gamma") != std::string::npos) CHECK(c.pass);
      if (c.name.find("entropy") != std::string::npos) CHECK_FALSE(c.pass);
    }
  }
}
