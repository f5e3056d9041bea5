#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace supchain {

// One simulated trajectory evaluated on a fixed grid.  The seed and replicate
// index pin the trajectory: the same triple (model, seed, replicate_index)
// always reproduces the same values.
struct PathSample {
  std::vector<double> grid;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::uint64_t replicate_index = 0;
};

// Moving indicator process X_t = 1{t < U <= t + eps} with U uniform on (0, 1].
// Every path is an indicator of a length-eps window, so sup_t |X_t| = 1
// almost surely while individual increments have small moments.
struct IndicatorModel {
  double eps = 0.1;

  void validate() const;  // requires 0 < eps < 1
  IndicatorModel with_eps(double new_eps) const { return IndicatorModel{new_eps}; }

  // Increment moment scale: E(X_t - X_s)^2 <= 2 min(eps, |t - s|) <= b_eps d(s,t).
  double b_eps() const { return 2.0; }
  // E X_t0^2 = P(t0 < U <= t0 + eps) = min(eps, 1 - t0).
  double var_t0(double t0) const;

  double value(double t, double u) const { return (t < u && u <= t + eps) ? 1.0 : 0.0; }
  double draw_u(std::mt19937_64& rng) const;
};

// Exact second order moments of the indicator model.
struct IndicatorMoments {
  double second_moment_s = 0.0;   // E X_s^2
  double second_moment_t = 0.0;   // E X_t^2
  double cross_moment = 0.0;      // E X_s X_t
  double increment_moment = 0.0;  // E (X_t - X_s)^2
  double increment_bound = 0.0;   // 2 min(eps, |t - s|)
};

IndicatorMoments indicator_moments(const IndicatorModel& model, double s, double t);

PathSample indicator_path(const IndicatorModel& model, std::span<const double> grid,
                          std::mt19937_64& rng);
PathSample indicator_path(const IndicatorModel& model, std::span<const double> grid,
                          std::uint64_t seed, std::uint64_t replicate_index);

// Symmetric power law Levy measure nu(du, domega) = c |u|^(-1-rho) du x domega
// on {0 < |u| < 1} x [0, 1].
struct PowerLawIntensity {
  double rho = 0.5;  // in (0, 2)
  double c = 1.0;    // > 0

  void validate() const;
  // nu mass of {tau <= |u| < eps} x [0, 1] = 2c (tau^-rho - eps^-rho) / rho.
  double region_mass(double tau, double eps) const;
  // int int_{lo <= |u| < hi} u^2 nu(du, domega) = 2c (hi^(2-rho) - lo^(2-rho)) / (2 - rho).
  double second_moment_band(double lo, double hi) const;
  // Inverse CDF of |u| on [tau, eps): q in [0, 1) -> magnitude.
  double magnitude_quantile(double q, double tau, double eps) const;
};

enum class KernelFamily { linear, sinusoid, hoelder };

// Integrand kernel K(t, omega) together with its declared regularity:
// |K(t, omega) - K(s, omega)|^2 <= c_scale * |t - s|^(1 + alpha).
struct KernelSpec {
  KernelFamily family = KernelFamily::linear;
  double p = 1.0;       // hoelder exponent, in [1/2, 1]; ignored otherwise
  double alpha = 1.0;   // declared excess in the squared increment bound
  double c_scale = 1.0; // declared constant, here independent of omega

  static KernelSpec linear();           // K = t
  static KernelSpec sinusoid();         // K = sin(2 pi (t + omega))
  static KernelSpec hoelder(double p);  // K = |t - omega|^p

  void validate() const;
  double eval(double t, double omega) const;
  double sup_abs() const { return 1.0; }         // all built-in kernels
  double c_omega_bar() const { return c_scale; } // int_0^1 C(omega) domega
  double mean_square(double t) const;            // int_0^1 K(t, omega)^2 domega
  // int_0^1 (K(t, omega) - K(s, omega))^2 domega, NaN when no closed form exists.
  double increment_mean_square(double s, double t) const;
  const char* name() const;
};

// Truncation rule for the small jump cutoff tau.
struct TauPolicy {
  // Neglected variance below tau must stay under rel_tolerance * var_t0(t0_ref).
  double rel_tolerance = 1e-4;
  double t0_ref = 0.5;
  // Test hook: bypass the rule with a fixed cutoff in (0, eps].  tau == eps
  // empties the jump region.
  std::optional<double> fixed_tau;
};

// Compensated Poisson stochastic integral X_t = int K(t, omega) u dN over
// {|u| < eps}.  The symmetric intensity makes the compensator vanish, so
// sampling reduces to finitely many signed jumps above the cutoff tau.
struct CppModel {
  PowerLawIntensity intensity;
  KernelSpec kernel;
  double eps = 0.1;  // jump magnitude ceiling, in (0, 1]
  TauPolicy tau;

  void validate() const;
  CppModel with_eps(double new_eps) const;

  // Increment moment scale of Proposition style bounds:
  // E(X_t - X_s)^2 <= b_eps() * |t - s|^(1 + kernel.alpha).
  double b_eps() const;
  // Exact second moment E X_t0^2 = mean_square(t0) * u^2 mass below eps.
  double var_t0(double t0) const;
  // Second moment of the simulated (truncated) process.
  double truncated_var_t0(double t0) const;
  // Cutoff implied by the tau policy; throws when unachievable.
  double select_tau() const;
  // Real part of the characteristic function E cos(zeta X_t) of the
  // truncated process, by the Levy-Khinchine exponent.
  double char_function(double t, double zeta) const;
};

// Jumps of one replicate: signed sizes u_i with marks omega_i.
struct JumpSet {
  std::vector<double> sizes;
  std::vector<double> marks;
};

// Precomputed sampling plan for one model: cutoff, Poisson mass, and the
// quantile endpoints.  Build once per scale, then draw per replicate.
struct CppSampler {
  explicit CppSampler(const CppModel& m);
  void draw(std::mt19937_64& rng, JumpSet& out) const;

  const CppModel* model = nullptr;
  double tau = 0.0;
  double mass = 0.0;
  double quant_a = 0.0;
  double quant_b = 0.0;
};

JumpSet cpp_jumps(const CppModel& model, std::mt19937_64& rng);

// X_t = sum_i sizes[i] * K(t, marks[i]) for a frozen jump set.
double cpp_value_at(const KernelSpec& kernel, const JumpSet& jumps, double t);
void cpp_values_on_grid(const KernelSpec& kernel, const JumpSet& jumps,
                        std::span<const double> grid, std::span<double> out);

PathSample cpp_path(const CppModel& model, std::span<const double> grid,
                    std::mt19937_64& rng);
PathSample cpp_path(const CppModel& model, std::span<const double> grid,
                    std::uint64_t seed, std::uint64_t replicate_index);

// Randomized audit of the kernel's declared squared increment bound.  Draws
// sample triples (s, t, omega), including near-diagonal pairs, and reports
// the worst observed ratio |K(t,.) - K(s,.)|^2 / (c_scale |t - s|^(1+alpha)).
struct KernelAuditReport {
  double worst_ratio = 0.0;
  double worst_s = 0.0;
  double worst_t = 0.0;
  double worst_omega = 0.0;
  long samples = 0;
  bool ok = false;  // worst_ratio <= 1 + 1e-9
};

KernelAuditReport kernel_hoelder_audit(const KernelSpec& kernel, long samples,
                                       std::uint64_t seed);

}  // namespace supchain
