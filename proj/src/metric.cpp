#include "supchain/metric.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace supchain {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Antiderivative of a^gamma.
double power_primitive(double a, double gamma) {
  return std::pow(a, gamma + 1.0) / (gamma + 1.0);
}

}  // namespace

IndexSpace IndexSpace::interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    throw std::domain_error("IndexSpace::interval: requires finite lo < hi");
  }
  return IndexSpace(lo, hi, false);
}

IndexSpace IndexSpace::single_point(double declared_diameter) {
  if (!std::isfinite(declared_diameter) || !(declared_diameter > 0.0)) {
    throw std::domain_error("IndexSpace::single_point: diameter must be positive and finite");
  }
  IndexSpace s(0.0, 0.0, true);
  s.declared_diameter_ = declared_diameter;
  return s;
}

std::int64_t IndexSpace::covering_number(double radius) const {
  if (!(radius > 0.0)) {
    throw std::domain_error("covering_number: radius must be > 0");
  }
  if (trivial_) return 1;
  double x = diameter() / (2.0 * radius);
  if (x <= 1.0) return 1;
  // A few ulps of slack so exact dyadic ratios do not round up.
  double slack = 8.0 * std::numeric_limits<double>::epsilon() * x;
  return static_cast<std::int64_t>(std::ceil(x - slack));
}

int largest_trivial_level(const IndexSpace& space) {
  if (space.is_single_point()) {
    throw std::domain_error("largest_trivial_level: undefined for the single point test space");
  }
  int n = 0;
  while (n > -60 && space.covering_number(std::ldexp(1.0, -n)) > 1) --n;
  while (n < 60 && space.covering_number(std::ldexp(1.0, -(n + 1))) == 1) ++n;
  return n;
}

namespace {

// Midpoint net for level n; the last cell may be shorter than 2^(1-n) when
// the diameter is not an exact power of two.
Level make_level(const IndexSpace& space, int n, std::int64_t count) {
  Level level;
  level.n = n;
  double lo = space.lo();
  double hi = space.hi();
  double w = std::ldexp(1.0, 1 - n);
  level.cell_edges.resize(static_cast<std::size_t>(count) + 1);
  level.net.resize(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    level.cell_edges[static_cast<std::size_t>(i)] = lo + static_cast<double>(i) * w;
  }
  level.cell_edges.back() = hi;
  for (std::int64_t i = 0; i < count; ++i) {
    auto k = static_cast<std::size_t>(i);
    level.net[k] = (i + 1 == count) ? 0.5 * (level.cell_edges[k] + hi)
                                    : lo + (static_cast<double>(i) + 0.5) * w;
  }
  return level;
}

void fill_pairs(Level& level, const Level& prev) {
  double r = std::ldexp(6.0, -level.n);
  double wp = std::ldexp(1.0, 2 - level.n);  // previous level cell width
  double lo = prev.cell_edges.front();
  auto prev_count = static_cast<std::int64_t>(prev.net.size());
  for (std::size_t i = 0; i < level.net.size(); ++i) {
    double u = level.net[i];
    std::int64_t jlo = 0;
    std::int64_t jhi = prev_count - 1;
    if (prev_count > 8) {
      double center = (u - lo) / wp - 0.5;
      // r / wp = 1.5; one extra index of margin on each side.
      jlo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(center - 1.5)) - 1);
      jhi = std::min<std::int64_t>(prev_count - 1,
                                   static_cast<std::int64_t>(std::ceil(center + 1.5)) + 1);
    }
    for (std::int64_t j = jlo; j <= jhi; ++j) {
      if (std::abs(u - prev.net[static_cast<std::size_t>(j)]) <= r) {
        level.h_pairs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
      }
    }
  }
}

}  // namespace

PartitionFamily::PartitionFamily(const IndexSpace& space, int n_max, PartitionOptions opt)
    : space_(space), n_max_(n_max) {
  if (space.is_single_point()) {
    throw std::domain_error("PartitionFamily: requires an interval index space");
  }
  n0_ = largest_trivial_level(space);
  if (n_max < n0_ + 1) {
    throw std::domain_error("PartitionFamily: n_max must be at least n0 + 1 (n0 = " +
                            std::to_string(n0_) + ")");
  }
  if (n_max > 60) {
    throw std::domain_error("PartitionFamily: n_max must be at most 60");
  }
  if (opt.max_materialized_net < 2) {
    throw std::domain_error("PartitionFamily: max_materialized_net must be at least 2");
  }
  dyadic_ = (space.diameter() == std::ldexp(1.0, 1 - n0_));
  t0_ = opt.t0 ? *opt.t0 : space.lo() + 0.5 * space.diameter();
  if (!space.contains(t0_)) {
    throw std::domain_error("PartitionFamily: t0 must lie in the index space");
  }

  net_sizes_.resize(static_cast<std::size_t>(n_max_ - n0_) + 1);
  pair_counts_.assign(static_cast<std::size_t>(n_max_ - n0_) + 1, 0);
  for (int n = n0_; n <= n_max_; ++n) {
    net_sizes_[static_cast<std::size_t>(n - n0_)] =
        static_cast<std::uint64_t>(space.covering_number(std::ldexp(1.0, -n)));
  }

  mat_through_ = n0_;
  while (mat_through_ < n_max_ &&
         net_sizes_[static_cast<std::size_t>(mat_through_ + 1 - n0_)] <= opt.max_materialized_net) {
    ++mat_through_;
  }
  if (!dyadic_ && mat_through_ < n_max_) {
    throw std::domain_error(
        "PartitionFamily: closed form pair counts need a dyadic diameter; "
        "lower n_max or raise max_materialized_net");
  }

  levels_.reserve(static_cast<std::size_t>(mat_through_ - n0_) + 1);
  for (int n = n0_; n <= mat_through_; ++n) {
    Level level = make_level(space, n, static_cast<std::int64_t>(net_size(n)));
    if (n == n0_) {
      level.net = {t0_};
    } else {
      fill_pairs(level, levels_.back());
      pair_counts_[static_cast<std::size_t>(n - n0_)] = level.h_pairs.size();
    }
    levels_.push_back(std::move(level));
  }
  // Past the materialization cap the dyadic family has the closed form
  // |H_n| = 6 * 2^(n-1-n0) - 4, valid from n0+1 for any t0.
  for (int n = mat_through_ + 1; n <= n_max_; ++n) {
    pair_counts_[static_cast<std::size_t>(n - n0_)] =
        6 * (std::uint64_t{1} << (n - 1 - n0_)) - 4;
  }
}

const Level& PartitionFamily::level(int n) const {
  if (!materialized(n)) {
    throw std::out_of_range("PartitionFamily::level: level " + std::to_string(n) +
                            " is not materialized (range " + std::to_string(n0_) + ".." +
                            std::to_string(mat_through_) + ")");
  }
  return levels_[static_cast<std::size_t>(n - n0_)];
}

std::uint64_t PartitionFamily::net_size(int n) const {
  if (n < n0_ || n > n_max_) {
    throw std::out_of_range("PartitionFamily::net_size: level out of range");
  }
  return net_sizes_[static_cast<std::size_t>(n - n0_)];
}

std::uint64_t PartitionFamily::pair_count(int n) const {
  if (n <= n0_ || n > n_max_) {
    throw std::out_of_range("PartitionFamily::pair_count: requires n0 < n <= n_max");
  }
  return pair_counts_[static_cast<std::size_t>(n - n0_)];
}

double PartitionFamily::designated_point(int n, double t) const {
  if (n < n0_ || n > n_max_) {
    throw std::out_of_range("PartitionFamily::designated_point: level out of range");
  }
  if (!space_.contains(t)) {
    throw std::domain_error("PartitionFamily::designated_point: t outside the index space");
  }
  if (n == n0_) return t0_;
  double w = std::ldexp(1.0, 1 - n);
  auto count = static_cast<std::int64_t>(net_size(n));
  auto i = std::min<std::int64_t>(count - 1,
                                  static_cast<std::int64_t>((t - space_.lo()) / w));
  if (i + 1 == count) return 0.5 * (space_.lo() + static_cast<double>(i) * w + space_.hi());
  return space_.lo() + (static_cast<double>(i) + 0.5) * w;
}

PartitionFamily build_partition_family(const IndexSpace& space, int n_max, PartitionOptions opt) {
  return PartitionFamily(space, n_max, opt);
}

double entropy_integral(const IndexSpace& space, double gamma, bool squared) {
  if (!std::isfinite(gamma) || !(gamma > -1.0)) {
    throw std::domain_error("entropy_integral: gamma must be finite and > -1");
  }
  double d = space.diameter();
  if (space.is_single_point()) {
    return power_primitive(d, gamma);  // N identically 1
  }
  int p = squared ? 2 : 1;
  if (gamma <= static_cast<double>(p) - 1.0) {
    return kInf;  // N(a)^p ~ (D/2a)^p makes the integral diverge at 0
  }

  // N(a) = k exactly on [D/(2k), D/(2(k-1))); accumulate those pieces and
  // bracket the head (0, D/(2K)] between the envelopes D/2a <= N < D/2a + 1.
  double total = power_primitive(d, gamma) - power_primitive(d / 2.0, gamma);
  double prev_edge = d / 2.0;
  double best = kInf;
  for (std::int64_t k = 2; k <= (std::int64_t{1} << 26); ++k) {
    double edge = d / (2.0 * static_cast<double>(k));
    double weight = squared ? static_cast<double>(k) * static_cast<double>(k)
                            : static_cast<double>(k);
    total += weight * (power_primitive(prev_edge, gamma) - power_primitive(edge, gamma));
    prev_edge = edge;
    if ((k & 4095) != 0) continue;
    double a = prev_edge;
    double low;
    double high;
    if (squared) {
      low = (d / 2.0) * (d / 2.0) * std::pow(a, gamma - 1.0) / (gamma - 1.0);
      high = low + d * std::pow(a, gamma) / gamma + power_primitive(a, gamma);
    } else {
      low = (d / 2.0) * std::pow(a, gamma) / gamma;
      high = low + power_primitive(a, gamma);
    }
    best = total + 0.5 * (low + high);
    if (0.5 * (high - low) <= 1e-9 * best) return best;
  }
  return best;
}

}  // namespace supchain
