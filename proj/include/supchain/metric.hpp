#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace supchain {

// Index space of the processes under study: a compact interval [lo, hi] with
// the metric d(s, t) = |s - t|.  A degenerate single point variant with a
// declared diameter exists for unit tests that need a covering number that is
// identically 1.
class IndexSpace {
 public:
  static IndexSpace unit_interval() { return IndexSpace(0.0, 1.0, false); }
  static IndexSpace interval(double lo, double hi);
  static IndexSpace single_point(double declared_diameter);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double diameter() const { return trivial_ ? declared_diameter_ : hi_ - lo_; }
  bool is_single_point() const { return trivial_; }
  double distance(double s, double t) const { return std::abs(s - t); }
  bool contains(double t) const { return t >= lo_ && t <= hi_; }

  // Minimal number of closed balls of the given radius covering the space.
  // For an interval this is ceil(diameter / (2 radius)), floored at 1.
  std::int64_t covering_number(double radius) const;

 private:
  IndexSpace(double lo, double hi, bool trivial)
      : lo_(lo), hi_(hi), trivial_(trivial), declared_diameter_(hi - lo) {}
  double lo_;
  double hi_;
  bool trivial_;
  double declared_diameter_;
};

// Largest integer n with covering_number(2^-n) == 1.  Equals 1 for [0, 1]
// and is negative once the diameter exceeds 2.
int largest_trivial_level(const IndexSpace& space);

// One partition level: cells of diameter at most 2^(1-n), their designated
// points (net), and the near pairs against the previous level's net.
struct Level {
  int n = 0;
  // cell k is [cell_edges[k], cell_edges[k+1]), the last cell is closed.
  std::vector<double> cell_edges;
  // designated point of cell k; cell midpoints except at the root level,
  // where the single designated point is t0.
  std::vector<double> net;
  // index pairs (u in this net, v in previous net) with |u - v| <= 6 * 2^-n.
  // Empty at the root level.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> h_pairs;
};

struct PartitionOptions {
  // Designated point of the root cell.  Defaults to the midpoint.
  std::optional<double> t0;
  // Levels are materialized (cells, nets, pairs) only while the net has at
  // most this many points; beyond that only closed form counts are kept.
  std::size_t max_materialized_net = std::size_t{1} << 17;
};

// Nested dyadic partition family of an interval: level n splits the space
// into cells of width 2^(1-n), from the first trivial level n0 (one cell)
// down to n_max.  Net sizes and near-pair counts are available at every
// level; full cell and pair listings only up to the materialization cap.
class PartitionFamily {
 public:
  PartitionFamily(const IndexSpace& space, int n_max, PartitionOptions opt = {});

  const IndexSpace& space() const { return space_; }
  int n0() const { return n0_; }
  int n_max() const { return n_max_; }
  double t0() const { return t0_; }
  // Deepest level with materialized cells and pairs.
  int materialized_through() const { return mat_through_; }
  bool materialized(int n) const { return n >= n0_ && n <= mat_through_; }

  // Level data; throws std::out_of_range beyond the materialization cap.
  const Level& level(int n) const;

  // |T_n| and |H_n| for any n in [n0, n_max]; closed form past the cap.
  std::uint64_t net_size(int n) const;
  std::uint64_t pair_count(int n) const;

  // Designated point s_n(t) of the level n cell containing t.  Pure
  // arithmetic, valid at every level up to n_max.
  double designated_point(int n, double t) const;

 private:
  IndexSpace space_;
  int n0_;
  int n_max_;
  int mat_through_;
  double t0_;
  bool dyadic_;  // diameter is exactly 2^(1 - n0)
  std::vector<Level> levels_;
  std::vector<std::uint64_t> net_sizes_;
  std::vector<std::uint64_t> pair_counts_;
};

PartitionFamily build_partition_family(const IndexSpace& space, int n_max,
                                       PartitionOptions opt = {});

// Entropy style integral over radii: int_0^D a^gamma * N(T, d, a)^p da with
// p = 1, or p = 2 when squared is set.  Evaluates the piecewise constant
// integrand exactly over breakpoints and brackets the remaining head with
// envelope bounds; returns +infinity when the integral diverges.
double entropy_integral(const IndexSpace& space, double gamma, bool squared = false);

}  // namespace supchain
