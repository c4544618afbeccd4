// Finite metric measure spaces: point clouds with a distance oracle, positive
// point weights, maximal separated sets and nested nets over geometric scales.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dyadic {

class PointCloud {
 public:
  enum class Topology { general, line, torus };

  // Euclidean metric on explicit coordinates.
  static PointCloud from_points(std::vector<std::vector<double>> coords);
  // Explicit symmetric distance matrix, row-major.
  static PointCloud from_distance_matrix(int n, std::vector<double> dist);
  // n equispaced points {i/n} on [0,1) with |x-y| or wrap-around metric.
  static PointCloud grid_1d(int n, Topology topo);
  // 2^g points on the unit torus.
  static PointCloud torus_grid_pow2(int g) { return grid_1d(1 << g, Topology::torus); }
  // n uniform points in [0,1]^dim, Euclidean.
  static PointCloud random_box(int n, int dim, std::uint64_t seed);

  int size() const { return n_; }
  double dist(int i, int j) const;
  Topology topology() const { return topo_; }

  // True for grid_1d(n, torus) clouds; canonical 1-D constructions require it.
  bool is_uniform_torus_grid() const { return topo_ == Topology::torus && uniform_grid_; }
  double grid_spacing() const { return 1.0 / n_; }
  // 1-D position of point i (grids and 1-D coordinate clouds only).
  double position_1d(int i) const;

  double min_positive_distance() const;
  double diameter() const;
  int dim() const { return dim_; }
  const std::vector<double>& coords_of(int i) const;

 private:
  PointCloud() = default;
  int n_ = 0;
  int dim_ = 0;
  Topology topo_ = Topology::general;
  bool uniform_grid_ = false;
  std::vector<std::vector<double>> coords_;  // empty for matrix clouds
  std::vector<double> matrix_;               // empty for coordinate clouds
};

// Symmetry, zero diagonal and triangle inequality; full scan for n <= 64,
// 10^4 sampled triples otherwise.
struct MetricCheckReport {
  bool symmetric_ok = true;
  bool diagonal_ok = true;
  bool triangle_ok = true;
  long long triples_checked = 0;
  bool exhaustive = false;
  bool ok() const { return symmetric_ok && diagonal_ok && triangle_ok; }
};
MetricCheckReport check_metric(const PointCloud& cloud, std::uint64_t seed);

class Measure {
 public:
  static Measure uniform(int n, double total_mass = 1.0);
  explicit Measure(std::vector<double> weights);

  int size() const { return static_cast<int>(w_.size()); }
  double mass(int i) const { return w_[i]; }
  double mass_of(std::span<const int> ids) const;
  double total() const { return total_; }

 private:
  std::vector<double> w_;
  double total_ = 0.0;
};

// Empirical doubling of mu: max mu(B(x,2r))/mu(B(x,r)) over data centers and
// data-realized radii; sampled above the exhaustive cutoff.
struct MeasureDoublingReport {
  double max_ratio = 1.0;
  bool exhaustive = true;
  long long balls_checked = 0;
};
MeasureDoublingReport measure_doubling_report(const PointCloud& cloud, const Measure& mu,
                                              std::uint64_t seed, int max_samples = 10000);

struct SeparatedSet {
  std::vector<int> ids;  // sorted ascending
  double separation = 0.0;
  bool maximal = false;
};

struct NestedNets {
  double delta = 0.5;
  int k_min = 0;
  int k_max = 0;
  std::vector<SeparatedSet> levels;  // levels[k - k_min], separation delta^k

  const SeparatedSet& at_level(int k) const { return levels[static_cast<std::size_t>(k - k_min)]; }
  double scale(int k) const;
};

// Smallest M such that every closed ball B(x,r), x a data point and r a
// realized pairwise distance, admits a cover by M closed r/2-balls centered at
// data points. Exhaustive over (x,r) for n <= 128, seeded sample otherwise.
struct DoublingReport {
  int M = 1;
  bool exhaustive = true;
  long long balls_checked = 0;
  long long balls_total = 0;
};
DoublingReport estimate_doubling_report(const PointCloud& cloud, std::uint64_t seed,
                                        int max_samples = 2000);
int estimate_doubling_constant(const PointCloud& cloud, std::uint64_t seed = 0);

// Minimum number of closed r/2-balls (data centers) covering the closed ball
// B(center, r) on the cloud; exact branch-and-bound.
int min_halving_cover(const PointCloud& cloud, int center, double r);

std::vector<int> natural_order(int n);

// Greedy scan in `order`: keep a point iff it is >= delta from all kept ones.
SeparatedSet greedy_maximal_separated(const PointCloud& cloud, double delta,
                                      std::span<const int> order);
SeparatedSet greedy_maximal_separated(const PointCloud& cloud, double delta);

// Split a D1-separated set into pairwise-disjoint D2-separated parts by
// repeated greedy maximal extraction. Requires D2 >= D1.
std::vector<SeparatedSet> split_separated(const PointCloud& cloud, const SeparatedSet& Z,
                                          double D1, double D2);

// Max number of Z-points in any open D2-ball centered at a Z-point; bounds the
// part count of split_separated.
int packing_bound(const PointCloud& cloud, const SeparatedSet& Z, double D2);

// Nested maximal delta^k-separated sets, A_k forced into A_{k+1}.
NestedNets build_nested_nets(const PointCloud& cloud, double delta, int k_min, int k_max,
                             std::span<const int> order);
NestedNets build_nested_nets(const PointCloud& cloud, double delta, int k_min, int k_max);

// Checks of the SeparatedSet / NestedNets contracts (used by tests and the
// verification pipeline; brute force on purpose).
bool is_separated(const PointCloud& cloud, std::span<const int> ids, double delta);
bool is_maximal_separated(const PointCloud& cloud, std::span<const int> ids, double delta);
bool nets_are_nested(const NestedNets& nets);

// {x in A : d(x, A^c) < eps} united with {x in A^c : d(x, A) < eps}.
std::vector<int> boundary_layer(const PointCloud& cloud, std::span<const int> A, double eps);

}  // namespace dyadic
