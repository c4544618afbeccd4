#include "dyadic/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <stdexcept>

#include "dyadic/rng.hpp"

namespace dyadic {

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

PointCloud PointCloud::from_points(std::vector<std::vector<double>> coords) {
  if (coords.empty()) throw std::invalid_argument("point cloud must be nonempty");
  PointCloud c;
  c.n_ = static_cast<int>(coords.size());
  c.dim_ = static_cast<int>(coords.front().size());
  for (const auto& p : coords)
    if (static_cast<int>(p.size()) != c.dim_)
      throw std::invalid_argument("inconsistent coordinate dimension");
  c.coords_ = std::move(coords);
  c.topo_ = Topology::general;
  return c;
}

PointCloud PointCloud::from_distance_matrix(int n, std::vector<double> dist) {
  if (n <= 0) throw std::invalid_argument("point cloud must be nonempty");
  if (static_cast<int>(dist.size()) != n * n)
    throw std::invalid_argument("distance matrix size mismatch");
  for (int i = 0; i < n; ++i) {
    if (dist[static_cast<std::size_t>(i) * n + i] != 0.0)
      throw std::invalid_argument("distance matrix diagonal must be zero");
    for (int j = 0; j < n; ++j) {
      double dij = dist[static_cast<std::size_t>(i) * n + j];
      if (dij < 0.0) throw std::invalid_argument("distances must be nonnegative");
      if (dij != dist[static_cast<std::size_t>(j) * n + i])
        throw std::invalid_argument("distance matrix must be symmetric");
    }
  }
  PointCloud c;
  c.n_ = n;
  c.matrix_ = std::move(dist);
  c.topo_ = Topology::general;
  return c;
}

PointCloud PointCloud::grid_1d(int n, Topology topo) {
  if (n <= 0) throw std::invalid_argument("grid size must be positive");
  if (topo == Topology::general) throw std::invalid_argument("grid_1d expects line or torus");
  PointCloud c;
  c.n_ = n;
  c.dim_ = 1;
  c.topo_ = topo;
  c.uniform_grid_ = true;
  c.coords_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) c.coords_[static_cast<std::size_t>(i)] = {double(i) / n};
  return c;
}

PointCloud PointCloud::random_box(int n, int dim, std::uint64_t seed) {
  if (n <= 0 || dim <= 0) throw std::invalid_argument("random_box needs n, dim >= 1");
  SplitMix rng(splitmix64(seed ^ 0xb0c5u));
  std::vector<std::vector<double>> pts(static_cast<std::size_t>(n));
  for (auto& p : pts) {
    p.resize(static_cast<std::size_t>(dim));
    for (auto& x : p) x = rng.next_u01();
  }
  return from_points(std::move(pts));
}

double PointCloud::dist(int i, int j) const {
  if (!matrix_.empty()) return matrix_[static_cast<std::size_t>(i) * n_ + j];
  if (dim_ == 1) {
    double d = std::abs(coords_[static_cast<std::size_t>(i)][0] - coords_[static_cast<std::size_t>(j)][0]);
    if (topo_ == Topology::torus) d = std::min(d, 1.0 - d);
    return d;
  }
  return euclidean(coords_[static_cast<std::size_t>(i)], coords_[static_cast<std::size_t>(j)]);
}

double PointCloud::position_1d(int i) const {
  if (dim_ != 1 || coords_.empty()) throw std::logic_error("position_1d: not a 1-D cloud");
  return coords_[static_cast<std::size_t>(i)][0];
}

const std::vector<double>& PointCloud::coords_of(int i) const {
  if (coords_.empty()) throw std::logic_error("coords_of: matrix cloud has no coordinates");
  return coords_[static_cast<std::size_t>(i)];
}

double PointCloud::min_positive_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      double d = dist(i, j);
      if (d > 0.0 && d < best) best = d;
    }
  return best;
}

double PointCloud::diameter() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) best = std::max(best, dist(i, j));
  return best;
}

MetricCheckReport check_metric(const PointCloud& cloud, std::uint64_t seed) {
  MetricCheckReport rep;
  int n = cloud.size();
  for (int i = 0; i < n && rep.diagonal_ok; ++i)
    if (cloud.dist(i, i) != 0.0) rep.diagonal_ok = false;
  for (int i = 0; i < n && rep.symmetric_ok; ++i)
    for (int j = i + 1; j < n; ++j)
      if (cloud.dist(i, j) != cloud.dist(j, i)) {
        rep.symmetric_ok = false;
        break;
      }
  const double tol = 1e-12;
  if (n <= 64) {
    rep.exhaustive = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          ++rep.triples_checked;
          if (cloud.dist(i, k) > cloud.dist(i, j) + cloud.dist(j, k) + tol) rep.triangle_ok = false;
        }
  } else {
    SplitMix rng(splitmix64(seed ^ 0x7219au));
    for (int t = 0; t < 10000; ++t) {
      int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      int k = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      ++rep.triples_checked;
      if (cloud.dist(i, k) > cloud.dist(i, j) + cloud.dist(j, k) + tol) rep.triangle_ok = false;
    }
  }
  return rep;
}

Measure Measure::uniform(int n, double total_mass) {
  if (n <= 0) throw std::invalid_argument("measure needs at least one point");
  return Measure(std::vector<double>(static_cast<std::size_t>(n), total_mass / n));
}

Measure::Measure(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw std::invalid_argument("measure needs at least one point");
  for (double w : w_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be positive and finite");
    total_ += w;
  }
}

double Measure::mass_of(std::span<const int> ids) const {
  double s = 0.0;
  for (int i : ids) s += w_[static_cast<std::size_t>(i)];
  return s;
}

MeasureDoublingReport measure_doubling_report(const PointCloud& cloud, const Measure& mu,
                                              std::uint64_t seed, int max_samples) {
  MeasureDoublingReport rep;
  int n = cloud.size();
  auto ball_mass = [&](int c, double r) {
    double s = 0.0;
    for (int y = 0; y < n; ++y)
      if (cloud.dist(c, y) < r) s += mu.mass(y);
    return s;
  };
  auto consider = [&](int c, double r) {
    if (r <= 0.0) return;
    double small = ball_mass(c, r);
    if (small <= 0.0) return;
    rep.max_ratio = std::max(rep.max_ratio, ball_mass(c, 2.0 * r) / small);
    ++rep.balls_checked;
  };
  long long total = static_cast<long long>(n) * n;
  if (total <= max_samples) {
    for (int c = 0; c < n; ++c)
      for (int y = 0; y < n; ++y) consider(c, cloud.dist(c, y));
  } else {
    rep.exhaustive = false;
    SplitMix rng(splitmix64(seed ^ 0x3dbll));
    for (int t = 0; t < max_samples; ++t) {
      int c = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      int y = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      consider(c, cloud.dist(c, y));
    }
  }
  return rep;
}

double NestedNets::scale(int k) const {
  double s = 1.0;
  if (k >= 0)
    for (int i = 0; i < k; ++i) s *= delta;
  else
    for (int i = 0; i < -k; ++i) s /= delta;
  return s;
}

namespace {

// Exact minimum set cover by branch and bound; universe and candidate sets are
// bitsets over the ball's points. Greedy gives the initial upper bound.
struct CoverSolver {
  const std::vector<std::vector<std::uint64_t>>& sets;
  int words;
  int best;

  int popcount(const std::vector<std::uint64_t>& v) const {
    int c = 0;
    for (auto w : v) c += __builtin_popcountll(w);
    return c;
  }

  void solve(std::vector<std::uint64_t> uncovered, int used) {
    int rem = popcount(uncovered);
    if (rem == 0) {
      best = std::min(best, used);
      return;
    }
    if (used + 1 >= best) return;
    // lower bound: ceil(remaining / largest useful set)
    int largest = 0;
    for (const auto& s : sets) {
      int gain = 0;
      for (int w = 0; w < words; ++w) gain += __builtin_popcountll(s[static_cast<std::size_t>(w)] & uncovered[static_cast<std::size_t>(w)]);
      largest = std::max(largest, gain);
    }
    if (largest == 0) return;  // cannot cover
    if (used + (rem + largest - 1) / largest >= best) return;
    // branch on the uncovered element with fewest covering sets
    int pick = -1, pick_count = std::numeric_limits<int>::max();
    for (int w = 0; w < words; ++w) {
      std::uint64_t bits = uncovered[static_cast<std::size_t>(w)];
      while (bits) {
        int b = __builtin_ctzll(bits);
        bits &= bits - 1;
        int e = w * 64 + b;
        int cnt = 0;
        for (const auto& s : sets)
          if (s[static_cast<std::size_t>(w)] >> b & 1u) ++cnt;
        if (cnt < pick_count) {
          pick_count = cnt;
          pick = e;
        }
      }
    }
    if (pick < 0) return;
    int pw = pick / 64, pb = pick % 64;
    for (std::size_t si = 0; si < sets.size(); ++si) {
      if (!(sets[si][static_cast<std::size_t>(pw)] >> pb & 1u)) continue;
      std::vector<std::uint64_t> next = uncovered;
      for (int w = 0; w < words; ++w) next[static_cast<std::size_t>(w)] &= ~sets[si][static_cast<std::size_t>(w)];
      solve(std::move(next), used + 1);
    }
  }
};

}  // namespace

int min_halving_cover(const PointCloud& cloud, int center, double r) {
  int n = cloud.size();
  std::vector<int> universe;
  for (int y = 0; y < n; ++y)
    if (cloud.dist(center, y) <= r) universe.push_back(y);
  if (universe.empty()) return 0;
  int u = static_cast<int>(universe.size());
  int words = (u + 63) / 64;
  std::set<std::vector<std::uint64_t>> dedup;
  std::vector<std::vector<std::uint64_t>> sets;
  for (int c = 0; c < n; ++c) {
    std::vector<std::uint64_t> bits(static_cast<std::size_t>(words), 0);
    bool any = false;
    for (int e = 0; e < u; ++e)
      if (cloud.dist(c, universe[static_cast<std::size_t>(e)]) <= r / 2.0) {
        bits[static_cast<std::size_t>(e / 64)] |= 1ull << (e % 64);
        any = true;
      }
    if (any && dedup.insert(bits).second) sets.push_back(std::move(bits));
  }
  // greedy upper bound
  std::vector<std::uint64_t> uncovered(static_cast<std::size_t>(words), 0);
  for (int e = 0; e < u; ++e) uncovered[static_cast<std::size_t>(e / 64)] |= 1ull << (e % 64);
  auto work = uncovered;
  int greedy = 0;
  while (true) {
    int rem = 0;
    for (auto w : work) rem += __builtin_popcountll(w);
    if (rem == 0) break;
    int bi = -1, bg = 0;
    for (std::size_t si = 0; si < sets.size(); ++si) {
      int g = 0;
      for (int w = 0; w < words; ++w) g += __builtin_popcountll(sets[si][static_cast<std::size_t>(w)] & work[static_cast<std::size_t>(w)]);
      if (g > bg) {
        bg = g;
        bi = static_cast<int>(si);
      }
    }
    if (bi < 0) return std::numeric_limits<int>::max();  // uncoverable (cannot happen: center covers itself)
    for (int w = 0; w < words; ++w) work[static_cast<std::size_t>(w)] &= ~sets[static_cast<std::size_t>(bi)][static_cast<std::size_t>(w)];
    ++greedy;
  }
  CoverSolver solver{sets, words, greedy};
  solver.solve(uncovered, 0);
  return solver.best;
}

DoublingReport estimate_doubling_report(const PointCloud& cloud, std::uint64_t seed,
                                        int max_samples) {
  DoublingReport rep;
  int n = cloud.size();
  rep.balls_total = static_cast<long long>(n) * n;
  if (n == 1) return rep;
  // distinct radii per center would still be n^2 pairs; dedupe globally
  if (n <= 128) {
    for (int c = 0; c < n; ++c) {
      std::set<double> radii;
      for (int y = 0; y < n; ++y)
        if (y != c) radii.insert(cloud.dist(c, y));
      for (double r : radii) {
        rep.M = std::max(rep.M, min_halving_cover(cloud, c, r));
        ++rep.balls_checked;
      }
    }
  } else {
    rep.exhaustive = false;
    SplitMix rng(splitmix64(seed ^ 0xd0b1u));
    for (int t = 0; t < max_samples; ++t) {
      int c = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      int y = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
      if (y == c) continue;
      rep.M = std::max(rep.M, min_halving_cover(cloud, c, cloud.dist(c, y)));
      ++rep.balls_checked;
    }
  }
  return rep;
}

int estimate_doubling_constant(const PointCloud& cloud, std::uint64_t seed) {
  return estimate_doubling_report(cloud, seed).M;
}

std::vector<int> natural_order(int n) {
  std::vector<int> o(static_cast<std::size_t>(n));
  std::iota(o.begin(), o.end(), 0);
  return o;
}

SeparatedSet greedy_maximal_separated(const PointCloud& cloud, double delta,
                                      std::span<const int> order) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (static_cast<int>(order.size()) != cloud.size())
    throw std::invalid_argument("order must be a permutation of all point ids");
  SeparatedSet out;
  out.separation = delta;
  out.maximal = true;
  std::vector<int> kept;
  for (int p : order) {
    bool ok = true;
    for (int q : kept)
      if (cloud.dist(p, q) < delta) {
        ok = false;
        break;
      }
    if (ok) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end());
  out.ids = std::move(kept);
  return out;
}

SeparatedSet greedy_maximal_separated(const PointCloud& cloud, double delta) {
  auto ord = natural_order(cloud.size());
  return greedy_maximal_separated(cloud, delta, ord);
}

bool is_separated(const PointCloud& cloud, std::span<const int> ids, double delta) {
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = a + 1; b < ids.size(); ++b)
      if (cloud.dist(ids[a], ids[b]) < delta) return false;
  return true;
}

bool is_maximal_separated(const PointCloud& cloud, std::span<const int> ids, double delta) {
  if (!is_separated(cloud, ids, delta)) return false;
  for (int p = 0; p < cloud.size(); ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (int q : ids) best = std::min(best, cloud.dist(p, q));
    if (!(best < delta)) return false;
  }
  return true;
}

std::vector<SeparatedSet> split_separated(const PointCloud& cloud, const SeparatedSet& Z,
                                          double D1, double D2) {
  if (!(D1 > 0.0) || D2 < D1) throw std::invalid_argument("split_separated needs D2 >= D1 > 0");
  if (!is_separated(cloud, Z.ids, D1))
    throw std::invalid_argument("input set is not D1-separated");
  std::vector<SeparatedSet> parts;
  std::vector<int> remaining = Z.ids;  // ascending ids = greedy order
  while (!remaining.empty()) {
    SeparatedSet part;
    part.separation = D2;
    std::vector<int> next;
    for (int p : remaining) {
      bool ok = true;
      for (int q : part.ids)
        if (cloud.dist(p, q) < D2) {
          ok = false;
          break;
        }
      if (ok)
        part.ids.push_back(p);
      else
        next.push_back(p);
    }
    parts.push_back(std::move(part));
    remaining = std::move(next);
  }
  return parts;
}

int packing_bound(const PointCloud& cloud, const SeparatedSet& Z, double D2) {
  int best = 0;
  for (int x : Z.ids) {
    int c = 0;
    for (int z : Z.ids)
      if (cloud.dist(x, z) < D2) ++c;
    best = std::max(best, c);
  }
  return best;
}

NestedNets build_nested_nets(const PointCloud& cloud, double delta, int k_min, int k_max,
                             std::span<const int> order) {
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("delta must lie in (0,1)");
  if (k_min > k_max) throw std::invalid_argument("k_min must not exceed k_max");
  NestedNets nets;
  nets.delta = delta;
  nets.k_min = k_min;
  nets.k_max = k_max;
  std::vector<int> forced;
  for (int k = k_min; k <= k_max; ++k) {
    double scale = nets.scale(k);
    SeparatedSet level;
    level.separation = scale;
    level.maximal = true;
    std::vector<int> kept = forced;  // nets of the previous level, already separated at coarser scale
    auto admissible = [&](int p) {
      for (int q : kept)
        if (cloud.dist(p, q) < scale) return false;
      return true;
    };
    for (int p : order)
      if (admissible(p)) kept.push_back(p);
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    level.ids = kept;
    forced = kept;
    nets.levels.push_back(std::move(level));
  }
  return nets;
}

NestedNets build_nested_nets(const PointCloud& cloud, double delta, int k_min, int k_max) {
  auto ord = natural_order(cloud.size());
  return build_nested_nets(cloud, delta, k_min, k_max, ord);
}

bool nets_are_nested(const NestedNets& nets) {
  for (std::size_t l = 0; l + 1 < nets.levels.size(); ++l) {
    const auto& a = nets.levels[l].ids;
    const auto& b = nets.levels[l + 1].ids;
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
  }
  return true;
}

std::vector<int> boundary_layer(const PointCloud& cloud, std::span<const int> A, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  int n = cloud.size();
  std::vector<char> in_A(static_cast<std::size_t>(n), 0);
  for (int a : A) {
    if (a < 0 || a >= n) throw std::invalid_argument("boundary_layer: id outside cloud");
    in_A[static_cast<std::size_t>(a)] = 1;
  }
  std::vector<int> side_a, side_b;
  for (int p = 0; p < n; ++p) (in_A[static_cast<std::size_t>(p)] ? side_a : side_b).push_back(p);
  if (side_a.empty() || side_b.empty()) return {};  // complement empty: distances are +inf
  auto dist_to = [&](int p, const std::vector<int>& S) {
    double best = std::numeric_limits<double>::infinity();
    for (int q : S) best = std::min(best, cloud.dist(p, q));
    return best;
  };
  std::vector<int> out;
  for (int p : side_a)
    if (dist_to(p, side_b) < eps) out.push_back(p);
  for (int p : side_b)
    if (dist_to(p, side_a) < eps) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dyadic
