#include "dyadic/dyadic_cubes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dyadic {

DyadicSystem::DyadicSystem(double delta, int k_min, int k_max, int n_points)
    : delta_(delta), k_min_(k_min), k_max_(k_max), n_points_(n_points) {
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("delta must lie in (0,1)");
  if (k_min > k_max) throw std::invalid_argument("k_min must not exceed k_max");
  int L = k_max - k_min + 1;
  levels_.resize(static_cast<std::size_t>(L));
  point_cube_.resize(static_cast<std::size_t>(L));
  sides_.resize(static_cast<std::size_t>(L));
  for (int k = k_min; k <= k_max; ++k) {
    double s = 1.0;
    if (k >= 0)
      for (int i = 0; i < k; ++i) s *= delta;
    else
      for (int i = 0; i < -k; ++i) s /= delta;
    sides_[offset(k)] = s;
  }
}

std::size_t DyadicSystem::offset(int k) const {
  if (k < k_min_ || k > k_max_) throw std::out_of_range("level outside system range");
  return static_cast<std::size_t>(k - k_min_);
}

CubeId DyadicSystem::ancestor(CubeId id, int p) const {
  if (p < 0) throw std::invalid_argument("ancestor expects p >= 0");
  if (id.level - p < k_min_) throw std::out_of_range("ancestor level underflows the system");
  CubeId cur = id;
  for (int step = 0; step < p; ++step) {
    int par = cube(cur).parent;
    cur = CubeId{cur.level - 1, par};
  }
  return cur;
}

void DyadicSystem::finalize() {
  for (int k = k_min_; k <= k_max_; ++k) {
    auto& lvl = levels_[offset(k)];
    auto& table = point_cube_[offset(k)];
    table.assign(static_cast<std::size_t>(n_points_), -1);
    for (auto& q : lvl) {
      std::sort(q.members.begin(), q.members.end());
      std::sort(q.children.begin(), q.children.end());
      if (q.members.empty()) throw std::logic_error("cube with no members");
      for (int p : q.members) {
        if (table[static_cast<std::size_t>(p)] != -1) throw std::logic_error("level is not a partition");
        table[static_cast<std::size_t>(p)] = q.index;
      }
    }
    for (int p = 0; p < n_points_; ++p)
      if (table[static_cast<std::size_t>(p)] == -1) throw std::logic_error("level does not cover the cloud");
  }
}

DyadicSystem build_dyadic_system(const PointCloud& cloud, const NestedNets& nets) {
  if (!nets_are_nested(nets)) throw std::invalid_argument("nets violate nesting");
  if (nets.levels.empty()) throw std::invalid_argument("nets are empty");
  DyadicSystem sys(nets.delta, nets.k_min, nets.k_max, cloud.size());

  // closest-center assignment, ties to the smaller center id
  auto closest = [&](int p, const std::vector<int>& centers) {
    int best = centers.front();
    double bd = cloud.dist(p, best);
    for (int c : centers) {
      double d = cloud.dist(p, c);
      if (d < bd || (d == bd && c < best)) {
        bd = d;
        best = c;
      }
    }
    return best;
  };

  for (int k = nets.k_min; k <= nets.k_max; ++k) {
    const auto& ids = nets.at_level(k).ids;  // sorted: index within level = rank
    auto& lvl = sys.mutable_level(k);
    lvl.resize(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      lvl[i].level = k;
      lvl[i].index = static_cast<int>(i);
      lvl[i].center = ids[i];
    }
  }

  // bottom level: Voronoi cells of the finest net
  {
    const auto& ids = nets.at_level(nets.k_max).ids;
    auto& lvl = sys.mutable_level(nets.k_max);
    for (int p = 0; p < cloud.size(); ++p) {
      int c = closest(p, ids);
      int idx = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), c) - ids.begin());
      lvl[static_cast<std::size_t>(idx)].members.push_back(p);
    }
  }

  // parent links between consecutive levels, members accumulated upwards
  for (int k = nets.k_max; k > nets.k_min; --k) {
    const auto& coarse_ids = nets.at_level(k - 1).ids;
    auto& fine = sys.mutable_level(k);
    auto& coarse = sys.mutable_level(k - 1);
    for (auto& q : fine) {
      int c = closest(q.center, coarse_ids);
      int pidx = static_cast<int>(std::lower_bound(coarse_ids.begin(), coarse_ids.end(), c) -
                                  coarse_ids.begin());
      q.parent = pidx;
      coarse[static_cast<std::size_t>(pidx)].children.push_back(q.index);
      auto& cm = coarse[static_cast<std::size_t>(pidx)].members;
      cm.insert(cm.end(), q.members.begin(), q.members.end());
    }
  }

  sys.finalize();
  return sys;
}

DyadicSystem build_canonical_system_1d(const PointCloud& cloud, double delta, int k_min,
                                       int k_max, double translation) {
  if (!cloud.is_uniform_torus_grid())
    throw std::invalid_argument("canonical 1-D construction needs a uniform torus grid");
  double inv = 1.0 / delta;
  int r = static_cast<int>(std::llround(inv));
  if (std::abs(inv - r) > 1e-9 || r < 2)
    throw std::invalid_argument("canonical 1-D construction needs integer 1/delta");
  int n = cloud.size();
  DyadicSystem sys(delta, k_min, k_max, n);

  auto cells_at = [&](int k) -> long long {
    if (k <= 0) return 1;
    long long c = 1;
    for (int i = 0; i < k; ++i) c *= r;
    return c;
  };
  long long bottom_cells = cells_at(k_max);
  if (bottom_cells > n)
    throw std::invalid_argument("k_max too deep: cells would be empty at the grid spacing");

  // keep boundaries off the grid points: snap the translation to the grid and
  // push it half a spacing to the right
  double h = cloud.grid_spacing();
  double t = (std::floor(translation * n) + 0.5) * h;

  double bottom_side = sys.side(k_max);
  std::vector<int> bottom_cell(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    double frac = cloud.position_1d(p) - t;
    frac -= std::floor(frac);
    long long j = static_cast<long long>(std::floor(frac / bottom_side));
    if (j >= bottom_cells) j = bottom_cells - 1;
    bottom_cell[static_cast<std::size_t>(p)] = static_cast<int>(j);
  }

  // members per level follow from integer division of the bottom cell index,
  // so nesting is exact by construction
  std::vector<long long> cells(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) {
    long long nc = cells_at(k);
    cells[static_cast<std::size_t>(k - k_min)] = nc;
    auto& lvl = sys.mutable_level(k);
    lvl.resize(static_cast<std::size_t>(nc));
    long long shrink = bottom_cells / nc;
    for (int p = 0; p < n; ++p) {
      long long j = bottom_cell[static_cast<std::size_t>(p)] / shrink;
      lvl[static_cast<std::size_t>(j)].members.push_back(p);
    }
    for (long long j = 0; j < nc; ++j) {
      auto& q = lvl[static_cast<std::size_t>(j)];
      q.level = k;
      q.index = static_cast<int>(j);
      if (k > k_min) {
        long long coarse = cells[static_cast<std::size_t>(k - 1 - k_min)];
        q.parent = static_cast<int>(j / (nc / coarse));
        sys.mutable_level(k - 1)[static_cast<std::size_t>(q.parent)].children.push_back(q.index);
      }
      if (q.members.empty()) throw std::logic_error("empty canonical cell");
      // center: member closest to the cell midpoint; ties go to the member on
      // the left so centers stay side(k)-separated across the wrap cell
      double mid = t + (static_cast<double>(j) + 0.5) * sys.side(k);
      mid -= std::floor(mid);
      int best = q.members.front();
      double best_off = 2.0;
      for (int p : q.members) {
        double off = cloud.position_1d(p) - mid;
        off -= std::round(off);  // signed circular offset in [-1/2, 1/2]
        if (std::abs(off) < std::abs(best_off) ||
            (std::abs(off) == std::abs(best_off) && off < best_off)) {
          best_off = off;
          best = p;
        }
      }
      q.center = best;
    }
  }

  sys.set_canonical_1d(t);
  sys.finalize();
  return sys;
}

SystemCheckReport verify_dyadic_system(const PointCloud& cloud, const DyadicSystem& sys) {
  SystemCheckReport rep;
  int n = cloud.size();

  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (const auto& q : sys.level(k)) {
      if (q.members.empty()) rep.members_nonempty = false;
      if (!std::binary_search(q.members.begin(), q.members.end(), q.center))
        rep.centers_in_members = false;
      for (int p : q.members) ++seen[static_cast<std::size_t>(p)];
      if (k < sys.k_max()) {
        std::size_t child_total = 0;
        for (int ci : q.children) {
          const auto& c = sys.cube(k + 1, ci);
          child_total += c.members.size();
          for (int p : c.members)
            if (!std::binary_search(q.members.begin(), q.members.end(), p))
              rep.children_partition_parent = false;
        }
        if (child_total != q.members.size()) rep.children_partition_parent = false;
      }
    }
    for (int p = 0; p < n; ++p)
      if (seen[static_cast<std::size_t>(p)] != 1) rep.levels_partition = false;
  }

  // ii) and iv) through the point->cube tables: every pair of cubes with a
  // common point must be in the ancestor relation, and ancestors must agree
  // pointwise (union of level-j descendants of Q is then exactly Q).
  for (int j = sys.k_min(); j <= sys.k_max(); ++j) {
    for (int k = sys.k_min(); k < j; ++k) {
      for (int p = 0; p < n; ++p) {
        CubeId fine{j, sys.cube_index_of(j, p)};
        CubeId coarse{k, sys.cube_index_of(k, p)};
        ++rep.pairs_checked;
        if (sys.ancestor(fine, j - k) != coarse) {
          rep.pairs_nested_or_disjoint = false;
          rep.descendant_unions = false;
        }
      }
    }
  }
  return rep;
}

SandwichReport verify_sandwich(const PointCloud& cloud, const DyadicSystem& sys) {
  SandwichReport rep;
  int n = cloud.size();
  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    double side = sys.side(k);
    for (const auto& q : sys.level(k)) {
      ++rep.cubes_checked;
      double r_out = 0.0;
      for (int p : q.members) r_out = std::max(r_out, cloud.dist(q.center, p));
      rep.max_outer_ratio = std::max(rep.max_outer_ratio, r_out / side);
      if (static_cast<int>(q.members.size()) == n) continue;  // whole cloud: inner ratio vacuous
      double r_in = std::numeric_limits<double>::infinity();
      for (int p = 0; p < n; ++p)
        if (!std::binary_search(q.members.begin(), q.members.end(), p))
          r_in = std::min(r_in, cloud.dist(q.center, p));
      rep.min_inner_ratio = std::min(rep.min_inner_ratio, r_in / side);
    }
  }
  rep.pass = rep.min_inner_ratio >= 0.2 - 1e-12 && rep.max_outer_ratio <= 3.0 + 1e-12;
  return rep;
}

}  // namespace dyadic
