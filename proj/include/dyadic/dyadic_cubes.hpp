// Dyadic cube systems over a point cloud: one cube per net point per level,
// each level partitioning the cloud, cubes nested across levels.
#pragma once

#include <limits>
#include <string>
#include <vector>

#include "dyadic/metric_core.hpp"

namespace dyadic {

struct CubeId {
  int level = 0;
  int index = 0;
  friend bool operator==(const CubeId&, const CubeId&) = default;
  friend auto operator<=>(const CubeId&, const CubeId&) = default;
};

struct Cube {
  int level = 0;
  int index = 0;           // position within the level, ordered by center id
  int center = -1;         // point id
  int parent = -1;         // index within level-1, -1 at the top level
  std::vector<int> children;  // indices within level+1
  std::vector<int> members;   // sorted point ids
};

class DyadicSystem {
 public:
  DyadicSystem(double delta, int k_min, int k_max, int n_points);

  double delta() const { return delta_; }
  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  int n_points() const { return n_points_; }
  // delta^k, computed once per level so every consumer compares equal values
  double side(int k) const { return sides_[offset(k)]; }
  double ball_radius(int k) const { return 3.0 * side(k); }  // r(B_Q)

  int level_count(int k) const { return static_cast<int>(levels_[offset(k)].size()); }
  const std::vector<Cube>& level(int k) const { return levels_[offset(k)]; }
  const Cube& cube(CubeId id) const { return levels_[offset(id.level)][static_cast<std::size_t>(id.index)]; }
  const Cube& cube(int k, int index) const { return cube(CubeId{k, index}); }

  // index of the cube containing point p at level k
  int cube_index_of(int k, int p) const { return point_cube_[offset(k)][static_cast<std::size_t>(p)]; }
  CubeId cube_of(int k, int p) const { return CubeId{k, cube_index_of(k, p)}; }

  // unique ancestor at level id.level - p
  CubeId ancestor(CubeId id, int p) const;

  bool canonical_1d() const { return canonical_1d_; }
  double translation() const { return translation_; }

  // construction hooks (builders only)
  std::vector<Cube>& mutable_level(int k) { return levels_[offset(k)]; }
  void finalize();  // sorts members, rebuilds point->cube tables, sanity checks
  void set_canonical_1d(double translation) {
    canonical_1d_ = true;
    translation_ = translation;
  }

 private:
  std::size_t offset(int k) const;
  double delta_;
  int k_min_, k_max_, n_points_;
  bool canonical_1d_ = false;
  double translation_ = 0.0;
  std::vector<double> sides_;
  std::vector<std::vector<Cube>> levels_;
  std::vector<std::vector<int>> point_cube_;
};

// Closest-center assignment chains over nested nets; ties to the smaller
// center id. Rejects nets that are not nested.
DyadicSystem build_dyadic_system(const PointCloud& cloud, const NestedNets& nets);

// Exact half-open interval system on a uniform torus grid, translated by
// `translation` (snapped off the grid points). Requires integer 1/delta.
DyadicSystem build_canonical_system_1d(const PointCloud& cloud, double delta, int k_min,
                                       int k_max, double translation);

struct SystemCheckReport {
  bool levels_partition = true;       // property i)
  bool pairs_nested_or_disjoint = true;  // property ii)
  bool descendant_unions = true;      // property iv), all m >= 1
  bool members_nonempty = true;
  bool centers_in_members = true;
  bool children_partition_parent = true;
  long long pairs_checked = 0;
  bool ok() const {
    return levels_partition && pairs_nested_or_disjoint && descendant_unions &&
           members_nonempty && centers_in_members && children_partition_parent;
  }
};
SystemCheckReport verify_dyadic_system(const PointCloud& cloud, const DyadicSystem& sys);

// Property iii): largest ball inside each cube and smallest ball around it,
// as multiples of delta^k. Cubes covering the whole cloud are vacuous for the
// inner ratio.
struct SandwichReport {
  double min_inner_ratio = std::numeric_limits<double>::infinity();
  double max_outer_ratio = 0.0;
  int cubes_checked = 0;
  bool pass = true;  // inner >= 1/5 and outer <= 3
};
SandwichReport verify_sandwich(const PointCloud& cloud, const DyadicSystem& sys);

}  // namespace dyadic
