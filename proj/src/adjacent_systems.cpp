#include "dyadic/adjacent_systems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dyadic/rng.hpp"
#include "dyadic/sparse_decomposition.hpp"

namespace dyadic {

std::vector<int> ball_points(const PointCloud& cloud, int center, double radius) {
  std::vector<int> out;
  for (int p = 0; p < cloud.size(); ++p)
    if (cloud.dist(center, p) < radius) out.push_back(p);
  return out;
}

AdjacentFamily build_adjacent_family(const PointCloud& cloud, double delta, int K,
                                     FamilyMode mode, int k_min, int k_max, std::uint64_t seed,
                                     double capacity_c) {
  if (K < 1) throw std::invalid_argument("family needs K >= 1");
  int cap = static_cast<int>(std::ceil(capacity_c / delta));
  if (K > cap) throw std::invalid_argument("K exceeds the configured ceil(c/delta) capacity");
  AdjacentFamily fam;
  fam.delta = delta;
  fam.K = K;
  fam.capacity_c = capacity_c;
  fam.mode = mode;
  for (int omega = 1; omega <= K; ++omega) {
    if (mode == FamilyMode::canonical1d) {
      if (!cloud.is_uniform_torus_grid())
        throw std::invalid_argument("canonical1d family needs a uniform torus grid");
      double t = static_cast<double>(omega - 1) / K;
      fam.systems.push_back(build_canonical_system_1d(cloud, delta, k_min, k_max, t));
      fam.params.push_back("translation=" + std::to_string(t));
    } else {
      std::uint64_t s = splitmix64(seed ^ (0x5eedull + static_cast<std::uint64_t>(omega)));
      auto order = natural_order(cloud.size());
      SplitMix rng(s);
      shuffle(order, rng);
      auto nets = build_nested_nets(cloud, delta, k_min, k_max, order);
      fam.systems.push_back(build_dyadic_system(cloud, nets));
      fam.params.push_back("order_seed=" + std::to_string(s));
    }
  }
  return fam;
}

namespace {

bool contained_in_cube(const std::vector<int>& pts, const Cube& q) {
  for (int p : pts)
    if (!std::binary_search(q.members.begin(), q.members.end(), p)) return false;
  return true;
}

}  // namespace

HostSearchResult find_host(const PointCloud& cloud, const AdjacentFamily& family,
                           std::span<const BallSpec> balls, int p, double slack) {
  if (balls.empty()) throw std::invalid_argument("find_host needs at least one ball");
  if (p < 0) throw std::invalid_argument("find_host needs p >= 0");
  if (!(slack >= 1.0)) throw std::invalid_argument("find_host needs slack >= 1");
  const DyadicSystem& ref = family.system(1);
  double inv2 = 1.0 / (family.delta * family.delta);

  std::vector<std::vector<int>> pts, dilated;
  for (const auto& b : balls) {
    if (!(b.radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
    // scale range: the deepest level must obey (ii), otherwise no level can
    if (ref.side(ref.k_max()) > slack * inv2 * b.radius)
      throw std::invalid_argument("ball radius below the family's realizable scale range");
    pts.push_back(ball_points(cloud, b.center, b.radius));
    double dr = b.radius;
    for (int i = 0; i < p; ++i) dr /= family.delta;
    dilated.push_back(ball_points(cloud, b.center, dr));
  }

  HostSearchResult res;
  for (int omega = 1; omega <= family.K; ++omega) {
    const DyadicSystem& sys = family.system(omega);
    HostAssignment assign;
    assign.omega = omega;
    bool all_ok = true;
    for (std::size_t bi = 0; bi < balls.size() && all_ok; ++bi) {
      bool hosted = false;
      std::string detail;
      for (int k = sys.k_max(); k >= sys.k_min(); --k) {
        if (k - p < sys.k_min()) continue;
        if (sys.side(k) > slack * inv2 * balls[bi].radius) {
          detail += "l" + std::to_string(k) + ":size ";
          continue;
        }
        CubeId q = sys.cube_of(k, balls[bi].center);
        if (!contained_in_cube(pts[bi], sys.cube(q))) {
          detail += "l" + std::to_string(k) + ":i ";
          continue;
        }
        CubeId anc = sys.ancestor(q, p);
        if (!contained_in_cube(dilated[bi], sys.cube(anc))) {
          detail += "l" + std::to_string(k) + ":iii ";
          continue;
        }
        assign.entries.push_back(HostEntry{q, anc});
        hosted = true;
        break;
      }
      if (!hosted) {
        all_ok = false;
        res.diagnostics.push_back(HostDiagnostic{omega, static_cast<int>(bi), detail});
      }
    }
    if (all_ok) {
      res.found = std::move(assign);
      return res;
    }
  }
  return res;
}

HostPairResult host_pair_for_cubes(const PointCloud& cloud, const AdjacentFamily& family,
                                   const DyadicSystem& base, CubeId q1, CubeId q2, double m) {
  if (q1.level != q2.level) throw std::invalid_argument("host_pair needs same-level cubes");
  if (!(m >= 1.0)) throw std::invalid_argument("host_pair needs m >= 1");
  if (base.delta() != family.delta)
    throw std::invalid_argument("base system and family must share delta");
  int k = q1.level;
  int T = compute_T(m, family.delta);
  if (k - 3 < family.k_min() || k - 3 - T < family.k_min())
    throw std::out_of_range("family too shallow for level k-3-T hosts");

  double r = base.ball_radius(k);
  int x1 = base.cube(q1).center;
  int x2 = base.cube(q2).center;
  auto b1 = ball_points(cloud, x1, r);
  auto b2 = ball_points(cloud, x2, r);
  auto big = ball_points(cloud, x1, 2.0 * m * r);

  HostPairResult res;
  for (int omega = 1; omega <= family.K; ++omega) {
    const DyadicSystem& sys = family.system(omega);
    CubeId P1 = sys.cube_of(k - 3, x1);
    CubeId P2 = sys.cube_of(k - 3, x2);
    CubeId Pstar = sys.ancestor(P1, T);
    std::string detail;
    if (!contained_in_cube(b1, sys.cube(P1))) detail += "B_Q1 ";
    if (!contained_in_cube(b2, sys.cube(P2))) detail += "B_Q2 ";
    if (!contained_in_cube(big, sys.cube(Pstar))) detail += "2mB_Q1 ";
    if (detail.empty()) {
      res.omega = omega;
      res.P1 = P1;
      res.P2 = P2;
      res.Pstar = Pstar;
      return res;
    }
    res.diagnostics.push_back(HostDiagnostic{omega, 0, detail});
  }
  return res;
}

}  // namespace dyadic
