// Families of adjacent dyadic systems and the verified search for a common
// host system covering given balls.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dyadic/dyadic_cubes.hpp"
#include "dyadic/metric_core.hpp"

namespace dyadic {

enum class FamilyMode { canonical1d, random_nets };

struct AdjacentFamily {
  double delta = 0.5;
  int K = 1;
  double capacity_c = 2.0;  // invariant K <= ceil(capacity_c / delta)
  FamilyMode mode = FamilyMode::canonical1d;
  std::vector<DyadicSystem> systems;     // omega = 1..K at index omega-1
  std::vector<std::string> params;       // per-omega construction parameter

  const DyadicSystem& system(int omega) const { return systems[static_cast<std::size_t>(omega - 1)]; }
  int k_min() const { return systems.front().k_min(); }
  int k_max() const { return systems.front().k_max(); }
};

// canonical1d: system omega is the grid translated by (omega-1)/K (the
// one-third trick for K=3); random_nets: greedy nets in an order shuffled by a
// seed derived from omega.
AdjacentFamily build_adjacent_family(const PointCloud& cloud, double delta, int K,
                                     FamilyMode mode, int k_min, int k_max,
                                     std::uint64_t seed = 0, double capacity_c = 2.0);

struct BallSpec {
  int center = 0;
  double radius = 0.0;
};

struct HostEntry {
  CubeId cube;      // Q_B
  CubeId ancestor;  // Q_B^{(p)}
};

struct HostAssignment {
  int omega = 0;
  std::vector<HostEntry> entries;  // one per ball
};

struct HostDiagnostic {
  int omega = 0;
  int ball = 0;         // first ball this system failed to host
  std::string detail;   // per-level condition that broke first
};

struct HostSearchResult {
  std::optional<HostAssignment> found;
  std::vector<HostDiagnostic> diagnostics;  // per failed omega
};

// Exhaustive search over systems and levels for cubes with
//   (i)  cloud cap B  subset  Q_B,
//   (ii) l(Q_B) <= slack * delta^-2 * r(B),
//   (iii) cloud cap delta^-p B  subset  Q_B^{(p)};
// smallest omega wins, deepest admissible level per ball. NotFound is a
// value; a radius no level can match under (ii) is an error.
HostSearchResult find_host(const PointCloud& cloud, const AdjacentFamily& family,
                           std::span<const BallSpec> balls, int p, double slack);

struct HostPairResult {
  std::optional<int> omega;
  CubeId P1, P2, Pstar;
  std::vector<HostDiagnostic> diagnostics;
};

// Hosts P1, P2 at level k-3 for B_{Q1}, B_{Q2} plus the T-step ancestor
// covering 2m B_{Q1}, where T is minimal with 2 m delta^T <= 1.
HostPairResult host_pair_for_cubes(const PointCloud& cloud, const AdjacentFamily& family,
                                   const DyadicSystem& base, CubeId q1, CubeId q2, double m);

// Cloud points strictly inside B(center, radius).
std::vector<int> ball_points(const PointCloud& cloud, int center, double radius);

}  // namespace dyadic
