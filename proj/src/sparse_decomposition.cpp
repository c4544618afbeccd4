#include "dyadic/sparse_decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace dyadic {

TauMap identity_tau(const DyadicSystem& sys) {
  TauMap tau;
  tau.m = 1.0;
  tau.c_tau = 1.0;
  tau.k_min = sys.k_min();
  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    std::vector<int> t(static_cast<std::size_t>(sys.level_count(k)));
    for (int i = 0; i < sys.level_count(k); ++i) t[static_cast<std::size_t>(i)] = i;
    tau.target.push_back(std::move(t));
  }
  return tau;
}

TauCheckReport validate_tau(const PointCloud& cloud, const DyadicSystem& sys, const Measure& mu,
                            const TauMap& tau, double c_tau_budget) {
  TauCheckReport rep;
  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    std::vector<char> hit(static_cast<std::size_t>(sys.level_count(k)), 0);
    double radius = tau.m * sys.ball_radius(k);
    for (int i = 0; i < sys.level_count(k); ++i) {
      int t = tau.apply_index(k, i);
      if (t < 0 || t >= sys.level_count(k)) {
        rep.injective = false;
        continue;
      }
      if (hit[static_cast<std::size_t>(t)]) rep.injective = false;
      hit[static_cast<std::size_t>(t)] = 1;
      const Cube& q = sys.cube(k, i);
      const Cube& tq = sys.cube(k, t);
      double far = 0.0;
      for (int y : tq.members) far = std::max(far, cloud.dist(q.center, y));
      rep.measured_dilation = std::max(rep.measured_dilation, far / sys.ball_radius(k));
      if (!(far < radius) && !(far == 0.0)) rep.inclusion_ok = false;
      double ma = mu.mass_of(q.members), mb = mu.mass_of(tq.members);
      double c = std::max(ma / mb, mb / ma);
      rep.measured_c = std::max(rep.measured_c, c);
      if (c > c_tau_budget + 1e-12) rep.measure_ok = false;
    }
  }
  return rep;
}

int compute_T(double m, double delta) {
  if (!(m >= 1.0)) throw std::invalid_argument("compute_T needs m >= 1");
  if (!(delta > 0.0) || delta >= 1.0) throw std::invalid_argument("delta must lie in (0,1)");
  int T = 1;
  double v = 2.0 * m * delta;
  while (v > 1.0) {
    v *= delta;
    ++T;
    if (T > 4096) throw std::logic_error("compute_T runaway");
  }
  return T;
}

namespace {

// sorted-vector intersection test with early exit
bool sets_intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return false;
}

struct LevelConflicts {
  // dilated balls 3 delta^-3 B_R as cloud point sets, for R = Q and tau(Q)
  std::vector<std::vector<int>> ball_q;
  std::vector<std::vector<int>> ball_tq;
  std::vector<int> tau_of;

  // the lemma's pair condition for distinct cubes a != b
  bool mixed(int a, int b) const {
    bool bad = false;
    if (tau_of[static_cast<std::size_t>(b)] != a)  // skip the pair when Q_a == tau(Q_b)
      bad = bad || sets_intersect(ball_q[static_cast<std::size_t>(a)], ball_tq[static_cast<std::size_t>(b)]);
    if (tau_of[static_cast<std::size_t>(a)] != b)
      bad = bad || sets_intersect(ball_q[static_cast<std::size_t>(b)], ball_tq[static_cast<std::size_t>(a)]);
    return bad;
  }
  bool tau_tau(int a, int b) const {
    return sets_intersect(ball_tq[static_cast<std::size_t>(a)], ball_tq[static_cast<std::size_t>(b)]);
  }
  bool direct(int a, int b) const {
    return sets_intersect(ball_q[static_cast<std::size_t>(a)], ball_q[static_cast<std::size_t>(b)]);
  }
  bool any(int a, int b) const { return direct(a, b) || mixed(a, b) || tau_tau(a, b); }
};

// split each part further so no two members of a sub-part conflict
template <typename Pred>
std::vector<std::vector<int>> refine(const std::vector<std::vector<int>>& parts, Pred&& conflict) {
  std::vector<std::vector<int>> out;
  for (const auto& part : parts) {
    std::vector<std::vector<int>> colors;
    for (int item : part) {
      bool placed = false;
      for (auto& color : colors) {
        bool ok = true;
        for (int other : color)
          if (conflict(item, other)) {
            ok = false;
            break;
          }
        if (ok) {
          color.push_back(item);
          placed = true;
          break;
        }
      }
      if (!placed) colors.push_back({item});
    }
    for (auto& c : colors) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<std::vector<CubeId>> partition_lemma32(const PointCloud& cloud,
                                                   const DyadicSystem& sys, const TauMap& tau) {
  std::size_t max_parts = 0;
  std::vector<std::vector<std::vector<int>>> per_level;  // level -> part -> cube indices
  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    int nc = sys.level_count(k);
    double dil_radius = 3.0 / (sys.delta() * sys.delta() * sys.delta()) * sys.ball_radius(k);

    LevelConflicts lc;
    lc.ball_q.resize(static_cast<std::size_t>(nc));
    lc.ball_tq.resize(static_cast<std::size_t>(nc));
    lc.tau_of.resize(static_cast<std::size_t>(nc));
    for (int i = 0; i < nc; ++i) {
      lc.tau_of[static_cast<std::size_t>(i)] = tau.apply_index(k, i);
      lc.ball_q[static_cast<std::size_t>(i)] = ball_points(cloud, sys.cube(k, i).center, dil_radius);
      lc.ball_tq[static_cast<std::size_t>(i)] =
          ball_points(cloud, sys.cube(k, lc.tau_of[static_cast<std::size_t>(i)]).center, dil_radius);
    }

    // step 1: 12 delta^{k-3} separation of the centers
    SeparatedSet centers;
    centers.separation = sys.side(k);
    for (int i = 0; i < nc; ++i) centers.ids.push_back(sys.cube(k, i).center);
    std::sort(centers.ids.begin(), centers.ids.end());
    double d2 = 12.0 * sys.side(k) / (sys.delta() * sys.delta() * sys.delta());
    auto sep_parts = split_separated(cloud, centers, sys.side(k), d2);

    std::map<int, int> center_to_index;
    for (int i = 0; i < nc; ++i) center_to_index[sys.cube(k, i).center] = i;
    std::vector<std::vector<int>> parts;
    for (const auto& sp : sep_parts) {
      std::vector<int> part;
      for (int c : sp.ids) part.push_back(center_to_index.at(c));
      std::sort(part.begin(), part.end());
      parts.push_back(std::move(part));
    }

    // steps 2 and 3 of the proof, then a closing pass for the residual
    // direct-ball overlaps the 12 delta^{k-3} separation does not rule out on
    // a finite cloud
    parts = refine(parts, [&](int a, int b) { return lc.mixed(a, b); });
    parts = refine(parts, [&](int a, int b) { return lc.tau_tau(a, b); });
    parts = refine(parts, [&](int a, int b) { return lc.direct(a, b); });

    max_parts = std::max(max_parts, parts.size());
    per_level.push_back(std::move(parts));
  }

  // Q_i = union over levels of the i-th part
  std::vector<std::vector<CubeId>> collections(max_parts);
  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    const auto& parts = per_level[static_cast<std::size_t>(k - sys.k_min())];
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (int idx : parts[i]) collections[i].push_back(CubeId{k, idx});
  }
  return collections;
}

GammaResult gamma(const PointCloud& cloud, const DyadicSystem& base, const AdjacentFamily& family,
                  const TauMap& tau, CubeId R, int T) {
  int k = R.level;
  if (k - 3 < family.k_min() || k - 3 - T < family.k_min())
    throw std::out_of_range("gamma: family too shallow for level k-3-T");
  if (base.delta() != family.delta) throw std::invalid_argument("base/family delta mismatch");

  CubeId tR = tau.apply(R);
  int x = base.cube(R).center;
  int xt = base.cube(tR).center;
  double r = base.ball_radius(k);
  double rT = r;
  for (int i = 0; i < T; ++i) rT /= base.delta();

  auto b = ball_points(cloud, x, r);
  auto bt = ball_points(cloud, xt, r);
  auto bbig = ball_points(cloud, x, rT);
  auto btbig = ball_points(cloud, xt, rT);

  auto inside = [&](const std::vector<int>& pts, const Cube& q) {
    for (int p : pts)
      if (!std::binary_search(q.members.begin(), q.members.end(), p)) return false;
    return true;
  };

  GammaResult res;
  for (int omega = 1; omega <= family.K; ++omega) {
    const DyadicSystem& sys = family.system(omega);
    CubeId P = sys.cube_of(k - 3, x);
    CubeId Pt = sys.cube_of(k - 3, xt);
    std::string detail;
    if (!inside(b, sys.cube(P))) detail += "B_R ";
    if (!inside(bt, sys.cube(Pt))) detail += "B_tauR ";
    if (detail.empty()) {
      if (!inside(bbig, sys.cube(sys.ancestor(P, T)))) detail += "anc(B_R) ";
      if (!inside(btbig, sys.cube(sys.ancestor(Pt, T)))) detail += "anc(B_tauR) ";
    }
    if (detail.empty()) {
      res.omega = omega;
      return res;
    }
    res.diag += "w" + std::to_string(omega) + ":[" + detail + "] ";
  }
  return res;
}

SparseDecomposition build_sparse_decomposition(const PointCloud& cloud, const DyadicSystem& base,
                                               const AdjacentFamily& family, const Measure& mu,
                                               const TauMap& tau) {
  SparseDecomposition dec;
  dec.T = compute_T(tau.m, base.delta());
  auto collections = partition_lemma32(cloud, base, tau);
  dec.L = static_cast<int>(collections.size());
  dec.family_bound = 4ll * dec.T * family.K * dec.L;

  std::map<CubeId, int> part_of;
  for (std::size_t i = 0; i < collections.size(); ++i)
    for (CubeId id : collections[i]) part_of[id] = static_cast<int>(i);

  int fourT = 4 * dec.T;
  std::map<SparseLabel, std::vector<HostTriple>> buckets;
  for (int k = base.k_min(); k <= base.k_max(); ++k) {
    for (int idx = 0; idx < base.level_count(k); ++idx) {
      CubeId id{k, idx};
      if (k - 3 < family.k_min() || k - 3 - dec.T < family.k_min()) {
        dec.exclusions.push_back({id, "host level underflow"});
        dec.excluded_mass += mu.mass_of(base.cube(id).members);
        continue;
      }
      auto g = gamma(cloud, base, family, tau, id, dec.T);
      if (!g.omega) {
        dec.exclusions.push_back({id, "no hosting system: " + g.diag});
        dec.excluded_mass += mu.mass_of(base.cube(id).members);
        continue;
      }
      const DyadicSystem& sys = family.system(*g.omega);
      HostTriple ht;
      ht.cube = id;
      ht.tau_cube = tau.apply(id);
      ht.P = sys.cube_of(k - 3, base.cube(id).center);
      ht.Ptau = sys.cube_of(k - 3, base.cube(ht.tau_cube).center);
      ht.Pstar = sys.ancestor(ht.P, dec.T);
      SparseLabel label{part_of.at(id), ((k % fourT) + fourT) % fourT, *g.omega};
      buckets[label].push_back(ht);
    }
  }
  for (auto& [label, cubes] : buckets) {
    std::sort(cubes.begin(), cubes.end(), [](const HostTriple& a, const HostTriple& b) {
      return std::pair{a.cube.level, a.cube.index} < std::pair{b.cube.level, b.cube.index};
    });
    dec.families.push_back(SparseFamily{label, std::move(cubes)});
  }
  return dec;
}

SparseCheckReport verify_sparse_decomposition(const PointCloud& cloud, const DyadicSystem& base,
                                              const AdjacentFamily& family, const TauMap& tau,
                                              const SparseDecomposition& dec) {
  SparseCheckReport rep;

  auto members_of = [&](const DyadicSystem& sys, CubeId id) -> const std::vector<int>& {
    return sys.cube(id).members;
  };
  auto subset = [&](const std::vector<int>& a, const std::vector<int>& b) {
    for (int p : a)
      if (!std::binary_search(b.begin(), b.end(), p)) return false;
    return true;
  };

  std::set<CubeId> labeled;
  for (const auto& fam : dec.families) {
    const DyadicSystem& sys = family.system(fam.label.omega);
    for (const auto& ht : fam.cubes) {
      if (!labeled.insert(ht.cube).second) rep.disjoint_union = false;

      // (3.1)
      const auto& P = members_of(sys, ht.P);
      const auto& Pt = members_of(sys, ht.Ptau);
      const auto& Ps = members_of(sys, ht.Pstar);
      if (!subset(members_of(base, ht.cube), P)) rep.p31 = false;
      if (!subset(members_of(base, ht.tau_cube), Pt)) rep.p31 = false;
      auto big = ball_points(cloud, base.cube(ht.cube).center,
                             2.0 * tau.m * base.ball_radius(ht.cube.level));
      if (!subset(P, Ps) || !subset(Pt, Ps) || !subset(big, Ps)) rep.p31 = false;
    }

    // (3.2) same-level pairs
    for (std::size_t a = 0; a < fam.cubes.size(); ++a)
      for (std::size_t b = a + 1; b < fam.cubes.size(); ++b) {
        const auto& A = fam.cubes[a];
        const auto& B = fam.cubes[b];
        if (A.cube.level != B.cube.level) continue;
        ++rep.pairs_same_level;
        std::vector<int> ua, ub;
        const auto& pa = members_of(sys, A.P);
        const auto& pta = members_of(sys, A.Ptau);
        std::set_union(pa.begin(), pa.end(), pta.begin(), pta.end(), std::back_inserter(ua));
        const auto& pb = members_of(sys, B.P);
        const auto& ptb = members_of(sys, B.Ptau);
        std::set_union(pb.begin(), pb.end(), ptb.begin(), ptb.end(), std::back_inserter(ub));
        std::vector<int> inter;
        std::set_intersection(ua.begin(), ua.end(), ub.begin(), ub.end(), std::back_inserter(inter));
        if (!inter.empty()) rep.p32 = false;
      }

    // (3.3) nested pairs and the level-gap property
    std::set<int> levels;
    for (const auto& ht : fam.cubes) levels.insert(ht.cube.level);
    for (int la : levels)
      for (int lb : levels)
        if (la < lb && (lb - la) % (4 * dec.T) != 0) rep.level_gaps = false;
    for (std::size_t a = 0; a < fam.cubes.size(); ++a)
      for (std::size_t b = 0; b < fam.cubes.size(); ++b) {
        const auto& inner = fam.cubes[a];
        const auto& outer = fam.cubes[b];
        if (inner.cube.level <= outer.cube.level) continue;
        const auto& im = members_of(base, inner.cube);
        const auto& om = members_of(base, outer.cube);
        if (!subset(im, om) || im.size() == om.size()) continue;  // only strict nesting
        ++rep.pairs_nested;
        if (!subset(members_of(sys, inner.Pstar), members_of(sys, outer.P))) rep.p33 = false;
      }
  }
  return rep;
}

}  // namespace dyadic
