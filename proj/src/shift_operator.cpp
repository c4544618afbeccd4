#include "dyadic/shift_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "dyadic/rng.hpp"

namespace dyadic {

TauMap canonical_tau_1d(const PointCloud& cloud, const DyadicSystem& sys, const Measure& mu,
                        int m) {
  if (m < 1) throw std::invalid_argument("canonical shift needs m >= 1");
  if (!sys.canonical_1d())
    throw std::invalid_argument("canonical shift needs a canonical 1-D torus system");
  TauMap tau;
  tau.m = std::max(1.0, static_cast<double>(m));
  tau.k_min = sys.k_min();
  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    int N = sys.level_count(k);
    std::vector<int> t(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) t[static_cast<std::size_t>(j)] = (j + m) % N;
    tau.target.push_back(std::move(t));
  }
  auto rep = validate_tau(cloud, sys, mu, tau, std::numeric_limits<double>::infinity());
  tau.c_tau = rep.measured_c;
  tau.max_dilation = rep.measured_dilation;
  if (!rep.injective || !rep.inclusion_ok)
    throw std::logic_error("canonical shift violates the tau conditions");
  return tau;
}

TauMap random_tau(const PointCloud& cloud, const DyadicSystem& sys, const Measure& mu, double m,
                  double c_tau_budget, std::uint64_t seed) {
  if (!(m >= 1.0)) throw std::invalid_argument("random_tau needs m >= 1");
  TauMap tau;
  tau.m = m;
  tau.k_min = sys.k_min();
  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    int N = sys.level_count(k);
    double radius = m * sys.ball_radius(k);
    std::vector<double> mass(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) mass[static_cast<std::size_t>(i)] = mu.mass_of(sys.cube(k, i).members);
    auto admissible = [&](int a, int b) {
      double c = std::max(mass[static_cast<std::size_t>(a)] / mass[static_cast<std::size_t>(b)],
                          mass[static_cast<std::size_t>(b)] / mass[static_cast<std::size_t>(a)]);
      if (c > c_tau_budget) return false;
      const Cube& q = sys.cube(k, a);
      for (int y : sys.cube(k, b).members)
        if (!(cloud.dist(q.center, y) < radius)) return false;
      return true;
    };
    std::vector<int> result;
    bool done = false;
    for (int attempt = 0; attempt < 8 && !done; ++attempt) {
      auto rng = substream(seed, (static_cast<std::uint64_t>(k - sys.k_min()) << 8) |
                                     static_cast<std::uint64_t>(attempt));
      std::vector<int> order(static_cast<std::size_t>(N));
      for (int i = 0; i < N; ++i) order[static_cast<std::size_t>(i)] = i;
      shuffle(order, rng);
      std::vector<int> t(static_cast<std::size_t>(N), -1);
      std::vector<char> used(static_cast<std::size_t>(N), 0);
      bool stuck = false;
      for (int a : order) {
        std::vector<int> options;
        for (int b = 0; b < N; ++b)
          if (!used[static_cast<std::size_t>(b)] && admissible(a, b)) options.push_back(b);
        if (options.empty()) {
          stuck = true;
          break;
        }
        int pick = options[static_cast<std::size_t>(rng.next_below(options.size()))];
        t[static_cast<std::size_t>(a)] = pick;
        used[static_cast<std::size_t>(pick)] = 1;
      }
      if (!stuck) {
        result = std::move(t);
        done = true;
      }
    }
    if (!done) {
      // identity is always admissible for m >= 1 on a system with the outer
      // sandwich property
      result.resize(static_cast<std::size_t>(N));
      for (int i = 0; i < N; ++i) result[static_cast<std::size_t>(i)] = i;
      tau.notes.push_back("level " + std::to_string(k) + " left as identity");
    }
    tau.target.push_back(std::move(result));
  }
  auto rep = validate_tau(cloud, sys, mu, tau, c_tau_budget);
  tau.c_tau = rep.measured_c;
  tau.max_dilation = rep.measured_dilation;
  return tau;
}

HaarCoefficients apply_shift(const DyadicSystem& sys, const HaarSystem& haar, const TauMap& tau,
                             const HaarCoefficients& coeffs) {
  HaarCoefficients out;
  out.dim = coeffs.dim;
  for (const auto& [key, x] : coeffs.entries) {
    auto [k, idx, theta] = key;
    if (k < sys.k_min() || k > sys.k_max() || idx < 0 || idx >= sys.level_count(k))
      throw std::invalid_argument("coefficient key outside the system");
    const auto& fns = haar.of_cube(CubeId{k, idx});
    bool has = false;
    for (const auto& h : fns) has = has || h.theta == theta;
    if (!has) throw std::invalid_argument("coefficient outside the operator domain");
    int t = tau.apply_index(k, idx);
    const auto& tfns = haar.of_cube(CubeId{k, t});
    bool thas = false;
    for (const auto& h : tfns) thas = thas || h.theta == theta;
    if (!thas) throw std::invalid_argument("target cube lacks the matching Haar branch");
    out.entries[{k, t, theta}] = x;
  }
  return out;
}

namespace {

VectorFunction function_from_coeffs(const HaarCoefficients& coeffs, const HaarSystem& haar,
                                    const DyadicSystem& sys, int dim) {
  Expansion e;
  e.coeffs = coeffs;
  e.top_averages.assign(static_cast<std::size_t>(sys.level_count(sys.k_min())),
                        std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  return reconstruct(e, haar, sys, dim);
}

}  // namespace

double lemma42_ratio(const HaarCoefficients& coeffs, const HaarSystem& haar,
                     const DyadicSystem& sys, double p, const SignEnsemble& ens,
                     const Measure& mu, const NormedSpaceE& E) {
  if (coeffs.entries.empty()) return 1.0;
  int dim = coeffs.dim;
  VectorFunction f = function_from_coeffs(coeffs, haar, sys, dim);
  double lhs = bochner_norm(f, p, mu, E);

  std::vector<VectorFunction> summands;
  summands.reserve(coeffs.entries.size());
  for (const auto& [key, x] : coeffs.entries) {
    auto [k, idx, theta] = key;
    (void)theta;
    const Cube& q = sys.cube(k, idx);
    double scale = 1.0 / std::sqrt(mu.mass_of(q.members));
    VectorFunction g(sys.n_points(), dim);
    for (int pnt : q.members) {
      auto v = g.at(pnt);
      for (int d = 0; d < dim; ++d) v[static_cast<std::size_t>(d)] = x[static_cast<std::size_t>(d)] * scale;
    }
    summands.push_back(std::move(g));
  }
  double rhs = randomized_norm(summands, p, ens, mu, E).value;
  if (rhs == 0.0) return lhs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

namespace {

double spearman_rank(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t pos = 0; pos < idx.size(); ++pos) r[idx[pos]] = static_cast<double>(pos);
    return r;
  };
  auto rx = ranks(xs), ry = ranks(ys);
  double n = static_cast<double>(xs.size());
  double mx = (n - 1) / 2.0;
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - mx);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - mx) * (ry[i] - mx);
  }
  if (dx == 0.0 || dy == 0.0) return 0.0;
  return num / std::sqrt(dx * dy);
}

}  // namespace

NormGrowthResult norm_growth_experiment(const NormGrowthConfig& cfg) {
  if (cfg.g < 2 || cfg.g > 14) throw std::invalid_argument("norm growth experiment needs 2 <= g <= 14");
  if (cfg.m_list.empty() || cfg.p_list.empty())
    throw std::invalid_argument("norm growth experiment needs m and p lists");
  if (cfg.samples < 1) throw std::invalid_argument("samples must be positive");
  for (double p : cfg.p_list)
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("p must lie in (1,inf)");

  auto cloud = PointCloud::torus_grid_pow2(cfg.g);
  auto mu = Measure::uniform(cloud.size());
  auto sys = build_canonical_system_1d(cloud, cfg.delta, 0, cfg.g, 0.0);
  auto haar = build_haar_system(sys, mu);
  const NormedSpaceE& E = cfg.E;
  int dim = E.dim;

  // domain: every cube carrying at least one branch, fixed branch theta = 1
  std::vector<CubeId> domain;
  for (int k = sys.k_min(); k <= sys.k_max(); ++k)
    for (int idx = 0; idx < sys.level_count(k); ++idx)
      if (!haar.of_cube(CubeId{k, idx}).empty()) domain.push_back(CubeId{k, idx});

  NormGrowthResult result;
  for (int m : cfg.m_list) {
    TauMap tau = canonical_tau_1d(cloud, sys, mu, m);
    for (double p : cfg.p_list) {
      double alpha = alpha_exponent(E.type_t, E.cotype_q, p);
      double bound = std::pow(std::log(2.0 * m) + 1.0, alpha);

      // deterministic adversarial candidates plus seeded random samples
      auto make_random = [&](std::uint64_t trial) {
        auto rng = substream(cfg.seed ^ (static_cast<std::uint64_t>(m) << 20), trial);
        HaarCoefficients c;
        c.dim = dim;
        bool sparse = (trial % 2) == 1;
        if (sparse) {
          std::size_t count = std::min<std::size_t>(32, domain.size());
          for (std::size_t pick = 0; pick < count; ++pick) {
            CubeId id = domain[static_cast<std::size_t>(rng.next_below(domain.size()))];
            std::vector<double> x(static_cast<std::size_t>(dim));
            for (auto& v : x) v = static_cast<double>(rng.next_sign());
            c.entries[{id.level, id.index, 1}] = std::move(x);
          }
        } else {
          for (CubeId id : domain) {
            std::vector<double> x(static_cast<std::size_t>(dim));
            for (auto& v : x) v = rng.next_gaussian();
            c.entries[{id.level, id.index, 1}] = std::move(x);
          }
        }
        return c;
      };
      std::vector<HaarCoefficients> adversarial;
      {
        HaarCoefficients ones, alt;
        ones.dim = alt.dim = dim;
        for (CubeId id : domain) {
          std::vector<double> one(static_cast<std::size_t>(dim), 1.0);
          ones.entries[{id.level, id.index, 1}] = one;
          std::vector<double> a(static_cast<std::size_t>(dim), (id.index % 2 == 0) ? 1.0 : -1.0);
          alt.entries[{id.level, id.index, 1}] = std::move(a);
        }
        adversarial.push_back(std::move(ones));
        adversarial.push_back(std::move(alt));
        for (int k = sys.k_min(); k < sys.k_max(); ++k) {
          HaarCoefficients single;
          single.dim = dim;
          if (!haar.of_cube(CubeId{k, 0}).empty())
            single.entries[{k, 0, 1}] = std::vector<double>(static_cast<std::size_t>(dim), 1.0);
          if (!single.entries.empty()) adversarial.push_back(std::move(single));
        }
      }

      long long total = static_cast<long long>(adversarial.size()) + cfg.samples;
      int threads = std::max(1, cfg.threads);
      std::vector<double> best(static_cast<std::size_t>(threads), 0.0);
      auto worker = [&](int tid) {
        double local = 0.0;
        for (long long s = tid; s < total; s += threads) {
          const HaarCoefficients* c;
          HaarCoefficients scratch;
          if (s < static_cast<long long>(adversarial.size())) {
            c = &adversarial[static_cast<std::size_t>(s)];
          } else {
            scratch = make_random(static_cast<std::uint64_t>(s - adversarial.size()));
            c = &scratch;
          }
          if (c->entries.empty()) continue;
          VectorFunction f = function_from_coeffs(*c, haar, sys, dim);
          VectorFunction Tf = function_from_coeffs(apply_shift(sys, haar, tau, *c), haar, sys, dim);
          double den = bochner_norm(f, p, mu, E);
          if (den == 0.0) continue;
          local = std::max(local, bochner_norm(Tf, p, mu, E) / den);
        }
        best[static_cast<std::size_t>(tid)] = local;
      };
      if (threads == 1) {
        worker(0);
      } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
      }
      double ratio = *std::max_element(best.begin(), best.end());
      result.rows.push_back(NormGrowthRow{m, p, E.q, dim, ratio, bound, 0.0});
    }
  }

  for (double p : cfg.p_list) {
    double C = 0.0;
    std::vector<double> logs, ratios;
    for (const auto& row : result.rows)
      if (row.p == p) {
        C = std::max(C, row.ratio / row.bound);
        logs.push_back(std::log(2.0 * row.m));
        ratios.push_back(row.ratio);
      }
    result.fit_C[p] = C;
    result.spearman[p] = spearman_rank(logs, ratios);
    for (auto& row : result.rows)
      if (row.p == p) row.fit_C = C;
  }
  return result;
}

}  // namespace dyadic
