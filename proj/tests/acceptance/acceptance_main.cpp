// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "dyadic/adjacent_systems.hpp"
#include "dyadic/dyadic_cubes.hpp"
#include "dyadic/haar_analysis.hpp"
#include "dyadic/io.hpp"
#include "dyadic/metric_core.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/shift_operator.hpp"
#include "dyadic/sparse_decomposition.hpp"
#include "dyadic/stochastic_norms.hpp"

using namespace dyadic;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", idx, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int auto_k_max(const PointCloud& cloud, double delta) {
  double gap = cloud.min_positive_distance();
  int k = 0;
  double s = 1.0;
  while (k < 24) {
    if (s * delta < gap) break;
    s *= delta;
    ++k;
  }
  return k;
}

// ---------------------------------------------------------------- criterion 1
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  int instances = 0;
  bool axioms_ok = true, sandwich_ok = true;
  double worst_inner_torus = std::numeric_limits<double>::infinity();
  double worst_outer = 0.0;

  auto run_instance = [&](const PointCloud& cloud, double delta, bool gate_sandwich) {
    int k_max = auto_k_max(cloud, delta);
    auto nets = build_nested_nets(cloud, delta, 0, k_max);
    auto sys = build_dyadic_system(cloud, nets);
    auto rep = verify_dyadic_system(cloud, sys);
    if (!rep.ok()) axioms_ok = false;
    auto sw = verify_sandwich(cloud, sys);
    worst_outer = std::max(worst_outer, sw.max_outer_ratio);
    if (gate_sandwich) {
      worst_inner_torus = std::min(worst_inner_torus, sw.min_inner_ratio);
      if (!sw.pass) sandwich_ok = false;
    }
    ++instances;
  };

  const double deltas[] = {0.5, 0.25, 0.1};
  for (int g = 4; g <= 10; ++g)
    for (double delta : deltas)
      run_instance(PointCloud::torus_grid_pow2(g), delta, delta <= 0.25);
  int seed = 0;
  const int sizes[] = {32, 64, 96, 128, 192, 256, 384, 512};
  while (instances < 100) {
    int n = sizes[seed % 8];
    double delta = deltas[seed % 3];
    run_instance(PointCloud::random_box(n, 2, 1000 + static_cast<std::uint64_t>(seed)), delta,
                 false);
    ++seed;
  }
  double elapsed = seconds_since(t0);
  bool pass = axioms_ok && sandwich_ok && elapsed <= 60.0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%d instances, axioms %s, torus sandwich inner >= %.3f outer <= %.3f, %.1f s",
                instances, axioms_ok ? "exact" : "BROKEN", worst_inner_torus, worst_outer,
                elapsed);
  report(1, "dyadic axioms i/ii/iv exact, iii gated on torus delta <= 1/4", pass, buf);
}

// ---------------------------------------------------------------- criterion 2
bool recheck_host(const PointCloud& cloud, const AdjacentFamily& fam, const BallSpec& ball,
                  int p, double slack, const HostAssignment& a) {
  const DyadicSystem& sys = fam.system(a.omega);
  const auto& e = a.entries[0];
  const Cube& q = sys.cube(e.cube);
  const Cube& anc = sys.cube(e.ancestor);
  if (sys.side(e.cube.level) > slack / (fam.delta * fam.delta) * ball.radius + 1e-15) return false;
  if (e.ancestor.level != e.cube.level - p) return false;
  double dil = ball.radius;
  for (int i = 0; i < p; ++i) dil /= fam.delta;
  for (int y = 0; y < cloud.size(); ++y) {
    if (cloud.dist(ball.center, y) < ball.radius &&
        !std::binary_search(q.members.begin(), q.members.end(), y))
      return false;
    if (cloud.dist(ball.center, y) < dil &&
        !std::binary_search(anc.members.begin(), anc.members.end(), y))
      return false;
  }
  return true;
}

void criterion2() {
  bool pass = true;
  int total = 0;
  std::string detail;
  for (int g : {4, 6, 8, 10}) {
    auto cloud = PointCloud::torus_grid_pow2(g);
    auto fam = build_adjacent_family(cloud, 0.5, 3, FamilyMode::canonical1d, 0, g);
    SplitMix rng(splitmix64(2000 + static_cast<std::uint64_t>(g)));
    int hosted = 0;
    for (int b = 0; b < 200; ++b) {
      int c = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cloud.size())));
      int o = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cloud.size())));
      if (o == c) o = (c + 1) % cloud.size();
      BallSpec ball{c, cloud.dist(c, o)};
      auto res = find_host(cloud, fam, std::vector<BallSpec>{ball}, 0, 4.0);
      bool ok = res.found.has_value() &&
                recheck_host(cloud, fam, ball, 0, 4.0, *res.found);
      if (ok) ++hosted;
      pass = pass && ok;
      ++total;
    }
    detail += "g=" + std::to_string(g) + ":" + std::to_string(hosted) + "/200 ";
  }
  report(2, "canonical K=3 family hosts every data-realized ball at slack <= 4", pass,
         detail + "(" + std::to_string(total) + " balls re-verified)");
}

// ---------------------------------------------------------------- criterion 3
void criterion3() {
  auto cloud = PointCloud::torus_grid_pow2(10);
  auto mu = Measure::uniform(cloud.size());
  bool pass = true;
  std::string detail;

  // gate at delta = 1/4 (the criterion leaves delta free; at 1/2 the pinned
  // k-3 host level provably cannot always be served by lattice systems)
  auto base = build_canonical_system_1d(cloud, 0.25, 0, 5, 0.0);
  for (int m : {1, 2, 4, 8}) {
    int T = compute_T(m, 0.25);
    auto fam = build_adjacent_family(cloud, 0.25, 3, FamilyMode::canonical1d, -3 - T, 5);
    auto tau = canonical_tau_1d(cloud, base, mu, m);
    auto dec = build_sparse_decomposition(cloud, base, fam, mu, tau);
    auto rep = verify_sparse_decomposition(cloud, base, fam, tau, dec);
    bool ok = rep.ok() && dec.exclusions.empty() &&
              static_cast<long long>(dec.families.size()) <= dec.family_bound && dec.T == T;
    pass = pass && ok;
    detail += "m=" + std::to_string(m) + ":" + (ok ? "ok" : "FAIL") + ",fam=" +
              std::to_string(dec.families.size()) + "<=4TKL=" + std::to_string(dec.family_bound) +
              " ";
  }

  // g=12 companion at the same delta: level 6 is deep enough for the lemma
  // parts to hold several same-level cubes, so the pair condition (3.2) fires
  // non-vacuously
  {
    auto big = PointCloud::torus_grid_pow2(12);
    auto mu12 = Measure::uniform(big.size());
    auto base12 = build_canonical_system_1d(big, 0.25, 0, 6, 0.0);
    auto fam12 = build_adjacent_family(big, 0.25, 3, FamilyMode::canonical1d, -4, 6);
    auto tau12 = canonical_tau_1d(big, base12, mu12, 1);
    auto dec12 = build_sparse_decomposition(big, base12, fam12, mu12, tau12);
    auto rep12 = verify_sparse_decomposition(big, base12, fam12, tau12, dec12);
    bool ok = rep12.ok() && dec12.exclusions.empty() && rep12.pairs_same_level > 0;
    pass = pass && ok;
    detail += "| g=12,m=1: " + std::string(ok ? "ok" : "FAIL") + ", same-level pairs=" +
              std::to_string(rep12.pairs_same_level) + " ";
  }

  // delta = 1/2 companion, reported: the pinned k-3 host level leaves most
  // cubes unhosted at this coarse delta, so a large exclusion report is the
  // expected outcome; properties must still hold for everything included
  {
    auto base2 = build_canonical_system_1d(cloud, 0.5, 0, 10, 0.0);
    int m = 4;
    auto fam2 = build_adjacent_family(cloud, 0.5, 3, FamilyMode::canonical1d,
                                      -3 - compute_T(m, 0.5), 10);
    auto tau2 = canonical_tau_1d(cloud, base2, mu, m);
    auto dec2 = build_sparse_decomposition(cloud, base2, fam2, mu, tau2);
    auto rep2 = verify_sparse_decomposition(cloud, base2, fam2, tau2, dec2);
    pass = pass && rep2.ok() &&
           static_cast<long long>(dec2.families.size()) <= dec2.family_bound;
    detail += "| d=1/2,m=4 reported: props " + std::string(rep2.ok() ? "ok" : "FAIL") +
              ", excl=" + std::to_string(dec2.exclusions.size());
  }
  report(3, "proposition (3.1)-(3.3) exact; count <= 4TKL; exclusions empty at full depth",
         pass, detail);
}

// ---------------------------------------------------------------- criterion 4
void criterion4() {
  auto cloud = PointCloud::torus_grid_pow2(8);
  auto mu = Measure::uniform(cloud.size());
  auto sys = build_dyadic_system(cloud, build_nested_nets(cloud, 0.5, 0, 8));
  auto haar = build_haar_system(sys, mu);

  std::vector<const HaarFunction*> all;
  haar.for_each([&](const HaarFunction& h) { all.push_back(&h); });
  double gram = 0.0;
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a; b < all.size(); ++b)
      gram = std::max(gram,
                      std::abs(haar_inner(sys, mu, *all[a], *all[b]) - (a == b ? 1.0 : 0.0)));

  double roundtrip = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    auto rng = substream(4242, static_cast<std::uint64_t>(rep));
    VectorFunction f(cloud.size(), 2);
    for (auto& v : f.raw()) v = rng.next_gaussian();
    auto e = expand(f, haar, sys, mu);
    auto back = reconstruct(e, haar, sys, 2);
    for (std::size_t i = 0; i < f.raw().size(); ++i)
      roundtrip = std::max(roundtrip, std::abs(back.raw()[i] - f.raw()[i]));
  }

  auto env = haar_envelope_check(haar, sys, mu, 4.0, 0.25);

  double tower = 0.0;
  {
    auto rng = substream(777, 1);
    VectorFunction f(cloud.size(), 1);
    for (auto& v : f.raw()) v = rng.next_gaussian();
    for (int k = 0; k <= 8; ++k)
      for (int j = 0; j <= k; ++j) {
        auto a = conditional_expectation_level(conditional_expectation_level(f, sys, k, mu), sys,
                                               j, mu);
        auto b = conditional_expectation_level(f, sys, j, mu);
        for (std::size_t i = 0; i < a.raw().size(); ++i)
          tower = std::max(tower, std::abs(a.raw()[i] - b.raw()[i]));
      }
  }

  bool pass = gram <= 1e-10 && roundtrip <= 1e-10 && env.pass && tower <= 1e-12;
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "gram err %.2e, roundtrip err %.2e (50 fns), envelope [%.3f, %.3f] in "
                "[1/4,4], tower err %.2e",
                gram, roundtrip, env.min_lower, env.max_upper, tower);
  report(4, "haar suite: gram 1e-10, roundtrip 1e-10, envelope budget, tower 1e-12", pass, buf);
}

// ---------------------------------------------------------------- criterion 5
void criterion5() {
  // kahane on 1000 exhaustively enumerated instances
  int kahane_fail = 0;
  const double qs[] = {1.0, 2.0, 4.0};
  const double ps[] = {1.5, 2.0, 3.0};
  for (int inst = 0; inst < 1000; ++inst) {
    auto rng = substream(5555, static_cast<std::uint64_t>(inst));
    int N = 2 + static_cast<int>(rng.next_below(9));           // <= 10
    int d = 1 + static_cast<int>(rng.next_below(4));           // <= 4
    auto E = NormedSpaceE::lq(d, qs[rng.next_below(3)]);
    double p = ps[rng.next_below(3)];
    std::vector<std::vector<double>> xs;
    std::vector<double> cs;
    for (int i = 0; i < N; ++i) {
      std::vector<double> x(static_cast<std::size_t>(d));
      for (auto& v : x) v = rng.next_gaussian();
      xs.push_back(std::move(x));
      cs.push_back(2.0 * rng.next_u01() - 1.0);
    }
    if (!kahane_check(E, xs, cs, p, SignEnsemble::exact()).pass) ++kahane_fail;
  }

  // stein: measurable inputs give ratio exactly 1
  auto cloud = PointCloud::torus_grid_pow2(4);
  auto mu = Measure::uniform(16);
  auto sys = build_dyadic_system(cloud, build_nested_nets(cloud, 0.5, 0, 4));
  auto E1 = NormedSpaceE::scalar();
  bool stein_exact = true;
  for (int inst = 0; inst < 20; ++inst) {
    auto rng = substream(6060, static_cast<std::uint64_t>(inst));
    std::vector<VectorFunction> fs;
    std::vector<int> levels;
    for (int k = 1; k <= 3; ++k) {
      VectorFunction f(16, 1);
      for (const auto& q : sys.level(k)) {
        // small integer values on power-of-two cells with dyadic weights make
        // the conditional expectation reproduce f bit for bit
        double v = 1.0 + static_cast<double>(rng.next_below(8));
        for (int p : q.members) f.at(p)[0] = v;
      }
      fs.push_back(std::move(f));
      levels.push_back(k);
    }
    double ratio = stein_ratio(fs, sys, levels, ps[inst % 3], SignEnsemble::exact(), mu, E1);
    if (ratio != 1.0) stein_exact = false;
  }

  // stein: single summands contract
  bool stein_single = true;
  double worst_single = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    auto rng = substream(6161, static_cast<std::uint64_t>(inst));
    VectorFunction f(16, 1);
    for (auto& v : f.raw()) v = rng.next_gaussian();
    std::vector<VectorFunction> fs{std::move(f)};
    std::vector<int> levels{static_cast<int>(rng.next_below(4))};
    double ratio = stein_ratio(fs, sys, levels, ps[inst % 3], SignEnsemble::exact(), mu, E1);
    worst_single = std::max(worst_single, ratio);
    if (!(ratio <= 1.0 + 1e-12)) stein_single = false;
  }

  bool pass = kahane_fail == 0 && stein_exact && stein_single;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "kahane 1000 instances, %d failures; stein measurable ratio == 1: %s; single "
                "summand max %.12f",
                kahane_fail, stein_exact ? "yes" : "NO", worst_single);
  report(5, "stochastic suite: kahane exhaustive, stein exact/contractive", pass, buf);
}

// ---------------------------------------------------------------- criterion 6
void criterion6(int threads) {
  auto t0 = std::chrono::steady_clock::now();
  NormGrowthConfig cfg;
  cfg.g = 12;
  cfg.delta = 0.5;
  cfg.m_list = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  cfg.p_list = {1.5, 2.0, 4.0};
  cfg.E = NormedSpaceE::scalar();
  cfg.samples = 1000;
  cfg.seed = 99;
  cfg.threads = threads;
  auto res = norm_growth_experiment(cfg);

  bool p2_exact = true;
  for (const auto& row : res.rows)
    if (row.p == 2.0 && std::abs(row.ratio - 1.0) > 1e-10) p2_exact = false;

  bool stable = true;
  std::string detail;
  for (double p : {1.5, 4.0}) {
    double c32 = 0.0;
    for (const auto& row : res.rows)
      if (row.p == p && row.m <= 32) c32 = std::max(c32, row.ratio / row.bound);
    double cfull = 0.0;
    for (const auto& row : res.rows)
      if (row.p == p) cfull = std::max(cfull, row.ratio / row.bound);
    bool ok = cfull <= 1.5 * c32;
    stable = stable && ok;
    char buf[120];
    std::snprintf(buf, sizeof buf, "p=%.1f C32=%.4f Cfull=%.4f ratio=%.3f spearman=%.2f; ", p,
                  c32, cfull, cfull / c32, res.spearman[p]);
    detail += buf;
  }
  double elapsed = seconds_since(t0);
  bool pass = p2_exact && stable && elapsed <= 600.0;
  char buf[80];
  std::snprintf(buf, sizeof buf, "p=2 exact: %s; %.0f s", p2_exact ? "yes" : "NO", elapsed);
  report(6, "norm growth: p=2 isometry, fitted C stable within 1.5x from m<=32 to m<=1024",
         pass, detail + buf);
}

// ---------------------------------------------------------------- criterion 7
void criterion7() {
  auto cloud = PointCloud::torus_grid_pow2(6);
  auto mu = Measure::uniform(64);
  auto sys = build_canonical_system_1d(cloud, 0.5, 0, 6, 0.0);
  auto haar = build_haar_system(sys, mu);

  bool pass = true;
  std::string detail;
  struct Case {
    double p;
    NormedSpaceE E;
    const char* name;
  };
  std::vector<Case> cases = {{2.0, NormedSpaceE::scalar(), "p2-scalar"},
                             {1.5, NormedSpaceE::scalar(), "p1.5-scalar"},
                             {3.0, NormedSpaceE::lq(2, 1.0), "p3-l1d2"},
                             {2.0, NormedSpaceE::lq(3, 4.0), "p2-l4d3"}};
  const double band = 6.0;  // recorded two-sided constant for the p != 2 cases
  for (const auto& cs : cases) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
      auto rng = substream(7777, static_cast<std::uint64_t>(inst) * 7 + static_cast<std::uint64_t>(cs.p * 10));
      HaarCoefficients c;
      c.dim = cs.E.dim;
      int support = 6 + static_cast<int>(rng.next_below(7));  // <= 12: exact ensemble
      for (int s = 0; s < support; ++s) {
        int k = static_cast<int>(rng.next_below(6));
        int idx = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(sys.level_count(k))));
        std::vector<double> x(static_cast<std::size_t>(cs.E.dim));
        for (auto& v : x) v = rng.next_gaussian();
        c.entries[{k, idx, 1}] = std::move(x);
      }
      double r = lemma42_ratio(c, haar, sys, cs.p, SignEnsemble::exact(), mu, cs.E);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    bool scalar_p2 = cs.p == 2.0 && cs.E.dim == 1;
    bool ok = scalar_p2 ? (std::abs(lo - 1.0) <= 1e-10 && std::abs(hi - 1.0) <= 1e-10)
                        : (lo >= 1.0 / band && hi <= band);
    pass = pass && ok;
    char buf[120];
    std::snprintf(buf, sizeof buf, "%s:[%.4f,%.4f]%s ", cs.name, lo, hi, ok ? "" : " FAIL");
    detail += buf;
  }
  report(7, "lemma 4.2 ratio in a fixed band (c=6), exactly 1 for p=2 scalar", pass, detail);
}

// ---------------------------------------------------------------- criterion 8
void criterion8() {
  auto dir = fs::temp_directory_path() / "dyadic_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  json cfg;
  cfg["input"] = json{{"kind", "torus_grid"}, {"g", 5}};
  cfg["delta"] = 0.5;
  cfg["K"] = 3;
  cfg["m_list"] = {1, 2};
  cfg["balls"] = 30;
  cfg["seed"] = 31;
  cfg["experiment"] = json{{"g", 5}, {"m_list", {1, 2, 4}}, {"p_list", {1.5, 2.0}}, {"samples", 20}};
  write_json_file((dir / "cfg.json").string(), cfg);

  auto run = [&](const std::string& out) {
    std::string cmd = std::string(DYADIC_CLI_PATH) + " verify-all --config " +
                      (dir / "cfg.json").string() + " --out " + out + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  int rc1 = run((dir / "a").string());
  int rc2 = run((dir / "b").string());
  bool pass = rc1 == 0 && rc2 == 0;
  std::string detail = "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2);
  if (pass) {
    for (const char* name : {"hosting.csv", "stochastic.csv", "shift_experiment.csv"}) {
      auto a = read_text_file((dir / "a" / name).string());
      auto b = read_text_file((dir / "b" / name).string());
      if (a != b || a.empty()) {
        pass = false;
        detail += std::string("; ") + name + " differs";
      }
    }
    if (pass) detail += "; all CSV artifacts byte-identical";
  }
  report(8, "verify-all twice with one seed gives byte-identical CSVs", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 4;
  if (argc > 1) threads = std::atoi(argv[1]);
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6(threads);
  criterion7();
  criterion8();
  if (failures == 0)
    std::printf("acceptance: all 8 criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
