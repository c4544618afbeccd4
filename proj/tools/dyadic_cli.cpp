// Batch front end: builds nets, cube systems, adjacent families, sparse
// decompositions and Haar/stochastic/shift reports from a JSON config, and
// writes JSON/CSV artifacts plus a run manifest.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "dyadic/adjacent_systems.hpp"
#include "dyadic/dyadic_cubes.hpp"
#include "dyadic/haar_analysis.hpp"
#include "dyadic/io.hpp"
#include "dyadic/metric_core.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/shift_operator.hpp"
#include "dyadic/sparse_decomposition.hpp"
#include "dyadic/stochastic_norms.hpp"

namespace fs = std::filesystem;
using namespace dyadic;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  json raw;
  json input;  // {"kind": torus_grid|random_doubling|csv|json, ...}
  double delta = 0.5;
  int k_min = 0;
  int k_max = -1;  // <0: choose the deepest level at the cloud resolution
  int K = 3;
  FamilyMode family_mode = FamilyMode::canonical1d;
  double capacity_c = 2.0;
  std::vector<int> m_list = {1, 2};
  std::vector<double> p_list = {1.5, 2.0, 3.0};
  int e_dim = 1;
  double e_q = 2.0;
  double e_type = 0.0;    // 0: default min(q,2)
  double e_cotype = 0.0;  // 0: default max(q,2)
  int samples = 200;
  int trials = 2000;
  int balls = 50;
  double slack = 4.0;
  double c_tau = 2.0;
  std::uint64_t seed = 1;
  int threads = 1;
  int experiment_g = 8;
  std::vector<int> experiment_m = {1, 2, 4, 8, 16};
  std::vector<double> experiment_p = {1.5, 2.0, 4.0};
  int experiment_samples = 200;
  std::string out = "out";
};

RunConfig load_config(const std::string& path) {
  RunConfig c;
  c.raw = read_json_file(path);
  const json& j = c.raw;
  if (j.contains("input")) c.input = j["input"];
  else c.input = json{{"kind", "torus_grid"}, {"g", 6}};
  c.delta = j.value("delta", c.delta);
  c.k_min = j.value("k_min", c.k_min);
  c.k_max = j.value("k_max", c.k_max);
  c.K = j.value("K", c.K);
  if (j.value("family_mode", "canonical1d") == std::string("random"))
    c.family_mode = FamilyMode::random_nets;
  c.capacity_c = j.value("capacity_c", c.capacity_c);
  if (j.contains("m_list")) c.m_list = j["m_list"].get<std::vector<int>>();
  if (j.contains("p_list")) c.p_list = j["p_list"].get<std::vector<double>>();
  if (j.contains("E")) {
    c.e_dim = j["E"].value("d", 1);
    c.e_q = j["E"].value("q", 2.0);
    c.e_type = j["E"].value("type", 0.0);
    c.e_cotype = j["E"].value("cotype", 0.0);
  }
  c.samples = j.value("samples", c.samples);
  c.trials = j.value("trials", c.trials);
  c.balls = j.value("balls", c.balls);
  c.slack = j.value("slack", c.slack);
  c.c_tau = j.value("c_tau", c.c_tau);
  c.seed = j.value("seed", c.seed);
  c.threads = j.value("threads", c.threads);
  if (j.contains("experiment")) {
    const json& e = j["experiment"];
    c.experiment_g = e.value("g", c.experiment_g);
    if (e.contains("m_list")) c.experiment_m = e["m_list"].get<std::vector<int>>();
    if (e.contains("p_list")) c.experiment_p = e["p_list"].get<std::vector<double>>();
    c.experiment_samples = e.value("samples", c.experiment_samples);
  }
  c.out = j.value("out", c.out);
  return c;
}

NormedSpaceE space_from_config(const RunConfig& c) {
  auto E = NormedSpaceE::lq(c.e_dim, c.e_q);
  if (c.e_type > 0.0) E.type_t = c.e_type;
  if (c.e_cotype > 0.0) E.cotype_q = c.e_cotype;
  return E;
}

PointCloud make_cloud(const RunConfig& c) {
  std::string kind = c.input.value("kind", "torus_grid");
  if (kind == "torus_grid") return PointCloud::torus_grid_pow2(c.input.value("g", 6));
  if (kind == "random_doubling")
    return PointCloud::random_box(c.input.value("n", 128), c.input.value("dim", 2),
                                  c.input.value("seed", 7));
  if (kind == "csv") return cloud_from_csv(c.input.at("path").get<std::string>());
  if (kind == "json") return cloud_from_json(c.input.at("path").get<std::string>());
  throw std::invalid_argument("unknown input kind: " + kind);
}

int auto_k_max(const PointCloud& cloud, double delta, int k_min) {
  double gap = cloud.min_positive_distance();
  int k = k_min;
  double s = 1.0;
  for (int i = 0; i < k_min; ++i) s *= delta;
  while (k - k_min < 24) {
    if (s * delta < gap) break;
    s *= delta;
    ++k;
  }
  return k;
}

struct Runner {
  RunConfig cfg;
  fs::path outdir;
  json summary;
  bool hard_fail = false;
  json diagnostics = json::array();

  void fail(const std::string& what, const json& detail) {
    hard_fail = true;
    diagnostics.push_back(json{{"check", what}, {"detail", detail}});
  }

  void write_manifest(const std::string& command) {
    json m;
    m["command"] = command;
    m["config"] = cfg.raw;
    m["config_hash"] = fnv1a(cfg.raw.dump());
    m["seed"] = cfg.seed;
    m["version"] = kVersion;
    m["timestamp"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    write_json_file((outdir / "manifest.json").string(), m);
  }

  NestedNets run_nets(const PointCloud& cloud) {
    auto metric = check_metric(cloud, cfg.seed);
    int k_max = cfg.k_max >= cfg.k_min ? cfg.k_max : auto_k_max(cloud, cfg.delta, cfg.k_min);
    auto nets = build_nested_nets(cloud, cfg.delta, cfg.k_min, k_max);
    json rep;
    rep["metric_ok"] = metric.ok();
    rep["triples_checked"] = metric.triples_checked;
    rep["nested"] = nets_are_nested(nets);
    auto mu = Measure::uniform(cloud.size());
    auto dbl = measure_doubling_report(cloud, mu, cfg.seed);
    rep["measure_doubling_max_ratio"] = dbl.max_ratio;
    auto drep = estimate_doubling_report(cloud, cfg.seed);
    rep["doubling_M"] = drep.M;
    rep["doubling_exhaustive"] = drep.exhaustive;
    write_json_file((outdir / "nets_report.json").string(), rep);
    write_json_file((outdir / "nets.json").string(), nets_to_json(nets));
    if (!metric.ok()) fail("metric axioms", rep);
    if (!nets_are_nested(nets)) fail("net nesting", rep);
    return nets;
  }

  DyadicSystem run_cubes(const PointCloud& cloud, const NestedNets& nets) {
    auto sys = build_dyadic_system(cloud, nets);
    auto rep = verify_dyadic_system(cloud, sys);
    auto sw = verify_sandwich(cloud, sys);
    json j;
    j["partition"] = rep.levels_partition;
    j["nested_or_disjoint"] = rep.pairs_nested_or_disjoint;
    j["descendant_unions"] = rep.descendant_unions;
    j["centers_in_members"] = rep.centers_in_members;
    j["children_partition"] = rep.children_partition_parent;
    j["pairs_checked"] = rep.pairs_checked;
    j["sandwich_inner"] = sw.min_inner_ratio;
    j["sandwich_outer"] = sw.max_outer_ratio;
    j["sandwich_pass"] = sw.pass;  // reported; a hard gate only on torus grids with delta <= 1/4
    write_json_file((outdir / "system_report.json").string(), j);
    write_json_file((outdir / "system.json").string(), system_to_json(sys));
    if (!rep.ok()) fail("dyadic system axioms", j);
    if (cloud.is_uniform_torus_grid() && cfg.delta <= 0.25 && !sw.pass) fail("sandwich", j);
    return sys;
  }

  AdjacentFamily run_adjacent(const PointCloud& cloud, int k_min, int k_max) {
    auto fam = build_adjacent_family(cloud, cfg.delta, cfg.K, cfg.family_mode, k_min, k_max,
                                     cfg.seed, cfg.capacity_c);
    json sys_reports = json::array();
    for (int w = 1; w <= fam.K; ++w) {
      auto rep = verify_dyadic_system(cloud, fam.system(w));
      sys_reports.push_back(json{{"omega", w}, {"ok", rep.ok()}});
      if (!rep.ok()) fail("adjacent system axioms", json{{"omega", w}});
    }
    write_json_file((outdir / "family.json").string(), family_to_json(fam));

    // hosting sweep over seeded data-realized balls
    SplitMix rng(splitmix64(cfg.seed ^ 0xba11u));
    std::string csv = "ball,center,radius,omega,level\n";
    json hosts = json::array();
    int failures = 0;
    for (int b = 0; b < cfg.balls; ++b) {
      int c = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cloud.size())));
      int o = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(cloud.size())));
      double r = cloud.dist(c, o);
      if (r <= 0.0) continue;
      if (fam.system(1).side(k_max) > cfg.slack / (cfg.delta * cfg.delta) * r) continue;
      std::vector<BallSpec> balls{{c, r}};
      auto res = find_host(cloud, fam, balls, 0, cfg.slack);
      json h = host_result_to_json(res);
      h["ball"] = json{{"center", c}, {"radius", r}};
      hosts.push_back(std::move(h));
      if (res.found) {
        csv += std::to_string(b) + "," + std::to_string(c) + "," + format_double(r) + "," +
               std::to_string(res.found->omega) + "," +
               std::to_string(res.found->entries[0].cube.level) + "\n";
      } else {
        csv += std::to_string(b) + "," + std::to_string(c) + "," + format_double(r) + ",-1,-1\n";
        ++failures;
      }
    }
    write_text_file((outdir / "hosting.csv").string(), csv);
    write_json_file((outdir / "hosting.json").string(),
                    json{{"results", hosts}, {"failures", failures}});
    summary["hosting_failures"] = failures;
    if (cloud.is_uniform_torus_grid() && cfg.family_mode == FamilyMode::canonical1d &&
        failures > 0)
      fail("canonical hosting", json{{"failures", failures}});
    return fam;
  }

  void run_decompose(const PointCloud& cloud, const DyadicSystem& base, const Measure& mu) {
    int t_worst = 1;
    for (int m : cfg.m_list) t_worst = std::max(t_worst, compute_T(m, cfg.delta));
    int fam_k_min = base.k_min() - 3 - t_worst;
    auto fam = build_adjacent_family(cloud, cfg.delta, cfg.K, cfg.family_mode, fam_k_min,
                                     base.k_max(), cfg.seed, cfg.capacity_c);
    json all = json::array();
    for (int m : cfg.m_list) {
      TauMap tau;
      if (base.canonical_1d())
        tau = canonical_tau_1d(cloud, base, mu, m);
      else
        tau = random_tau(cloud, base, mu, m, cfg.c_tau, cfg.seed);
      auto dec = build_sparse_decomposition(cloud, base, fam, mu, tau);
      auto rep = verify_sparse_decomposition(cloud, base, fam, tau, dec);
      json j;
      j["m"] = m;
      j["tau"] = tau_to_json(tau);
      j["T"] = dec.T;
      j["L"] = dec.L;
      j["families"] = dec.families.size();
      j["family_bound"] = dec.family_bound;
      j["exclusions"] = dec.exclusions.size();
      j["excluded_mass"] = dec.excluded_mass;
      j["p31"] = rep.p31;
      j["p32"] = rep.p32;
      j["p33"] = rep.p33;
      j["disjoint_union"] = rep.disjoint_union;
      j["level_gaps"] = rep.level_gaps;
      j["pairs_same_level"] = rep.pairs_same_level;
      j["pairs_nested"] = rep.pairs_nested;
      write_json_file((outdir / ("decomposition_m" + std::to_string(m) + ".json")).string(),
                      decomposition_to_json(dec));
      if (!rep.ok()) fail("sparse decomposition properties", j);
      if (static_cast<long long>(dec.families.size()) > dec.family_bound)
        fail("sparse family count bound", j);
      all.push_back(std::move(j));
    }
    write_json_file((outdir / "sparse_report.json").string(), all);
  }

  void run_haar(const PointCloud& cloud, const DyadicSystem& sys, const Measure& mu) {
    auto haar = build_haar_system(sys, mu);
    json j;
    // Gram
    std::vector<const HaarFunction*> all;
    haar.for_each([&](const HaarFunction& h) { all.push_back(&h); });
    double worst = 0.0;
    for (std::size_t a = 0; a < all.size(); ++a)
      for (std::size_t b = a; b < all.size(); ++b)
        worst = std::max(worst, std::abs(haar_inner(sys, mu, *all[a], *all[b]) -
                                         (a == b ? 1.0 : 0.0)));
    j["functions"] = all.size();
    j["gram_max_error"] = worst;
    // envelope
    auto env = haar_envelope_check(haar, sys, mu);
    j["envelope_upper"] = env.max_upper;
    j["envelope_lower"] = env.min_lower;
    j["envelope_pass"] = env.pass;
    // round trips on random functions (only when the leaves are singletons)
    double rt_worst = 0.0;
    bool singleton = sys.level_count(sys.k_max()) == cloud.size();
    if (singleton) {
      for (int rep = 0; rep < 10; ++rep) {
        auto rng = substream(cfg.seed ^ 0xaaabu, static_cast<std::uint64_t>(rep));
        VectorFunction f(cloud.size(), cfg.e_dim);
        for (auto& v : f.raw()) v = rng.next_gaussian();
        auto e = expand(f, haar, sys, mu);
        auto back = reconstruct(e, haar, sys, cfg.e_dim);
        for (std::size_t i = 0; i < f.raw().size(); ++i)
          rt_worst = std::max(rt_worst, std::abs(back.raw()[i] - f.raw()[i]));
      }
    }
    j["roundtrip_checked"] = singleton;
    j["roundtrip_max_error"] = rt_worst;
    // tower property
    double tower_worst = 0.0;
    {
      auto rng = substream(cfg.seed ^ 0x70deull, 0);
      VectorFunction f(cloud.size(), 1);
      for (auto& v : f.raw()) v = rng.next_gaussian();
      for (int k = sys.k_min(); k <= sys.k_max(); k += 2)
        for (int l = sys.k_min(); l <= k; l += 2) {
          auto a = conditional_expectation_level(conditional_expectation_level(f, sys, k, mu),
                                                 sys, l, mu);
          auto b = conditional_expectation_level(f, sys, l, mu);
          for (std::size_t i = 0; i < a.raw().size(); ++i)
            tower_worst = std::max(tower_worst, std::abs(a.raw()[i] - b.raw()[i]));
        }
    }
    j["tower_max_error"] = tower_worst;
    write_json_file((outdir / "haar_system.json").string(), haar_system_to_json(haar));
    if (singleton) {
      auto rng = substream(cfg.seed ^ 0xceffull, 0);
      VectorFunction f(cloud.size(), cfg.e_dim);
      for (auto& v : f.raw()) v = rng.next_gaussian();
      auto e = expand(f, haar, sys, mu);
      write_json_file((outdir / "coefficients.json").string(), coefficients_to_json(e.coeffs));
      function_to_csv(f, (outdir / "sample_function.csv").string());
    }
    write_json_file((outdir / "haar_report.json").string(), j);
    if (worst > 1e-10) fail("haar gram identity", j);
    if (singleton && rt_worst > 1e-10) fail("haar round trip", j);
    if (tower_worst > 1e-12) fail("tower property", j);
    if (!env.pass) fail("haar envelope", j);
  }

  void run_stochastic(const PointCloud& cloud, const DyadicSystem& sys, const Measure& mu) {
    auto E = space_from_config(cfg);
    json reports = json::array();
    std::string csv = "op,instance,value,pass\n";
    // Kahane batch, exhaustively enumerated
    int kahane_failures = 0;
    const int kahane_n = 200;
    for (int inst = 0; inst < kahane_n; ++inst) {
      auto rng = substream(cfg.seed ^ 0xaffeull, static_cast<std::uint64_t>(inst));
      int N = 2 + static_cast<int>(rng.next_below(9));
      double qs[] = {1.0, 2.0, 4.0};
      double ps[] = {1.5, 2.0, 3.0};
      auto Ei = NormedSpaceE::lq(1 + static_cast<int>(rng.next_below(4)), qs[rng.next_below(3)]);
      std::vector<std::vector<double>> xs;
      std::vector<double> cs;
      for (int i = 0; i < N; ++i) {
        std::vector<double> x(static_cast<std::size_t>(Ei.dim));
        for (auto& v : x) v = rng.next_gaussian();
        xs.push_back(std::move(x));
        cs.push_back(2.0 * rng.next_u01() - 1.0);
      }
      auto r = kahane_check(Ei, xs, cs, ps[rng.next_below(3)], SignEnsemble::exact());
      if (!r.pass) ++kahane_failures;
      csv += "kahane," + std::to_string(inst) + "," + format_double(r.lhs) + "," +
             (r.pass ? "1" : "0") + "\n";
    }
    reports.push_back(stochastic_report("kahane_batch", fnv1a(std::to_string(cfg.seed)),
                                        kahane_failures, 0.0, 0.0, kahane_failures == 0));
    // Stein batch
    double stein_worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
      auto rng = substream(cfg.seed ^ 0x57e1ull, static_cast<std::uint64_t>(inst));
      int N = 2 + static_cast<int>(rng.next_below(5));
      std::vector<VectorFunction> fs;
      std::vector<int> levels;
      for (int i = 0; i < N; ++i) {
        VectorFunction f(cloud.size(), 1);
        for (auto& v : f.raw()) v = rng.next_gaussian();
        fs.push_back(std::move(f));
        levels.push_back(sys.k_min() +
                         static_cast<int>(rng.next_below(
                             static_cast<std::uint64_t>(sys.k_max() - sys.k_min() + 1))));
      }
      std::sort(levels.begin(), levels.end());
      double ratio =
          stein_ratio(fs, sys, levels, 3.0, SignEnsemble::exact(), mu, NormedSpaceE::scalar());
      stein_worst = std::max(stein_worst, ratio);
      csv += "stein," + std::to_string(inst) + "," + format_double(ratio) + ",1\n";
    }
    reports.push_back(stochastic_report("stein_batch", fnv1a(std::to_string(cfg.seed)),
                                        stein_worst, 0.0, 8.0, stein_worst <= 8.0));
    write_json_file((outdir / "stochastic_report.json").string(), reports);
    write_text_file((outdir / "stochastic.csv").string(), csv);
    (void)E;
    if (kahane_failures > 0) fail("kahane batch", json{{"failures", kahane_failures}});
  }

  void run_experiment() {
    NormGrowthConfig e;
    e.g = cfg.experiment_g;
    e.delta = 0.5;
    e.m_list = cfg.experiment_m;
    e.p_list = cfg.experiment_p;
    e.E = space_from_config(cfg);
    e.samples = cfg.experiment_samples;
    e.seed = cfg.seed;
    e.threads = cfg.threads;
    auto res = norm_growth_experiment(e);
    std::string csv = "m,p,q_E,d,ratio,bound,fitC\n";
    for (const auto& row : res.rows)
      csv += std::to_string(row.m) + "," + format_double(row.p) + "," + format_double(row.q_E) +
             "," + std::to_string(row.d) + "," + format_double(row.ratio) + "," +
             format_double(row.bound) + "," + format_double(row.fit_C) + "\n";
    write_text_file((outdir / "shift_experiment.csv").string(), csv);
    json j;
    for (const auto& [p, C] : res.fit_C) j["fit_C"][format_double(p)] = C;
    for (const auto& [p, s] : res.spearman) j["spearman"][format_double(p)] = s;
    write_json_file((outdir / "shift_experiment.json").string(), j);
    // exact p = 2 scalar case
    for (const auto& row : res.rows)
      if (row.p == 2.0 && e.E.dim == 1 && std::abs(row.ratio - 1.0) > 1e-10)
        fail("shift p=2 isometry", json{{"m", row.m}, {"ratio", row.ratio}});
  }

  int finish(const std::string& command) {
    write_manifest(command);
    summary["command"] = command;
    summary["hard_fail"] = hard_fail;
    write_json_file((outdir / "summary.json").string(), summary);
    if (hard_fail) {
      write_json_file((outdir / "diagnostics.json").string(), diagnostics);
      std::cerr << "invariant failures: see " << (outdir / "diagnostics.json") << "\n";
      return 2;
    }
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dyadic cube systems, sparse decompositions and shift operators\n"
      "config inputs: {\"kind\":\"torus_grid\",\"g\":G} for 2^G equispaced torus points,\n"
      "  {\"kind\":\"random_doubling\",\"n\":N,\"dim\":D,\"seed\":S} for uniform box samples,\n"
      "  {\"kind\":\"csv\",\"path\":P} for id,x1,...,xd rows,\n"
      "  {\"kind\":\"json\",\"path\":P} for an explicit distance matrix under \"dist\""};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  int threads_override = 0;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_override, "output directory (overrides config)");
  auto* seed_opt = app.add_option("--seed", seed_override, "seed (overrides config)");
  app.add_option("--threads", threads_override, "worker threads (overrides config)");

  auto* sub_nets = app.add_subcommand("build-nets", "nested separated nets");
  auto* sub_cubes = app.add_subcommand("build-cubes", "dyadic cube system + verification");
  auto* sub_adj = app.add_subcommand("adjacent", "adjacent family + hosting sweep");
  auto* sub_dec = app.add_subcommand("decompose", "sparse decomposition per m");
  auto* sub_haar = app.add_subcommand("haar", "haar system reports");
  auto* sub_shift = app.add_subcommand("shift-experiment", "norm growth experiment");
  app.add_subcommand("verify-all", "full pipeline and property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    Runner r;
    r.cfg = load_config(config_path);
    if (!out_override.empty()) r.cfg.out = out_override;
    seed_set = seed_opt->count() > 0;
    if (seed_set) r.cfg.seed = seed_override;
    if (threads_override > 0) r.cfg.threads = threads_override;
    r.outdir = fs::path(r.cfg.out);
    fs::create_directories(r.outdir);

    if (sub_shift->parsed()) {
      r.run_experiment();
      return r.finish("shift-experiment");
    }

    auto cloud = make_cloud(r.cfg);
    auto mu = Measure::uniform(cloud.size());

    if (sub_nets->parsed()) {
      r.run_nets(cloud);
      return r.finish("build-nets");
    }
    if (sub_cubes->parsed()) {
      auto nets = r.run_nets(cloud);
      r.run_cubes(cloud, nets);
      return r.finish("build-cubes");
    }
    if (sub_adj->parsed()) {
      int k_max = r.cfg.k_max >= r.cfg.k_min ? r.cfg.k_max
                                             : auto_k_max(cloud, r.cfg.delta, r.cfg.k_min);
      r.run_adjacent(cloud, r.cfg.k_min, k_max);
      return r.finish("adjacent");
    }
    if (sub_dec->parsed()) {
      auto nets = r.run_nets(cloud);
      auto base = cloud.is_uniform_torus_grid()
                      ? build_canonical_system_1d(cloud, r.cfg.delta, nets.k_min, nets.k_max, 0.0)
                      : build_dyadic_system(cloud, nets);
      r.run_decompose(cloud, base, mu);
      return r.finish("decompose");
    }
    if (sub_haar->parsed()) {
      auto nets = r.run_nets(cloud);
      auto sys = r.run_cubes(cloud, nets);
      r.run_haar(cloud, sys, mu);
      return r.finish("haar");
    }
    // verify-all
    auto nets = r.run_nets(cloud);
    auto sys = r.run_cubes(cloud, nets);
    r.run_adjacent(cloud, nets.k_min, nets.k_max);
    auto base = cloud.is_uniform_torus_grid()
                    ? build_canonical_system_1d(cloud, r.cfg.delta, nets.k_min, nets.k_max, 0.0)
                    : build_dyadic_system(cloud, nets);
    r.run_decompose(cloud, base, mu);
    r.run_haar(cloud, sys, mu);
    r.run_stochastic(cloud, sys, mu);
    r.run_experiment();
    return r.finish("verify-all");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
