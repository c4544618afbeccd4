#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "dyadic/haar_analysis.hpp"
#include "dyadic/metric_core.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/stochastic_norms.hpp"

using namespace dyadic;

namespace {

PointCloud line16() { return PointCloud::grid_1d(16, PointCloud::Topology::line); }

DyadicSystem line16_system() {
  auto g = line16();
  return build_dyadic_system(g, build_nested_nets(g, 0.5, 0, 4));
}

VectorFunction random_function(int n, int dim, std::uint64_t seed) {
  VectorFunction f(n, dim);
  SplitMix rng(seed);
  for (auto& v : f.raw()) v = rng.next_gaussian();
  return f;
}

}  // namespace

TEST_CASE("two equal-mass children give the +1/-1 Haar function") {
  auto c = PointCloud::from_points({{0.0}, {0.6}});
  auto sys = build_dyadic_system(c, build_nested_nets(c, 0.5, 0, 1));
  auto mu = Measure::uniform(2);  // masses 1/2 each
  auto haar = build_haar_system(sys, mu);
  const auto& fns = haar.of_cube(CubeId{0, 0});
  REQUIRE(fns.size() == 1);
  CHECK(haar_value(sys, fns[0], 0) == doctest::Approx(1.0));
  CHECK(haar_value(sys, fns[0], 1) == doctest::Approx(-1.0));
}

TEST_CASE("two-child Haar formula with skewed masses") {
  auto c = PointCloud::from_points({{0.0}, {0.6}});
  auto sys = build_dyadic_system(c, build_nested_nets(c, 0.5, 0, 1));
  Measure mu({0.9, 0.1});
  auto haar = build_haar_system(sys, mu);
  const auto& h = haar.of_cube(CubeId{0, 0})[0];
  double v1 = std::sqrt(0.1 / (0.9 * 1.0));
  double v2 = -std::sqrt(0.9 / (0.1 * 1.0));
  CHECK(haar_value(sys, h, 0) == doctest::Approx(v1));
  CHECK(haar_value(sys, h, 1) == doctest::Approx(v2));
  // direct integration oracle: mean zero and unit L^2 norm
  double mean = 0.9 * haar_value(sys, h, 0) + 0.1 * haar_value(sys, h, 1);
  double nrm = 0.9 * v1 * v1 + 0.1 * v2 * v2;
  CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("three equal-mass children: two branches, identity Gram") {
  auto c = PointCloud::from_points({{0.0}, {0.3}, {0.6}});
  auto nets = build_nested_nets(c, 0.3, 0, 1);  // level 1 separates all three points
  auto sys = build_dyadic_system(c, nets);
  auto mu = Measure::uniform(3);
  auto haar = build_haar_system(sys, mu);
  const auto& fns = haar.of_cube(CubeId{0, 0});
  REQUIRE(fns.size() == 2);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      CHECK(haar_inner(sys, mu, fns[a], fns[b]) ==
            doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("global Gram matrix is the identity") {
  auto sys = line16_system();
  auto mu = Measure::uniform(16);
  auto haar = build_haar_system(sys, mu);
  std::vector<const HaarFunction*> all;
  haar.for_each([&](const HaarFunction& h) { all.push_back(&h); });
  REQUIRE(all.size() == 15);  // full binary tree on 16 leaves
  double worst = 0.0;
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a; b < all.size(); ++b) {
      double ip = haar_inner(sys, mu, *all[a], *all[b]);
      worst = std::max(worst, std::abs(ip - (a == b ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("haar functions are mean-zero at their own level") {
  auto sys = line16_system();
  auto mu = Measure::uniform(16);
  auto haar = build_haar_system(sys, mu);
  haar.for_each([&](const HaarFunction& h) {
    VectorFunction f(16, 1);
    for (int p = 0; p < 16; ++p) f.at(p)[0] = haar_value(sys, h, p);
    auto ce = conditional_expectation_level(f, sys, h.cube.level, mu);
    for (int p = 0; p < 16; ++p) CHECK(std::abs(ce.at(p)[0]) < 1e-12);
  });
}

TEST_CASE("conditional expectation examples") {
  auto mu = Measure::uniform(3, 3.0);  // unit weights
  auto f = VectorFunction::scalar({2.0, 4.0, 5.0});
  auto g = conditional_expectation(f, {{0, 1}, {2}}, mu);
  CHECK(g.at(0)[0] == doctest::Approx(3.0));
  CHECK(g.at(1)[0] == doctest::Approx(3.0));
  CHECK(g.at(2)[0] == doctest::Approx(5.0));

  auto id = conditional_expectation(f, {{0}, {1}, {2}}, mu);
  for (int p = 0; p < 3; ++p) CHECK(id.at(p)[0] == f.at(p)[0]);

  auto c = VectorFunction::scalar({7.0, 7.0, 7.0});
  auto cc = conditional_expectation(c, {{0, 1}, {2}}, mu);
  for (int p = 0; p < 3; ++p) CHECK(cc.at(p)[0] == doctest::Approx(7.0));

  CHECK_THROWS_AS(conditional_expectation(f, {{0, 1}, {1, 2}}, mu), std::invalid_argument);
  CHECK_THROWS_AS(conditional_expectation(f, {{0, 1}}, mu), std::invalid_argument);
}

TEST_CASE("conditional expectation preserves part integrals") {
  Measure mu([&] {
    std::vector<double> w(32);
    SplitMix rng(5);
    for (auto& x : w) x = 0.5 + rng.next_u01();
    return w;
  }());
  auto f = random_function(32, 2, 9);
  std::vector<std::vector<int>> parts = {{}, {}, {}};
  for (int p = 0; p < 32; ++p) parts[static_cast<std::size_t>(p % 3)].push_back(p);
  auto g = conditional_expectation(f, parts, mu);
  for (const auto& part : parts)
    for (int d = 0; d < 2; ++d) {
      double a = 0.0, b = 0.0;
      for (int p : part) {
        a += mu.mass(p) * f.at(p)[static_cast<std::size_t>(d)];
        b += mu.mass(p) * g.at(p)[static_cast<std::size_t>(d)];
      }
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("tower property") {
  auto sys = line16_system();
  auto mu = Measure::uniform(16);
  auto f = random_function(16, 2, 21);
  for (int j = 0; j <= 4; ++j)
    for (int k = j; k <= 4; ++k) {
      auto inner = conditional_expectation_level(f, sys, k, mu);
      auto lhs = conditional_expectation_level(inner, sys, j, mu);
      auto rhs = conditional_expectation_level(f, sys, j, mu);
      for (std::size_t i = 0; i < lhs.raw().size(); ++i)
        CHECK(std::abs(lhs.raw()[i] - rhs.raw()[i]) < 1e-12);
    }
}

TEST_CASE("conditional expectation contracts L^p") {
  auto sys = line16_system();
  auto mu = Measure::uniform(16);
  auto E = NormedSpaceE::lq(2, 2.0);
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto f = random_function(16, 2, seed);
    for (double p : {1.0, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
      auto g = conditional_expectation_level(f, sys, 2, mu);
      CHECK(bochner_norm(g, p, mu, E) <= bochner_norm(f, p, mu, E) + 1e-12);
    }
  }
}

TEST_CASE("martingale differences") {
  auto sys = line16_system();
  auto mu = Measure::uniform(16);

  auto c = VectorFunction::scalar(std::vector<double>(16, 3.5));
  auto dc = martingale_differences(c, sys, mu);
  for (std::size_t k = 1; k < dc.size(); ++k)
    for (double v : dc[k].raw()) CHECK(std::abs(v) < 1e-12);

  // indicator of {x < 1/2}: only the level-1 difference survives
  std::vector<double> ind(16, 0.0);
  for (int i = 0; i < 8; ++i) ind[static_cast<std::size_t>(i)] = 1.0;
  auto f = VectorFunction::scalar(ind);
  auto df = martingale_differences(f, sys, mu);
  for (int p = 0; p < 16; ++p)
    CHECK(df[1].at(p)[0] == doctest::Approx(ind[static_cast<std::size_t>(p)] - 0.5));
  for (std::size_t k = 2; k < df.size(); ++k)
    for (double v : df[k].raw()) CHECK(std::abs(v) < 1e-12);

  // telescoping to f on singleton leaves
  auto r = random_function(16, 3, 77);
  auto dr = martingale_differences(r, sys, mu);
  std::vector<double> sum(static_cast<std::size_t>(16 * 3), 0.0);
  for (const auto& d : dr)
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += d.raw()[i];
  for (std::size_t i = 0; i < sum.size(); ++i)
    CHECK(sum[i] == doctest::Approx(r.raw()[i]).epsilon(1e-12));

  // mean-zero against the coarser level
  for (std::size_t k = 1; k < dr.size(); ++k) {
    auto z = conditional_expectation_level(dr[k], sys, sys.k_min() + static_cast<int>(k) - 1, mu);
    for (double v : z.raw()) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("expand/reconstruct round trip") {
  auto sys = line16_system();
  auto mu = Measure::uniform(16);
  auto haar = build_haar_system(sys, mu);

  // f = one Haar function: unit coefficient there, zero elsewhere
  const auto& h = haar.of_cube(CubeId{1, 0})[0];
  VectorFunction f(16, 1);
  for (int p = 0; p < 16; ++p) f.at(p)[0] = haar_value(sys, h, p);
  auto e = expand(f, haar, sys, mu);
  for (const auto& [key, x] : e.coeffs.entries) {
    auto [k, idx, theta] = key;
    double expected = (k == 1 && idx == 0 && theta == 1) ? 1.0 : 0.0;
    CHECK(x[0] == doctest::Approx(expected).epsilon(1e-10));
  }
  for (const auto& avg : e.top_averages) CHECK(std::abs(avg[0]) < 1e-12);

  // constants live entirely in the top averages
  auto c = VectorFunction::scalar(std::vector<double>(16, 2.25));
  auto ec = expand(c, haar, sys, mu);
  for (const auto& [key, x] : ec.coeffs.entries) CHECK(std::abs(x[0]) < 1e-12);
  CHECK(ec.top_averages[0][0] == doctest::Approx(2.25));

  for (std::uint64_t seed : {4ull, 5ull, 6ull}) {
    auto r = random_function(16, 2, seed);
    auto er = expand(r, haar, sys, mu);
    auto back = reconstruct(er, haar, sys, 2);
    for (std::size_t i = 0; i < r.raw().size(); ++i)
      CHECK(std::abs(back.raw()[i] - r.raw()[i]) < 1e-10);
  }
}

TEST_CASE("expand rejects systems without singleton leaves") {
  auto g = line16();
  auto sys = build_dyadic_system(g, build_nested_nets(g, 0.5, 0, 2));
  auto mu = Measure::uniform(16);
  auto haar = build_haar_system(sys, mu);
  auto f = random_function(16, 1, 8);
  CHECK_THROWS_AS(expand(f, haar, sys, mu), std::invalid_argument);
}

TEST_CASE("envelope report") {
  // equal-mass two-child cube: the upper ratio is exactly 1
  auto c2 = PointCloud::from_points({{0.0}, {0.6}});
  auto sys2 = build_dyadic_system(c2, build_nested_nets(c2, 0.5, 0, 1));
  auto mu2 = Measure::uniform(2);
  auto rep2 = haar_envelope_check(build_haar_system(sys2, mu2), sys2, mu2);
  CHECK(rep2.max_upper == doctest::Approx(1.0));
  CHECK(rep2.pass);

  // skewed masses (0.9, 0.1): ratio 3
  Measure skew({0.9, 0.1});
  auto reps = haar_envelope_check(build_haar_system(sys2, skew), sys2, skew, 4.0, 0.25);
  CHECK(reps.max_upper == doctest::Approx(3.0));

  // LINE16: everything within [1, budget]
  auto sys = line16_system();
  auto mu = Measure::uniform(16);
  auto rep = haar_envelope_check(build_haar_system(sys, mu), sys, mu);
  CHECK(rep.max_upper >= 1.0);
  CHECK(rep.max_upper <= 4.0);
  CHECK(rep.min_lower >= 0.25);
  CHECK(rep.pass);
}
