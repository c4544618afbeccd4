#include "dyadic/stochastic_norms.hpp"

#include <cmath>
#include <stdexcept>

#include "dyadic/rng.hpp"

namespace dyadic {

namespace {

constexpr int kExactLimit = 20;

double pth_power_norm(const std::vector<double>& vals, int n, int dim, double p,
                      const Measure& mu, const NormedSpaceE& E) {
  double acc = 0.0;
  for (int x = 0; x < n; ++x) {
    std::span<const double> v{vals.data() + static_cast<std::size_t>(x) * dim, static_cast<std::size_t>(dim)};
    acc += mu.mass(x) * std::pow(E.norm(v), p);
  }
  return acc;
}

}  // namespace

double bochner_norm(const VectorFunction& f, double p, const Measure& mu,
                    const NormedSpaceE& E) {
  if (!(p >= 1.0)) throw std::invalid_argument("bochner_norm needs p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (int x = 0; x < f.n(); ++x) m = std::max(m, E.norm(f.at(x)));
    return m;
  }
  double acc = 0.0;
  for (int x = 0; x < f.n(); ++x) acc += mu.mass(x) * std::pow(E.norm(f.at(x)), p);
  return std::pow(acc, 1.0 / p);
}

RandomizedNorm randomized_norm(std::span<const VectorFunction> summands, double p,
                               const SignEnsemble& ens, const Measure& mu,
                               const NormedSpaceE& E) {
  if (!(p >= 1.0) || std::isinf(p))
    throw std::invalid_argument("randomized_norm needs finite p >= 1");
  if (summands.empty()) return {0.0, 0.0};
  int N = static_cast<int>(summands.size());
  int n = summands[0].n();
  int dim = summands[0].dim();
  for (const auto& g : summands)
    if (g.n() != n || g.dim() != dim)
      throw std::invalid_argument("summands must share the cloud and dimension");

  if (ens.mode == SignEnsemble::Mode::exact) {
    if (N > kExactLimit) throw std::invalid_argument("exact mode supports at most 20 summands");
    // Gray-code walk over all sign patterns; one summand flips per step.
    std::vector<double> S(static_cast<std::size_t>(n) * dim, 0.0);
    std::vector<int> sign(static_cast<std::size_t>(N), 1);
    for (const auto& g : summands)
      for (std::size_t i = 0; i < S.size(); ++i) S[i] += g.raw()[i];
    double acc = pth_power_norm(S, n, dim, p, mu, E);
    std::uint64_t patterns = 1ull << N;
    for (std::uint64_t step = 1; step < patterns; ++step) {
      int bit = __builtin_ctzll(step);
      double delta = -2.0 * sign[static_cast<std::size_t>(bit)];
      sign[static_cast<std::size_t>(bit)] = -sign[static_cast<std::size_t>(bit)];
      const auto& g = summands[static_cast<std::size_t>(bit)].raw();
      for (std::size_t i = 0; i < S.size(); ++i) S[i] += delta * g[i];
      acc += pth_power_norm(S, n, dim, p, mu, E);
    }
    return {std::pow(acc / static_cast<double>(patterns), 1.0 / p), 0.0};
  }

  if (ens.trials <= 0) throw std::invalid_argument("monte carlo mode needs trials > 0");
  double sum = 0.0, sum_sq = 0.0;
  std::vector<double> S(static_cast<std::size_t>(n) * dim);
  for (int t = 0; t < ens.trials; ++t) {
    auto rng = substream(ens.seed, static_cast<std::uint64_t>(t));
    std::fill(S.begin(), S.end(), 0.0);
    for (const auto& g : summands) {
      double s = static_cast<double>(rng.next_sign());
      for (std::size_t i = 0; i < S.size(); ++i) S[i] += s * g.raw()[i];
    }
    double y = pth_power_norm(S, n, dim, p, mu, E);
    sum += y;
    sum_sq += y * y;
  }
  double mean = sum / ens.trials;
  double value = std::pow(mean, 1.0 / p);
  double var = std::max(0.0, sum_sq / ens.trials - mean * mean);
  double se_mean = std::sqrt(var / ens.trials);
  // delta method through mean^{1/p}
  double se = mean > 0.0 ? se_mean * std::pow(mean, 1.0 / p - 1.0) / p : 0.0;
  return {value, se};
}

KahaneResult kahane_check(const NormedSpaceE& E, const std::vector<std::vector<double>>& points,
                          const std::vector<double>& scalars, double p, const SignEnsemble& ens) {
  if (points.size() != scalars.size())
    throw std::invalid_argument("kahane_check needs one scalar per vector");
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("kahane_check needs finite p >= 1");
  int N = static_cast<int>(points.size());
  KahaneResult res;
  if (N == 0) {
    res.pass = true;
    return res;
  }
  int dim = E.dim;
  for (const auto& x : points)
    if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("vector dimension mismatch");
  double cmax = 0.0;
  for (double c : scalars) cmax = std::max(cmax, std::abs(c));

  auto expectation = [&](bool scaled) {
    std::vector<double> S(static_cast<std::size_t>(dim));
    if (ens.mode == SignEnsemble::Mode::exact) {
      if (N > kExactLimit) throw std::invalid_argument("exact mode supports at most 20 vectors");
      double acc = 0.0;
      std::uint64_t patterns = 1ull << N;
      for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        std::fill(S.begin(), S.end(), 0.0);
        for (int i = 0; i < N; ++i) {
          double s = (mask >> i & 1u) ? -1.0 : 1.0;
          if (scaled) s *= scalars[static_cast<std::size_t>(i)];
          for (int d = 0; d < dim; ++d) S[static_cast<std::size_t>(d)] += s * points[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
        }
        acc += std::pow(E.norm(S), p);
      }
      return acc / static_cast<double>(patterns);
    }
    if (ens.trials <= 0) throw std::invalid_argument("monte carlo mode needs trials > 0");
    double acc = 0.0;
    for (int t = 0; t < ens.trials; ++t) {
      auto rng = substream(ens.seed, static_cast<std::uint64_t>(t));
      std::fill(S.begin(), S.end(), 0.0);
      for (int i = 0; i < N; ++i) {
        double s = static_cast<double>(rng.next_sign());
        if (scaled) s *= scalars[static_cast<std::size_t>(i)];
        for (int d = 0; d < dim; ++d) S[static_cast<std::size_t>(d)] += s * points[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
      }
      acc += std::pow(E.norm(S), p);
    }
    return acc / ens.trials;
  };

  res.lhs = expectation(true);
  res.rhs = std::pow(cmax, p) * expectation(false);
  res.pass = res.lhs <= res.rhs + 1e-9 * (1.0 + res.rhs);
  return res;
}

double stein_ratio(std::span<const VectorFunction> fs, const DyadicSystem& sys,
                   std::span<const int> levels, double p, const SignEnsemble& ens,
                   const Measure& mu, const NormedSpaceE& E) {
  if (fs.size() != levels.size())
    throw std::invalid_argument("stein_ratio needs one level per summand");
  for (std::size_t i = 0; i + 1 < levels.size(); ++i)
    if (levels[i] > levels[i + 1])
      throw std::invalid_argument("stein_ratio needs nondecreasing levels");
  std::vector<VectorFunction> gs;
  gs.reserve(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i)
    gs.push_back(conditional_expectation_level(fs[i], sys, levels[i], mu));
  double num = randomized_norm(gs, p, ens, mu, E).value;
  double den = randomized_norm(fs, p, ens, mu, E).value;
  if (den == 0.0) return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

double alpha_exponent(double type_t, double cotype_q, double p) {
  if (!(type_t >= 1.0 && type_t <= 2.0)) throw std::invalid_argument("type must lie in [1,2]");
  if (!(cotype_q >= 2.0)) throw std::invalid_argument("cotype must lie in [2,inf]");
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("p must lie in (1,inf)");
  double lo = std::min(type_t, p);
  double hi = std::max(cotype_q, p);
  return 1.0 / lo - (std::isinf(hi) ? 0.0 : 1.0 / hi);
}

}  // namespace dyadic
