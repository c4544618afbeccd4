// Bochner L^p norms, randomized-sign norms, Kahane / Stein verification
// harnesses and the type-cotype exponent.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dyadic/dyadic_cubes.hpp"
#include "dyadic/haar_analysis.hpp"
#include "dyadic/metric_core.hpp"

namespace dyadic {

struct SignEnsemble {
  enum class Mode { exact, monte_carlo };
  Mode mode = Mode::exact;
  int trials = 0;
  std::uint64_t seed = 0;

  static SignEnsemble exact() { return {Mode::exact, 0, 0}; }
  static SignEnsemble monte_carlo(int trials, std::uint64_t seed) {
    return {Mode::monte_carlo, trials, seed};
  }
};

// (sum_x mu(x) ||f(x)||_E^p)^{1/p}; p = inf gives the max. p >= 1 (p = 1 is
// allowed for diagnostics).
double bochner_norm(const VectorFunction& f, double p, const Measure& mu,
                    const NormedSpaceE& E);

struct RandomizedNorm {
  double value = 0.0;
  double std_error = 0.0;  // zero in exact mode
};

// (E_eps || sum_i eps_i g_i ||_p^p)^{1/p}; exact enumeration for <= 20
// summands, counter-seeded Monte Carlo otherwise.
RandomizedNorm randomized_norm(std::span<const VectorFunction> summands, double p,
                               const SignEnsemble& ens, const Measure& mu,
                               const NormedSpaceE& E);

struct KahaneResult {
  double lhs = 0.0;  // E || sum eps_i c_i x_i ||^p
  double rhs = 0.0;  // (max |c_i|)^p E || sum eps_i x_i ||^p
  bool pass = false;
};
KahaneResult kahane_check(const NormedSpaceE& E, const std::vector<std::vector<double>>& points,
                          const std::vector<double>& scalars, double p, const SignEnsemble& ens);

// || sum eps_k E[f_k | D^{levels_k}] ||_{Omega,p} / || sum eps_k f_k ||_{Omega,p};
// levels must be nondecreasing (nested filtration).
double stein_ratio(std::span<const VectorFunction> fs, const DyadicSystem& sys,
                   std::span<const int> levels, double p, const SignEnsemble& ens,
                   const Measure& mu, const NormedSpaceE& E);

// 1/min(t_E, p) - 1/max(q_E, p)
double alpha_exponent(double type_t, double cotype_q, double p);

}  // namespace dyadic
