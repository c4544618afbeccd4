// Admissible cube rearrangements, the Haar shift operator, the norm
// equivalence ratio of Haar sums against randomized indicator sums, and the
// norm-growth experiment.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dyadic/haar_analysis.hpp"
#include "dyadic/sparse_decomposition.hpp"
#include "dyadic/stochastic_norms.hpp"

namespace dyadic {

// tau(Q_j^k) = Q_{(j+m) mod N_k}^k on a canonical 1-D torus system; exact
// index arithmetic, conditions re-verified against the configured budgets.
TauMap canonical_tau_1d(const PointCloud& cloud, const DyadicSystem& sys, const Measure& mu,
                        int m);

// Seeded random injective matching per level under the tau(Q) in m B_Q and
// measure-comparability constraints; levels without a full admissible
// matching fall back to the identity and are noted.
TauMap random_tau(const PointCloud& cloud, const DyadicSystem& sys, const Measure& mu, double m,
                  double c_tau_budget, std::uint64_t seed);

// Coefficient at tau(Q) equals the input coefficient at Q. Every input key
// must sit on a cube carrying the matching Haar branch, and so must its image.
HaarCoefficients apply_shift(const DyadicSystem& sys, const HaarSystem& haar, const TauMap& tau,
                             const HaarCoefficients& coeffs);

// || sum x_Q h_Q ||_p  /  || sum eps_Q x_Q 1_Q / mu(Q)^{1/2} ||_{Omega,p};
// empty input gives 1 by convention.
double lemma42_ratio(const HaarCoefficients& coeffs, const HaarSystem& haar,
                     const DyadicSystem& sys, double p, const SignEnsemble& ens,
                     const Measure& mu, const NormedSpaceE& E);

struct NormGrowthConfig {
  int g = 12;                      // torus grid 2^g
  double delta = 0.5;
  std::vector<int> m_list;
  std::vector<double> p_list;
  NormedSpaceE E = NormedSpaceE::scalar();
  int samples = 1000;              // coefficient samples per (m, p)
  std::uint64_t seed = 0;
  int threads = 1;
};

struct NormGrowthRow {
  int m = 1;
  double p = 2.0;
  double q_E = 2.0;
  int d = 1;
  double ratio = 1.0;   // max sampled ||Tf||_p / ||f||_p
  double bound = 1.0;   // (log(2m) + 1)^alpha
  double fit_C = 1.0;   // least C with ratio <= C * bound over the m-range
};

struct NormGrowthResult {
  std::vector<NormGrowthRow> rows;
  std::map<double, double> fit_C;     // per p
  std::map<double, double> spearman;  // rank correlation of ratio vs log(2m), per p
};

NormGrowthResult norm_growth_experiment(const NormGrowthConfig& cfg);

}  // namespace dyadic
