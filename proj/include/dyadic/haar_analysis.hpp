// Haar systems adapted to a dyadic system and measure, conditional
// expectations over partitions, martingale differences, and expansion /
// reconstruction of vector-valued functions.
#pragma once

#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "dyadic/dyadic_cubes.hpp"
#include "dyadic/metric_core.hpp"

namespace dyadic {

// Finite-dimensional coordinate space with an l^q norm; type/cotype are
// configured (defaults min(q,2), max(q,2)).
struct NormedSpaceE {
  int dim = 1;
  double q = 2.0;
  double type_t = 2.0;
  double cotype_q = 2.0;

  static NormedSpaceE lq(int d, double q);
  static NormedSpaceE scalar() { return lq(1, 2.0); }

  double norm(std::span<const double> v) const;
};

// E-valued function on the cloud, values stored row-major per point.
class VectorFunction {
 public:
  VectorFunction(int n, int dim) : n_(n), dim_(dim), vals_(static_cast<std::size_t>(n) * dim, 0.0) {}
  static VectorFunction scalar(std::vector<double> values);

  int n() const { return n_; }
  int dim() const { return dim_; }
  std::span<double> at(int p) { return {vals_.data() + static_cast<std::size_t>(p) * dim_, static_cast<std::size_t>(dim_)}; }
  std::span<const double> at(int p) const { return {vals_.data() + static_cast<std::size_t>(p) * dim_, static_cast<std::size_t>(dim_)}; }
  std::vector<double>& raw() { return vals_; }
  const std::vector<double>& raw() const { return vals_; }

 private:
  int n_, dim_;
  std::vector<double> vals_;
};

// One Haar branch on a cube: constant on every child, zero elsewhere.
struct HaarFunction {
  CubeId cube;
  int theta = 1;                      // 1-based branch index
  std::vector<double> child_values;   // aligned with the cube's children order
};

class HaarSystem {
 public:
  HaarSystem(int k_min, int k_max) : k_min_(k_min) {
    per_level_.resize(static_cast<std::size_t>(k_max - k_min + 1));
  }
  std::vector<std::vector<HaarFunction>>& mutable_level(int k) { return per_level_[static_cast<std::size_t>(k - k_min_)]; }
  // all branches attached to a cube (empty when it has < 2 children)
  const std::vector<HaarFunction>& of_cube(CubeId id) const {
    return per_level_[static_cast<std::size_t>(id.level - k_min_)][static_cast<std::size_t>(id.index)];
  }
  int total_functions() const;
  template <typename F>
  void for_each(F&& f) const {
    for (const auto& lvl : per_level_)
      for (const auto& cube_fns : lvl)
        for (const auto& h : cube_fns) f(h);
  }

 private:
  int k_min_;
  std::vector<std::vector<std::vector<HaarFunction>>> per_level_;
};

// n(Q)-1 branches per cube with >= 2 children, by L^2(mu)-orthonormalization
// of child indicators against constants, children ordered by center id.
HaarSystem build_haar_system(const DyadicSystem& sys, const Measure& mu);

// h(p); zero off the cube.
double haar_value(const DyadicSystem& sys, const HaarFunction& h, int p);
// integral of h1*h2 dmu
double haar_inner(const DyadicSystem& sys, const Measure& mu, const HaarFunction& a,
                  const HaarFunction& b);

// Piecewise mu-average over an explicit partition; rejects overlapping or
// incomplete partitions.
VectorFunction conditional_expectation(const VectorFunction& f,
                                       const std::vector<std::vector<int>>& partition,
                                       const Measure& mu);
// Average over the cubes of one level.
VectorFunction conditional_expectation_level(const VectorFunction& f, const DyadicSystem& sys,
                                             int k, const Measure& mu);

// d_{k_min} = E[f|D^{k_min}], then successive differences; the sum telescopes
// to E[f|D^{k_max}].
std::vector<VectorFunction> martingale_differences(const VectorFunction& f,
                                                   const DyadicSystem& sys, const Measure& mu);

// Coefficients keyed by (level, index, theta).
struct HaarCoefficients {
  using Key = std::tuple<int, int, int>;
  int dim = 1;
  std::map<Key, std::vector<double>> entries;
};

struct Expansion {
  HaarCoefficients coeffs;
  std::vector<std::vector<double>> top_averages;  // per top-level cube
};

// Full-branch expansion; requires singleton leaves so the expansion is
// complete.
Expansion expand(const VectorFunction& f, const HaarSystem& haar, const DyadicSystem& sys,
                 const Measure& mu);
VectorFunction reconstruct(const Expansion& e, const HaarSystem& haar, const DyadicSystem& sys,
                           int dim);

// Envelope ratios of (4.1)/(4.3): sup norm against mu(Q)^{-1/2} above, best
// child against mu(Q_k)^{-1/2} below.
struct EnvelopeReport {
  double max_upper = 1.0;  // max over cubes of ||h||_inf mu(Q)^{1/2}
  double min_lower = 1.0;  // min over cubes of max_c |v_c| mu(Q_c)^{1/2}
  int functions_checked = 0;
  double budget_upper = 4.0;
  double budget_lower = 0.25;
  bool pass = true;
};
EnvelopeReport haar_envelope_check(const HaarSystem& haar, const DyadicSystem& sys,
                                   const Measure& mu, double budget_upper = 4.0,
                                   double budget_lower = 0.25);

}  // namespace dyadic
