#include "dyadic/haar_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dyadic {

NormedSpaceE NormedSpaceE::lq(int d, double q) {
  if (d < 1) throw std::invalid_argument("E needs dimension >= 1");
  if (!(q >= 1.0)) throw std::invalid_argument("l^q norm needs q >= 1");
  NormedSpaceE e;
  e.dim = d;
  e.q = q;
  e.type_t = std::min(q, 2.0);
  e.cotype_q = std::max(q, 2.0);
  return e;
}

double NormedSpaceE::norm(std::span<const double> v) const {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  if (q == 2.0) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  if (q == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), q);
  return std::pow(s, 1.0 / q);
}

VectorFunction VectorFunction::scalar(std::vector<double> values) {
  VectorFunction f(static_cast<int>(values.size()), 1);
  f.vals_ = std::move(values);
  return f;
}

int HaarSystem::total_functions() const {
  int c = 0;
  for (const auto& lvl : per_level_)
    for (const auto& fns : lvl) c += static_cast<int>(fns.size());
  return c;
}

HaarSystem build_haar_system(const DyadicSystem& sys, const Measure& mu) {
  HaarSystem haar(sys.k_min(), sys.k_max());
  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    auto& lvl = haar.mutable_level(k);
    lvl.resize(static_cast<std::size_t>(sys.level_count(k)));
    if (k == sys.k_max()) continue;
    for (const auto& q : sys.level(k)) {
      int c = static_cast<int>(q.children.size());
      if (c < 2) continue;
      // children are stored sorted by index; indices follow center id order
      std::vector<double> masses(static_cast<std::size_t>(c));
      for (int i = 0; i < c; ++i)
        masses[static_cast<std::size_t>(i)] =
            mu.mass_of(sys.cube(k + 1, q.children[static_cast<std::size_t>(i)]).members);
      double prefix = masses[0];
      for (int theta = 1; theta < c; ++theta) {
        double mnext = masses[static_cast<std::size_t>(theta)];
        double total = prefix + mnext;
        HaarFunction h;
        h.cube = CubeId{k, q.index};
        h.theta = theta;
        h.child_values.assign(static_cast<std::size_t>(c), 0.0);
        double a = std::sqrt(mnext / (prefix * total));
        double b = -std::sqrt(prefix / (mnext * total));
        for (int i = 0; i < theta; ++i) h.child_values[static_cast<std::size_t>(i)] = a;
        h.child_values[static_cast<std::size_t>(theta)] = b;
        lvl[static_cast<std::size_t>(q.index)].push_back(std::move(h));
        prefix = total;
      }
    }
  }
  return haar;
}

double haar_value(const DyadicSystem& sys, const HaarFunction& h, int p) {
  const Cube& q = sys.cube(h.cube);
  if (!std::binary_search(q.members.begin(), q.members.end(), p)) return 0.0;
  int child = sys.cube_index_of(h.cube.level + 1, p);
  auto it = std::lower_bound(q.children.begin(), q.children.end(), child);
  return h.child_values[static_cast<std::size_t>(it - q.children.begin())];
}

double haar_inner(const DyadicSystem& sys, const Measure& mu, const HaarFunction& a,
                  const HaarFunction& b) {
  const HaarFunction& deep = a.cube.level >= b.cube.level ? a : b;
  const HaarFunction& other = a.cube.level >= b.cube.level ? b : a;
  double s = 0.0;
  for (int p : sys.cube(deep.cube).members)
    s += haar_value(sys, deep, p) * haar_value(sys, other, p) * mu.mass(p);
  return s;
}

VectorFunction conditional_expectation(const VectorFunction& f,
                                       const std::vector<std::vector<int>>& partition,
                                       const Measure& mu) {
  int n = f.n();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const auto& part : partition)
    for (int p : part) {
      if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)])
        throw std::invalid_argument("partition parts overlap or leave the cloud");
      seen[static_cast<std::size_t>(p)] = 1;
    }
  for (char s : seen)
    if (!s) throw std::invalid_argument("partition does not cover the cloud");

  VectorFunction out(n, f.dim());
  std::vector<double> avg(static_cast<std::size_t>(f.dim()));
  for (const auto& part : partition) {
    double mass = 0.0;
    std::fill(avg.begin(), avg.end(), 0.0);
    for (int p : part) {
      double w = mu.mass(p);
      mass += w;
      auto v = f.at(p);
      for (int d = 0; d < f.dim(); ++d) avg[static_cast<std::size_t>(d)] += w * v[static_cast<std::size_t>(d)];
    }
    for (auto& x : avg) x /= mass;
    for (int p : part) {
      auto v = out.at(p);
      for (int d = 0; d < f.dim(); ++d) v[static_cast<std::size_t>(d)] = avg[static_cast<std::size_t>(d)];
    }
  }
  return out;
}

VectorFunction conditional_expectation_level(const VectorFunction& f, const DyadicSystem& sys,
                                             int k, const Measure& mu) {
  std::vector<std::vector<int>> parts;
  parts.reserve(static_cast<std::size_t>(sys.level_count(k)));
  for (const auto& q : sys.level(k)) parts.push_back(q.members);
  return conditional_expectation(f, parts, mu);
}

std::vector<VectorFunction> martingale_differences(const VectorFunction& f,
                                                   const DyadicSystem& sys, const Measure& mu) {
  std::vector<VectorFunction> out;
  VectorFunction prev(f.n(), f.dim());
  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    VectorFunction cur = conditional_expectation_level(f, sys, k, mu);
    if (k == sys.k_min()) {
      out.push_back(cur);
    } else {
      VectorFunction d(f.n(), f.dim());
      for (std::size_t i = 0; i < d.raw().size(); ++i) d.raw()[i] = cur.raw()[i] - prev.raw()[i];
      out.push_back(std::move(d));
    }
    prev = std::move(cur);
  }
  return out;
}

Expansion expand(const VectorFunction& f, const HaarSystem& haar, const DyadicSystem& sys,
                 const Measure& mu) {
  if (sys.level_count(sys.k_max()) != sys.n_points())
    throw std::invalid_argument("expansion needs singleton leaves");
  Expansion e;
  e.coeffs.dim = f.dim();
  int dim = f.dim();
  // per-cube integrals of f, one level at a time
  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    std::vector<std::vector<double>> integral(static_cast<std::size_t>(sys.level_count(k)),
                                              std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    for (int p = 0; p < f.n(); ++p) {
      auto v = f.at(p);
      auto& acc = integral[static_cast<std::size_t>(sys.cube_index_of(k, p))];
      double w = mu.mass(p);
      for (int d = 0; d < dim; ++d) acc[static_cast<std::size_t>(d)] += w * v[static_cast<std::size_t>(d)];
    }
    if (k == sys.k_min()) {
      e.top_averages.resize(integral.size());
      for (std::size_t i = 0; i < integral.size(); ++i) {
        double mass = mu.mass_of(sys.cube(k, static_cast<int>(i)).members);
        e.top_averages[i] = integral[i];
        for (auto& x : e.top_averages[i]) x /= mass;
      }
    }
    if (k == sys.k_max()) continue;
    // coefficients of level-k cubes need child integrals; recompute per child
    for (const auto& q : sys.level(k)) {
      const auto& fns = haar.of_cube(CubeId{k, q.index});
      if (fns.empty()) continue;
      std::vector<std::vector<double>> child_int(q.children.size(),
                                                 std::vector<double>(static_cast<std::size_t>(dim), 0.0));
      for (std::size_t ci = 0; ci < q.children.size(); ++ci) {
        for (int p : sys.cube(k + 1, q.children[ci]).members) {
          auto v = f.at(p);
          double w = mu.mass(p);
          for (int d = 0; d < dim; ++d) child_int[ci][static_cast<std::size_t>(d)] += w * v[static_cast<std::size_t>(d)];
        }
      }
      for (const auto& h : fns) {
        std::vector<double> coeff(static_cast<std::size_t>(dim), 0.0);
        for (std::size_t ci = 0; ci < q.children.size(); ++ci) {
          double v = h.child_values[ci];
          if (v == 0.0) continue;
          for (int d = 0; d < dim; ++d) coeff[static_cast<std::size_t>(d)] += v * child_int[ci][static_cast<std::size_t>(d)];
        }
        e.coeffs.entries[{k, q.index, h.theta}] = std::move(coeff);
      }
    }
  }
  return e;
}

VectorFunction reconstruct(const Expansion& e, const HaarSystem& haar, const DyadicSystem& sys,
                           int dim) {
  VectorFunction out(sys.n_points(), dim);
  for (std::size_t i = 0; i < e.top_averages.size(); ++i) {
    const auto& avg = e.top_averages[i];
    for (int p : sys.cube(sys.k_min(), static_cast<int>(i)).members) {
      auto v = out.at(p);
      for (int d = 0; d < dim; ++d) v[static_cast<std::size_t>(d)] += avg[static_cast<std::size_t>(d)];
    }
  }
  for (const auto& [key, coeff] : e.coeffs.entries) {
    auto [k, idx, theta] = key;
    const Cube& q = sys.cube(k, idx);
    const auto& fns = haar.of_cube(CubeId{k, idx});
    const HaarFunction* h = nullptr;
    for (const auto& f : fns)
      if (f.theta == theta) h = &f;
    if (!h) throw std::invalid_argument("coefficient without a matching Haar branch");
    for (std::size_t ci = 0; ci < q.children.size(); ++ci) {
      double v = h->child_values[ci];
      if (v == 0.0) continue;
      for (int p : sys.cube(k + 1, q.children[ci]).members) {
        auto o = out.at(p);
        for (int d = 0; d < dim; ++d) o[static_cast<std::size_t>(d)] += v * coeff[static_cast<std::size_t>(d)];
      }
    }
  }
  return out;
}

EnvelopeReport haar_envelope_check(const HaarSystem& haar, const DyadicSystem& sys,
                                   const Measure& mu, double budget_upper, double budget_lower) {
  EnvelopeReport rep;
  rep.budget_upper = budget_upper;
  rep.budget_lower = budget_lower;
  haar.for_each([&](const HaarFunction& h) {
    const Cube& q = sys.cube(h.cube);
    double mass_q = mu.mass_of(q.members);
    double sup = 0.0, lower = 0.0;
    for (std::size_t ci = 0; ci < q.children.size(); ++ci) {
      double v = std::abs(h.child_values[ci]);
      if (v == 0.0) continue;
      sup = std::max(sup, v);
      double mass_c = mu.mass_of(sys.cube(h.cube.level + 1, q.children[ci]).members);
      lower = std::max(lower, v * std::sqrt(mass_c));
    }
    rep.max_upper = std::max(rep.max_upper, sup * std::sqrt(mass_q));
    rep.min_lower = std::min(rep.min_lower, lower);
    ++rep.functions_checked;
  });
  rep.pass = rep.max_upper <= budget_upper + 1e-12 && rep.min_lower >= budget_lower - 1e-12;
  return rep;
}

}  // namespace dyadic
