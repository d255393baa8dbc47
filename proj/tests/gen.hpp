#pragma once

// Seeded generators for property tests. Deliberately separate from the
// library's own sampler so that properties are not checked only on the
// distribution the checkers use internally.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "tclab/prob_space.hpp"

namespace gen {

using namespace tclab;

struct Gen {
  explicit Gen(std::uint64_t seed) : rng(seed * 0x9e3779b97f4a7c15ULL + 17) {}

  std::mt19937_64 rng;

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng); }

  // Small integers, exact zeros and both infinities.
  ExtReal value(bool infinite = true) {
    if (infinite) {
      int k = integer(0, 24);
      if (k == 0) return ExtReal::pos_inf();
      if (k == 1) return ExtReal::neg_inf();
    }
    if (coin(0.15)) return ExtReal(0.0);
    if (coin(0.5)) return ExtReal(static_cast<double>(integer(-6, 6)));
    return ExtReal(real(-8.0, 8.0));
  }

  SpacePtr space(int max_outcomes = 8, int max_horizon = 3) {
    const int n = integer(2, max_outcomes);
    const int horizon = integer(1, max_horizon);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = real(0.2, 1.0);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= total;

    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Partition> parts{{order}};
    for (int t = 1; t <= horizon; ++t) {
      Partition next;
      for (const auto& atom : parts.back()) {
        Atom cur;
        for (std::size_t k = 0; k < atom.size(); ++k) {
          cur.push_back(atom[k]);
          bool last = k + 1 == atom.size();
          if (last || coin(t == horizon ? 0.6 : 0.35)) {
            next.push_back(cur);
            cur.clear();
          }
        }
      }
      parts.push_back(next);
    }
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("o" + std::to_string(i));
    return FilteredSpace::build(names, w, parts);
  }

  RandomVariable variable(const SpacePtr& s, bool infinite = true) {
    std::vector<ExtReal> v(s->size());
    for (auto& x : v) x = value(infinite);
    return RandomVariable(s, v);
  }

  RandomVariable measurable(const SpacePtr& s, int t, bool infinite = true) {
    std::vector<ExtReal> v(s->size());
    for (const auto& atom : s->atoms(t)) {
      ExtReal c = value(infinite);
      for (auto w : atom) v[w] = c;
    }
    return RandomVariable(s, v);
  }

  AdaptedProcess process(const SpacePtr& s, bool infinite = true) {
    std::vector<RandomVariable> rows;
    for (int t = 0; t <= s->horizon(); ++t) rows.push_back(measurable(s, t, infinite));
    return AdaptedProcess(s, rows);
  }

  // Nonnegative F_t-measurable perturbation subtracted from x.
  RandomVariable below(const RandomVariable& x, int t) {
    auto d = measurable(x.space(), t, false);
    std::vector<ExtReal> v(x.size());
    for (std::size_t w = 0; w < v.size(); ++w) v[w] = sub(x[w], ExtReal(std::abs(d[w].value())));
    return RandomVariable(x.space(), v);
  }
};

inline RandomVariable rv(const SpacePtr& s, std::vector<double> v) { return RandomVariable::from_doubles(s, v); }

}  // namespace gen
