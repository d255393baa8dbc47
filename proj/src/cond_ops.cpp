#include "tclab/cond_ops.hpp"

#include <algorithm>
#include <utility>

#include "tclab/errors.hpp"

namespace tclab {

namespace {

// Cumulative conditional probabilities are compared against alpha with this
// slack so that ties such as 0.25 + 0.25 == 0.5 survive rounding.
constexpr double kQuantileSlack = 1e-12;

void check_alpha_open(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::BadAlpha, "alpha=" + std::to_string(alpha) + " not in (0,1)");
}

template <class AtomFn>
RandomVariable per_atom(const RandomVariable& x, int t, AtomFn fn) {
  const FilteredSpace& space = *x.space();
  space.check_time(t);
  std::vector<ExtReal> out(x.size());
  const Partition& part = space.atoms(t);
  for (std::size_t k = 0; k < part.size(); ++k) {
    const ExtReal v = fn(part[k], space.atom_prob(t, k));
    for (std::size_t w : part[k]) out[w] = v;
  }
  return RandomVariable(x.space(), std::move(out));
}

}  // namespace

RandomVariable cond_expect(const RandomVariable& x, int t) {
  const FilteredSpace& space = *x.space();
  return per_atom(x, t, [&](const Atom& atom, double mass) {
    ExtReal pos(0.0);
    ExtReal negative(0.0);
    for (std::size_t w : atom) {
      const ExtReal weight(space.prob(w) / mass);
      pos = add(pos, mul(weight, positive_part(x[w])));
      negative = add(negative, mul(weight, negative_part(x[w])));
    }
    return sub(pos, negative);
  });
}

RandomVariable cond_essinf(const RandomVariable& x, int t) {
  return per_atom(x, t, [&](const Atom& atom, double) {
    ExtReal lo = ExtReal::pos_inf();
    for (std::size_t w : atom) lo = min(lo, x[w]);
    return lo;
  });
}

RandomVariable cond_esssup(const RandomVariable& x, int t) { return pointwise_neg(cond_essinf(pointwise_neg(x), t)); }

RandomVariable family_essinf(std::span<const RandomVariable> xs) {
  if (xs.empty()) throw Error(ErrorCode::EmptyFamily, "essinf of an empty family");
  RandomVariable acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) {
    require_same_space(acc.space(), xs[i].space(), ("family member " + std::to_string(i)).c_str());
    acc = pointwise_min(acc, xs[i]);
  }
  return acc;
}

RandomVariable family_esssup(std::span<const RandomVariable> xs) {
  std::vector<RandomVariable> negated;
  negated.reserve(xs.size());
  for (const RandomVariable& x : xs) negated.push_back(pointwise_neg(x));
  return pointwise_neg(family_essinf(negated));
}

RandomVariable cond_upper_quantile(const RandomVariable& m, int t, double alpha) {
  check_alpha_open(alpha);
  const FilteredSpace& space = *m.space();
  return per_atom(m, t, [&](const Atom& atom, double mass) {
    std::vector<std::pair<ExtReal, double>> support;
    for (std::size_t w : atom) support.emplace_back(m[w], space.prob(w) / mass);
    std::sort(support.begin(), support.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    // The feasible thresholds form the down-set below the first support point
    // whose cumulative mass exceeds alpha; that point is the supremum.
    double cumulative = 0.0;
    for (std::size_t i = 0; i < support.size();) {
      const ExtReal v = support[i].first;
      while (i < support.size() && support[i].first == v) cumulative += support[i++].second;
      if (cumulative > alpha + kQuantileSlack) return v;
    }
    return ExtReal::pos_inf();
  });
}

RandomVariable worst_case_density(const RandomVariable& m, int t, double alpha) {
  const RandomVariable q = cond_upper_quantile(m, t, alpha);
  std::vector<ExtReal> indicator(m.size());
  for (std::size_t w = 0; w < m.size(); ++w) indicator[w] = ExtReal(m[w] <= q[w] ? 1.0 : 0.0);
  const RandomVariable ind(m.space(), std::move(indicator));
  const RandomVariable mass = cond_expect(ind, t);
  std::vector<ExtReal> z(m.size());
  for (std::size_t w = 0; w < m.size(); ++w) {
    z[w] = (ind[w].is_zero() || mass[w].is_zero()) ? ExtReal(0.0) : ExtReal(1.0 / mass[w].value());
  }
  return RandomVariable(m.space(), std::move(z));
}

}  // namespace tclab
