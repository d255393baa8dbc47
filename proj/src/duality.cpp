#include "tclab/duality.hpp"

#include <algorithm>
#include <cmath>

#include "tclab/cond_ops.hpp"
#include "tclab/errors.hpp"
#include "tclab/sweep.hpp"

namespace tclab {

namespace {

constexpr double kVertexSlack = 1e-12;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::BadAlpha, "alpha=" + std::to_string(alpha) + " not in (0,1]");
}

bool same_vertex(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i] - b[i]) > 1e-9 * std::max(1.0, std::fabs(a[i]))) return false;
  return true;
}

// Conditional weights q_i = p_i z_i / p(atom) of every vertex. Point masses of
// P_t are built directly as unit vectors so that E_Q[m] = m_i exactly.
std::vector<std::vector<double>> atom_weights(const FilteredSpace& space, int t, std::size_t k, ScenarioSet set,
                                              double alpha) {
  const Atom& atom = space.atoms(t)[k];
  if (set == ScenarioSet::P) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < atom.size(); ++i) {
      std::vector<double> q(atom.size(), 0.0);
      q[i] = 1.0;
      out.push_back(std::move(q));
    }
    return out;
  }
  const double mass = space.atom_prob(t, k);
  std::vector<std::vector<double>> out;
  for (std::vector<double>& z : atom_vertices(space, t, k, set, alpha)) {
    for (std::size_t i = 0; i < atom.size(); ++i) z[i] = space.prob(atom[i]) * z[i] / mass;
    out.push_back(std::move(z));
  }
  return out;
}

// E_Q[m] on the atom under the generalized convention E^+ - E^-.
ExtReal weighted_mean(const std::vector<double>& q, const Atom& atom, const RandomVariable& m) {
  ExtReal pos(0.0);
  ExtReal negp(0.0);
  for (std::size_t i = 0; i < atom.size(); ++i) {
    pos = add(pos, mul(ExtReal(q[i]), positive_part(m[atom[i]])));
    negp = add(negp, mul(ExtReal(q[i]), negative_part(m[atom[i]])));
  }
  return sub(pos, negp);
}

template <class Pick>
RandomVariable extreme_over(const RandomVariable& m, int t, ScenarioSet set, double alpha, Pick better) {
  const FilteredSpace& space = *m.space();
  std::vector<ExtReal> out(m.size());
  const Partition& part = space.atoms(t);
  for (std::size_t k = 0; k < part.size(); ++k) {
    std::optional<ExtReal> best;
    for (const std::vector<double>& q : atom_weights(space, t, k, set, alpha)) {
      const ExtReal v = weighted_mean(q, part[k], m);
      if (!best || better(v, *best)) best = v;
    }
    for (std::size_t w : part[k]) out[w] = *best;
  }
  return RandomVariable(m.space(), std::move(out));
}

}  // namespace

std::vector<std::vector<double>> atom_vertices(const FilteredSpace& space, int t, std::size_t k, ScenarioSet set,
                                               double alpha) {
  const Atom& atom = space.atoms(t).at(k);
  const double mass = space.atom_prob(t, k);
  const std::size_t n = atom.size();
  std::vector<std::vector<double>> out;
  if (set == ScenarioSet::P) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> z(n, 0.0);
      z[i] = mass / space.prob(atom[i]);
      out.push_back(std::move(z));
    }
    return out;
  }
  check_alpha(alpha);
  if (n > 20) throw Error(ErrorCode::InvalidArgument, "atom too large for vertex enumeration");
  const double cap = 1.0 / alpha;
  auto push = [&](std::vector<double> z) {
    for (const std::vector<double>& seen : out)
      if (same_vertex(seen, z)) return;
    out.push_back(std::move(z));
  };
  // at most one coordinate strictly inside (0, 1/alpha); the others sit at a bound
  for (std::uint64_t full = 0; full < (std::uint64_t{1} << n); ++full) {
    double loaded = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (full >> i & 1U) loaded += space.prob(atom[i]) * cap;
    const double rest = mass - loaded;
    if (rest < -kVertexSlack * mass) continue;
    if (std::fabs(rest) <= kVertexSlack * mass) {
      std::vector<double> z(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        if (full >> i & 1U) z[i] = cap;
      push(std::move(z));
      continue;
    }
    for (std::size_t f = 0; f < n; ++f) {
      if (full >> f & 1U) continue;
      const double zf = rest / space.prob(atom[f]);
      if (zf > cap * (1.0 + kVertexSlack)) continue;
      std::vector<double> z(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        if (full >> i & 1U) z[i] = cap;
      z[f] = std::min(zf, cap);
      push(std::move(z));
    }
  }
  return out;
}

std::vector<RandomVariable> scenario_vertices(const SpacePtr& space, int t, ScenarioSet set, double alpha,
                                              std::size_t limit) {
  space->check_time(t);
  const Partition& part = space->atoms(t);
  std::vector<std::vector<std::vector<double>>> per_atom;
  std::size_t total = 1;
  for (std::size_t k = 0; k < part.size(); ++k) {
    per_atom.push_back(atom_vertices(*space, t, k, set, alpha));
    total *= per_atom.back().size();
    if (total > limit)
      throw Error(ErrorCode::InvalidArgument, "more than " + std::to_string(limit) + " scenario vertices at t=" +
                                                  std::to_string(t));
  }
  std::vector<RandomVariable> out;
  out.reserve(total);
  std::vector<std::size_t> pick(part.size(), 0);
  for (std::size_t count = 0; count < total; ++count) {
    std::vector<ExtReal> z(space->size());
    for (std::size_t k = 0; k < part.size(); ++k)
      for (std::size_t i = 0; i < part[k].size(); ++i) z[part[k][i]] = ExtReal(per_atom[k][pick[k]][i]);
    out.emplace_back(space, std::move(z));
    for (std::size_t k = part.size(); k-- > 0;) {
      if (++pick[k] < per_atom[k].size()) break;
      pick[k] = 0;
    }
  }
  return out;
}

RandomVariable dual_essinf(const RandomVariable& m, int t) {
  m.space()->check_time(t);
  return extreme_over(m, t, ScenarioSet::P, 1.0, [](ExtReal a, ExtReal b) { return a < b; });
}

RandomVariable dual_esssup(const RandomVariable& m, int t) {
  m.space()->check_time(t);
  return extreme_over(m, t, ScenarioSet::P, 1.0, [](ExtReal a, ExtReal b) { return a > b; });
}

RandomVariable lp_cvar_rho(int t, const AdaptedProcess& v, double alpha) {
  check_alpha(alpha);
  return extreme_over(v.tail_sum(t), t, ScenarioSet::DAlpha, alpha, [](ExtReal a, ExtReal b) { return a < b; });
}

RandomVariable lp_raroc_family(double x, int t, const AdaptedProcess& v, double alpha) {
  check_alpha(alpha);
  if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorCode::BadX, "x=" + std::to_string(x) + " must be finite and >= 0");
  const RandomVariable s = v.tail_sum(t);
  const FilteredSpace& space = *s.space();
  std::vector<ExtReal> out(s.size());
  const Partition& part = space.atoms(t);
  for (std::size_t k = 0; k < part.size(); ++k) {
    const double mass = space.atom_prob(t, k);
    std::optional<ExtReal> best;
    for (std::vector<double> q : atom_weights(space, t, k, ScenarioSet::DAlpha, alpha)) {
      for (std::size_t i = 0; i < q.size(); ++i)
        q[i] = space.prob(part[k][i]) / mass / (1.0 + x) + x / (1.0 + x) * q[i];
      const ExtReal val = weighted_mean(q, part[k], s);
      if (!best || val < *best) best = val;
    }
    for (std::size_t w : part[k]) out[w] = *best;
  }
  return RandomVariable(s.space(), std::move(out));
}

Verdict robust_weak_check(const LMMeasure& phi, const CheckOptions& options) {
  if (phi.kind() != Kind::Variables)
    throw Error(ErrorCode::KindMismatch, "robust weak check needs a variables measure, " + phi.name() + " is processes");
  auto kernel = [&](const AdaptedProcess& x, std::size_t i) -> std::optional<TcWitness> {
    const int horizon = x.horizon();
    std::vector<RandomVariable> vals;
    for (int t = 0; t <= horizon; ++t) vals.push_back(phi(t, x));
    for (int t = 0; t < horizon; ++t) {
      for (int s = t + 1; s <= horizon; ++s) {
        const RandomVariable rhs = dual_essinf(vals[static_cast<std::size_t>(s)], t);
        const RandomVariable& lhs = vals[static_cast<std::size_t>(t)];
        for (std::size_t w = 0; w < lhs.size(); ++w) {
          if (!approx_ge(lhs[w], rhs[w], options.eps))
            return TcWitness{"robust", i, x, t, s, vals[static_cast<std::size_t>(s)], w, x.space()->atom_of(t, w),
                             lhs[w], rhs[w]};
        }
      }
    }
    return std::nullopt;
  };
  const std::size_t n = instance_count(options);
  auto hit = first_hit<TcWitness>(
      n, [&](std::size_t i) { return kernel(make_instance(options, Kind::Variables, i), i); }, options.parallel);
  Verdict v;
  v.seed = options.seed;
  v.eps = options.eps;
  v.checked = examined(hit, n);
  v.holds = !hit;
  if (hit) v.witness = hit->value;
  v.conditions = {{"robust", v.holds, true}};
  return v;
}

// ---------------------------------------------------------------------------
// converters

RandomVariable index_from_risk_family(const RiskFamily& family, int t, const AdaptedProcess& v,
                                      const ConverterOptions& options) {
  const SpacePtr& space = v.space();
  space->check_time(t);
  auto at = [&](double x) { return family.eval(x, t, v); };

  std::vector<double> grid = {0.0};
  for (double x = 1.0 / 16.0; x < options.x_max; x *= 2.0) grid.push_back(x);
  grid.push_back(options.x_max);
  RandomVariable previous = at(grid.front());
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const RandomVariable current = at(grid[g]);
    for (std::size_t w = 0; w < current.size(); ++w) {
      if (!approx_le(current[w], previous[w], options.eps))
        throw Error(ErrorCode::NotDecreasingFamily, family.name + " increases between x=" + std::to_string(grid[g - 1]) +
                                                        " and x=" + std::to_string(grid[g]) + " at outcome " +
                                                        space->outcomes()[w]);
    }
    previous = current;
  }

  const RandomVariable at_zero = at(0.0);
  const RandomVariable at_cap = at(options.x_max);
  std::vector<ExtReal> out(space->size());
  for (const Atom& atom : space->atoms(t)) {
    const std::size_t w0 = atom.front();
    ExtReal value;
    if (at_zero[w0] < ExtReal(0.0)) {
      value = ExtReal(0.0);
    } else if (at_cap[w0] >= ExtReal(0.0)) {
      value = ExtReal::pos_inf();
    } else {
      double lo = 0.0;
      double hi = options.x_max;
      for (int i = 0; i < options.max_iter && hi - lo > options.tol; ++i) {
        const double mid = lo + (hi - lo) / 2.0;
        if (at(mid)[w0] >= ExtReal(0.0))
          lo = mid;
        else
          hi = mid;
      }
      value = ExtReal(lo + (hi - lo) / 2.0);
    }
    for (std::size_t w : atom) out[w] = value;
  }
  return RandomVariable(space, std::move(out));
}

namespace {

AdaptedProcess add_at(const AdaptedProcess& v, int time, const RandomVariable& m) {
  std::vector<RandomVariable> rows = v.rows();
  rows[static_cast<std::size_t>(time)] = pointwise_add(rows[static_cast<std::size_t>(time)], m);
  return AdaptedProcess(v.space(), std::move(rows));
}

void require_translation_invariant(const LMMeasure& index, int t, const AdaptedProcess& v,
                                   const ConverterOptions& options) {
  const MeasureFlags& flags = index.flags();
  if (!flags.translation_invariant || !flags.independent_of_past)
    throw Error(ErrorCode::NotTranslationInvariant,
                index.name() + " is not flagged translation invariant and independent of the past");
  const SpacePtr& space = v.space();
  InstanceRng rng(splitmix64(options.seed));
  for (std::size_t k = 0; k < options.probes; ++k) {
    if (t < space->horizon()) {
      const RandomVariable m = random_measurable(space, t, rng, ValueMix::finite());
      const int s = rng.integer(t + 1, space->horizon());
      const RandomVariable now = index(t, add_at(v, t, m));
      const RandomVariable later = index(t, add_at(v, s, m));
      for (std::size_t w = 0; w < now.size(); ++w)
        if (!approx_eq(now[w], later[w], 1e-7))
          throw Error(ErrorCode::NotTranslationInvariant, index.name() + " changes when cash moves from t=" +
                                                              std::to_string(t) + " to s=" + std::to_string(s));
    }
  }
  std::vector<RandomVariable> rows = v.rows();
  for (int i = 0; i < t; ++i) rows[static_cast<std::size_t>(i)] = RandomVariable::constant(space, ExtReal(0.0));
  const RandomVariable full = index(t, v);
  const RandomVariable cut = index(t, AdaptedProcess(space, std::move(rows)));
  for (std::size_t w = 0; w < full.size(); ++w)
    if (!approx_eq(full[w], cut[w], 1e-7))
      throw Error(ErrorCode::NotTranslationInvariant, index.name() + " depends on dividends before t=" + std::to_string(t));
}

}  // namespace

RandomVariable risk_family_from_index(const LMMeasure& index, double x, int t, const AdaptedProcess& v,
                                      const ConverterOptions& options) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorCode::BadX, "x=" + std::to_string(x) + " must be finite and >= 0");
  const SpacePtr& space = v.space();
  space->check_time(t);
  require_translation_invariant(index, t, v, options);
  auto at = [&](double c) {
    return index(t, add_at(v, t, RandomVariable::constant(space, ExtReal(-c))));
  };
  const RandomVariable low = at(options.c_lo);
  const RandomVariable high = at(options.c_hi);
  std::vector<ExtReal> out(space->size());
  for (const Atom& atom : space->atoms(t)) {
    const std::size_t w0 = atom.front();
    if (low[w0] < high[w0])
      throw Error(ErrorCode::NotTranslationInvariant, index.name() + " increases as cash is withdrawn at outcome " +
                                                          space->outcomes()[w0]);
    ExtReal value;
    if (low[w0] <= ExtReal(x)) {
      if (options.strict_bracket)
        throw Error(ErrorCode::BracketExhausted, "index already <= x at c=" + std::to_string(options.c_lo));
      value = ExtReal::neg_inf();
    } else if (high[w0] > ExtReal(x)) {
      if (options.strict_bracket)
        throw Error(ErrorCode::BracketExhausted, "index still > x at c=" + std::to_string(options.c_hi));
      value = ExtReal::pos_inf();
    } else {
      double lo = options.c_lo;  // index > x
      double hi = options.c_hi;  // index <= x
      for (int i = 0; i < options.max_iter && hi - lo > options.tol; ++i) {
        const double mid = lo + (hi - lo) / 2.0;
        if (at(mid)[w0] <= ExtReal(x))
          hi = mid;
        else
          lo = mid;
      }
      value = ExtReal(lo + (hi - lo) / 2.0);
    }
    for (std::size_t w : atom) out[w] = value;
  }
  return RandomVariable(space, std::move(out));
}

LMMeasure index_measure(const RiskFamily& family, const ConverterOptions& options) {
  return LMMeasure("index(" + family.name + ")", family.kind,
                   [family, options](int t, const AdaptedProcess& v) {
                     return index_from_risk_family(family, t, v, options);
                   });
}

RiskFamily risk_family_of_index(const LMMeasure& index, const ConverterOptions& options) {
  return RiskFamily{"risk(" + index.name() + ")", index.kind(),
                    [index, options](double x, int t, const AdaptedProcess& v) {
                      return risk_family_from_index(index, x, t, v, options);
                    }};
}

namespace {

Verdict weak_for_kind(const LMMeasure& phi, Direction direction, const CheckOptions& options) {
  if (phi.kind() == Kind::Variables) return check_weak_tc(phi, direction, options);
  return check_mu_tc(phi, process_weak_rule(direction), direction, Scope::OneStep, options);
}

// Converted measures are bisection outputs, accurate to the bisection tolerance
// only; their conclusions are compared with that slack.
CheckOptions converted_options(const CheckOptions& options, const ConverterOptions& converter) {
  CheckOptions out = options;
  out.eps = std::max(options.eps, 10.0 * converter.tol);
  return out;
}

std::string describe(const Verdict& v) {
  if (!v.witness) return "no witness";
  const TcWitness& w = *v.witness;
  return "instance " + std::to_string(w.instance) + " t=" + std::to_string(w.t) + " s=" + std::to_string(w.s) +
         " lhs=" + to_string(w.lhs) + " rhs=" + to_string(w.rhs);
}

}  // namespace

Verdict converter_consistency_transfer(const RiskFamily& family, Direction direction, const CheckOptions& options,
                                       const std::vector<double>& xs, const ConverterOptions& converter) {
  std::vector<ConditionResult> conditions;
  for (double x : xs) {
    const Verdict hypothesis = weak_for_kind(family.at(x), direction, options);
    if (!hypothesis.holds)
      throw Error(ErrorCode::HypothesisFailed, family.name + " at x=" + to_string(ExtReal(x)) + " is not weakly " +
                                                   to_string(direction) + " consistent: " + describe(hypothesis));
    conditions.push_back({"hypothesis x=" + to_string(ExtReal(x)), true, true});
  }
  Verdict v = check_semiweak_tc(index_measure(family, converter), direction, converted_options(options, converter));
  conditions.push_back({"semi-weak index", v.holds, true});
  v.conditions = std::move(conditions);
  return v;
}

Verdict converter_consistency_transfer(const LMMeasure& index, Direction direction, const CheckOptions& options,
                                       const std::vector<double>& xs, const ConverterOptions& converter) {
  const Verdict hypothesis = check_semiweak_tc(index, direction, options);
  if (!hypothesis.holds)
    throw Error(ErrorCode::HypothesisFailed, index.name() + " is not semi-weakly " + std::string(to_string(direction)) +
                                                 " consistent: " + describe(hypothesis));
  if (!index.flags().translation_invariant || !index.flags().independent_of_past)
    throw Error(ErrorCode::HypothesisFailed, index.name() + " is not flagged translation invariant and independent of the past");
  std::vector<ConditionResult> conditions = {{"hypothesis semi-weak", true, true}};
  const RiskFamily family = risk_family_of_index(index, converter);
  const CheckOptions loose = converted_options(options, converter);
  std::optional<Verdict> first_failure;
  std::size_t checked = 0;
  for (double x : xs) {
    Verdict v = weak_for_kind(family.at(x), direction, loose);
    checked += v.checked;
    conditions.push_back({"weak family x=" + to_string(ExtReal(x)), v.holds, true});
    if (!v.holds && !first_failure) first_failure = std::move(v);
  }
  Verdict out = first_failure ? std::move(*first_failure) : Verdict{};
  out.seed = options.seed;
  out.eps = loose.eps;
  out.direction = direction;
  out.checked = checked;
  out.holds = !first_failure;
  out.conditions = std::move(conditions);
  return out;
}

}  // namespace tclab
