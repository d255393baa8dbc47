#include "tclab/update_rules.hpp"

#include <algorithm>
#include <cmath>

#include "tclab/cond_ops.hpp"
#include "tclab/errors.hpp"
#include "tclab/random.hpp"

namespace tclab {

const char* to_string(Direction d) { return d == Direction::Accept ? "accept" : "reject"; }

UpdateRule::UpdateRule(std::string name, Evaluator eval, RuleFlags declared, bool one_step_only,
                       std::optional<Kind> kind)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      declared_(declared),
      one_step_only_(one_step_only),
      kind_(kind) {}

RandomVariable UpdateRule::operator()(int t, int s, const RandomVariable& m, const AdaptedProcess& x) const {
  const SpacePtr& space = m.space();
  require_same_space(space, x.space(), name_.c_str());
  space->check_time(t);
  space->check_time(s);
  if (!(t < s))
    throw Error(ErrorCode::TimeOrder, name_ + ": need t < s, got t=" + std::to_string(t) + " s=" + std::to_string(s));
  if (one_step_only_ && s != t + 1)
    throw Error(ErrorCode::NotOneStep, name_ + " is one-step only, got t=" + std::to_string(t) + " s=" + std::to_string(s));
  if (!is_measurable(m, s))
    throw Error(ErrorCode::NotMeasurable, name_ + ": m is not F_" + std::to_string(s) + "-measurable");
  RandomVariable out = eval_(t, s, m, x);
  require_same_space(out.space(), space, name_.c_str());
  return out;
}

RandomVariable UpdateRule::operator()(int t, int s, const RandomVariable& m) const {
  return (*this)(t, s, m, AdaptedProcess::zero(m.space()));
}

UpdateRule essinf_rule() {
  return UpdateRule("essinf", [](int t, int, const RandomVariable& m, const AdaptedProcess&) { return cond_essinf(m, t); },
                    RuleFlags{true, true, true});
}

UpdateRule esssup_rule() {
  return UpdateRule("esssup", [](int t, int, const RandomVariable& m, const AdaptedProcess&) { return cond_esssup(m, t); },
                    RuleFlags{true, true, true});
}

UpdateRule expectation_rule() {
  return UpdateRule("expectation",
                    [](int t, int, const RandomVariable& m, const AdaptedProcess&) { return cond_expect(m, t); },
                    RuleFlags{true, true, true});
}

UpdateRule discounted_rule(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::BadAlpha, "alpha=" + std::to_string(alpha) + " not in (0,1)");
  return UpdateRule("discounted:" + to_string(ExtReal(alpha)),
                    [alpha](int t, int s, const RandomVariable& m, const AdaptedProcess&) {
                      RandomVariable e = cond_expect(m, t);
                      const ExtReal shrink(std::pow(alpha, s - t));
                      const ExtReal grow(std::pow(alpha, t - s));
                      for (std::size_t w = 0; w < e.size(); ++w)
                        e[w] = mul(e[w] >= ExtReal(0.0) ? shrink : grow, e[w]);
                      return e;
                    },
                    RuleFlags{true, false, false});
}

UpdateRule process_weak_rule(Direction direction) {
  return UpdateRule(std::string("weak-process:") + to_string(direction),
                    [direction](int t, int, const RandomVariable& m, const AdaptedProcess& x) {
                      const RandomVariable base = direction == Direction::Accept ? cond_essinf(m, t) : cond_esssup(m, t);
                      return pointwise_add(base, x.row(t));
                    },
                    RuleFlags{}, true, Kind::Processes);
}

UpdateRule semiweak_rule(Direction direction) {
  return UpdateRule(std::string("semiweak:") + to_string(direction),
                    [direction](int t, int, const RandomVariable& m, const AdaptedProcess& x) {
                      const RandomVariable& v = x.row(t);
                      const bool accept = direction == Direction::Accept;
                      RandomVariable out = accept ? cond_essinf(m, t) : cond_esssup(m, t);
                      for (std::size_t w = 0; w < out.size(); ++w) {
                        if (accept && v[w] < ExtReal(0.0)) out[w] = ExtReal::neg_inf();
                        if (!accept && v[w] > ExtReal(0.0)) out[w] = ExtReal::pos_inf();
                      }
                      return out;
                    },
                    RuleFlags{}, true, Kind::Processes);
}

RandomVariable shift_by(const RandomVariable& y, ExtReal r) {
  std::vector<ExtReal> out(y.size());
  for (std::size_t w = 0; w < y.size(); ++w) out[w] = add(y[w], r);
  return RandomVariable(y.space(), std::move(out));
}

std::vector<RandomVariable> benchmark_family(std::vector<RandomVariable> generators) {
  if (generators.empty()) throw Error(ErrorCode::EmptyBenchmark, "benchmark family needs at least one generator");
  const bool has_constant = std::any_of(generators.begin(), generators.end(), [](const RandomVariable& y) {
    return std::all_of(y.values().begin(), y.values().end(), [&](ExtReal v) { return v == y[0]; });
  });
  if (!has_constant) generators.push_back(RandomVariable::constant(generators.front().space(), ExtReal(0.0)));
  return generators;
}

namespace {

// Feasibility in the mirrored coordinate u: accept uses r = u and phi_s(Y + r) <= m,
// reject uses r = -u and phi_s(Y + r) >= m. Either way the feasible u form a down-set.
struct Feasibility {
  const LMMeasure& phi;
  const RandomVariable& y;
  int s;
  const RandomVariable& m;
  const Atom& atom;
  bool accept;
  ExtReal last_level = ExtReal::neg_inf();

  ExtReal shift_of(ExtReal u) const { return accept ? u : neg(u); }

  bool operator()(ExtReal u) {
    const RandomVariable level = phi(s, shift_by(y, shift_of(u)));
    bool ok = true;
    for (std::size_t w : atom) {
      if (accept ? level[w] > m[w] : level[w] < m[w]) ok = false;
    }
    // oriented so that it must not decrease as u grows
    last_level = accept ? level[atom.front()] : neg(level[atom.front()]);
    return ok;
  }
};

void require_monotone_in_shift(const LMMeasure& phi, ExtReal before, ExtReal after) {
  if (before > after)
    throw Error(ErrorCode::InvalidArgument, phi.name() + " is not monotone under constant shifts of its argument");
}

}  // namespace

ShiftSearch search_shift(const LMMeasure& phi, const RandomVariable& generator, int s, const RandomVariable& m,
                         const Atom& atom, Direction direction, const BenchmarkOptions& options) {
  Feasibility feasible{phi, generator, s, m, atom, direction == Direction::Accept};
  ShiftSearch result;
  double lo = 0.0;  // feasible
  double hi = 0.0;  // infeasible
  if (feasible(ExtReal(0.0))) {
    ExtReal prev = feasible.last_level;
    for (double step = 1.0;; step *= 2.0) {
      if (step > options.shift_cap) {
        result.outcome = ShiftSearch::Outcome::Unbounded;
        return result;
      }
      const bool ok = feasible(ExtReal(step));
      require_monotone_in_shift(phi, prev, feasible.last_level);
      prev = feasible.last_level;
      if (!ok) {
        hi = step;
        break;
      }
      lo = step;
    }
  } else {
    ExtReal prev = feasible.last_level;
    for (double step = -1.0;; step *= 2.0) {
      if (-step > options.shift_cap) {
        result.outcome = feasible(ExtReal::neg_inf()) ? ShiftSearch::Outcome::InfiniteShift
                                                      : ShiftSearch::Outcome::Infeasible;
        return result;
      }
      const bool ok = feasible(ExtReal(step));
      require_monotone_in_shift(phi, feasible.last_level, prev);
      prev = feasible.last_level;
      if (ok) {
        lo = step;
        break;
      }
      hi = step;
    }
  }
  for (int i = 0; i < options.max_iter; ++i) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi || hi - lo <= options.tol) break;
    if (feasible(ExtReal(mid)))
      lo = mid;
    else
      hi = mid;
  }
  result.outcome = ShiftSearch::Outcome::Bounded;
  result.shift = feasible.accept ? lo : -lo;
  return result;
}

UpdateRule benchmark_rule(std::vector<RandomVariable> generators, LMMeasure phi, Direction direction,
                          BenchmarkOptions options) {
  generators = benchmark_family(std::move(generators));
  std::string name = std::string("benchmark:") + to_string(direction) + ":" + phi.name();
  const Kind kind = phi.kind();
  return UpdateRule(
      std::move(name),
      [generators = std::move(generators), phi, direction, options](int t, int s, const RandomVariable& m,
                                                                    const AdaptedProcess&) {
        const SpacePtr& space = m.space();
        for (const RandomVariable& y : generators) require_same_space(y.space(), space, "benchmark generator");
        const bool accept = direction == Direction::Accept;
        const ExtReal empty = accept ? ExtReal::neg_inf() : ExtReal::pos_inf();
        std::vector<ExtReal> out(space->size(), empty);
        for (const Atom& atom : space->atoms(t)) {
          ExtReal best = empty;
          for (const RandomVariable& y : generators) {
            const ShiftSearch found = search_shift(phi, y, s, m, atom, direction, options);
            ExtReal candidate = empty;
            switch (found.outcome) {
              case ShiftSearch::Outcome::Infeasible:
                continue;
              case ShiftSearch::Outcome::InfiniteShift:
                candidate = phi(t, shift_by(y, empty))[atom.front()];
                break;
              case ShiftSearch::Outcome::Bounded:
                candidate = phi(t, shift_by(y, ExtReal(found.shift)))[atom.front()];
                break;
              case ShiftSearch::Outcome::Unbounded:
                for (std::size_t w : atom) candidate = accept ? max(candidate, m[w]) : min(candidate, m[w]);
                break;
            }
            best = accept ? max(best, candidate) : min(best, candidate);
          }
          for (std::size_t w : atom) out[w] = best;
        }
        return RandomVariable(space, std::move(out));
      },
      RuleFlags{true, false, false}, false, kind);
}

RandomVariable compose_nested(const UpdateRule& one_step, int t, int s, const RandomVariable& m, const AdaptedProcess& x) {
  if (!(t < s))
    throw Error(ErrorCode::TimeOrder, "nested composition needs t < s, got t=" + std::to_string(t) + " s=" + std::to_string(s));
  RandomVariable level = m;
  for (int k = s - 1; k >= t; --k) level = one_step(k, k + 1, level, x);
  return level;
}

UpdateRule nested_rule(const UpdateRule& one_step) {
  return UpdateRule("nested(" + one_step.name() + ")",
                    [one_step](int t, int s, const RandomVariable& m, const AdaptedProcess& x) {
                      return compose_nested(one_step, t, s, m, x);
                    },
                    RuleFlags{one_step.declared().x_invariant, false, false}, false, one_step.kind());
}

UpdateRule monotone_transform_rule(const MonotoneTransform& g, const UpdateRule& mu) {
  return UpdateRule(g.name() + "(" + mu.name() + ")",
                    [g, mu](int t, int s, const RandomVariable& m, const AdaptedProcess& x) {
                      RandomVariable pre = m;
                      for (std::size_t w = 0; w < pre.size(); ++w) pre[w] = g.invert(pre[w]);
                      RandomVariable out = mu(t, s, pre, x);
                      for (std::size_t w = 0; w < out.size(); ++w) out[w] = g.apply(out[w]);
                      return out;
                    },
                    mu.declared(), mu.one_step_only(), mu.kind());
}

namespace {

// First outcome where the two variables differ beyond tolerance, or size() if none.
std::size_t first_mismatch(const RandomVariable& a, const RandomVariable& b, double eps) {
  for (std::size_t w = 0; w < a.size(); ++w)
    if (!approx_eq(a[w], b[w], eps)) return w;
  return a.size();
}

}  // namespace

ClassReport classify(const UpdateRule& rule, const SpacePtr& space, std::size_t sample_count, std::uint64_t seed,
                     double eps) {
  ClassReport report;
  report.seed = seed;
  report.declared = rule.declared();
  const int horizon = space->horizon();
  const bool exhaustive = space->size() <= 12;
  const AdaptedProcess zero = AdaptedProcess::zero(space);

  auto record = [&](bool& flag, const char* property, int t, int s, const RandomVariable& m,
                    std::optional<RandomVariable> other, const AdaptedProcess& x, std::size_t w, ExtReal lhs,
                    ExtReal rhs) {
    flag = false;
    report.witnesses.push_back(RuleWitness{property, t, s, m, std::move(other), x, w, lhs, rhs});
  };

  for (std::size_t i = 0; i < sample_count; ++i) {
    InstanceRng rng = InstanceRng::stream(seed, i);
    const AdaptedProcess x = random_process(space, rng);
    for (int t = 0; t < horizon; ++t) {
      const int s_max = rule.one_step_only() ? t + 1 : horizon;
      for (int s = t + 1; s <= s_max; ++s) {
        const RandomVariable m = random_measurable(space, s, rng);
        const RandomVariable base = rule(t, s, m, x);
        ++report.checked;

        if (report.local) {
          const std::size_t atoms = space->atoms(t).size();
          const std::uint64_t masks = exhaustive ? (std::uint64_t{1} << atoms) : 64;
          for (std::uint64_t k = 0; k < masks && report.local; ++k) {
            const std::uint64_t mask =
                exhaustive ? k : rng.engine()() & ((std::uint64_t{1} << std::min<std::size_t>(atoms, 63)) - 1);
            const RandomVariable ind = atom_union_indicator(space, t, mask);
            const RandomVariable restricted = rule(t, s, pointwise_mul(ind, m), x);
            const RandomVariable lhs = pointwise_mul(ind, base);
            const RandomVariable rhs = pointwise_mul(ind, restricted);
            const std::size_t w = first_mismatch(lhs, rhs, eps);
            if (w < lhs.size()) record(report.local, "local", t, s, m, pointwise_mul(ind, m), x, w, lhs[w], rhs[w]);
          }
        }

        if (report.monotone) {
          const RandomVariable lower = random_below(m, s, rng);
          const RandomVariable lo = rule(t, s, lower, x);
          for (std::size_t w = 0; w < lo.size(); ++w) {
            if (!approx_le(lo[w], base[w], eps)) {
              record(report.monotone, "monotone", t, s, m, lower, x, w, lo[w], base[w]);
              break;
            }
          }
        }

        if (report.x_invariant) {
          const RandomVariable free = rule(t, s, m, zero);
          const std::size_t w = first_mismatch(base, free, eps);
          if (w < base.size()) record(report.x_invariant, "x_invariant", t, s, m, std::nullopt, x, w, base[w], free[w]);
        }

        if (report.sx_invariant) {
          // an sX-invariant rule may be read at any later time without changing its value
          if (!report.x_invariant) {
            report.sx_invariant = false;
          } else if (!rule.one_step_only()) {
            for (int s2 = s + 1; s2 <= horizon && report.sx_invariant; ++s2) {
              const RandomVariable later = rule(t, s2, m, zero);
              const std::size_t w = first_mismatch(base, later, eps);
              if (w < base.size())
                record(report.sx_invariant, "sx_invariant", t, s2, m, std::nullopt, x, w, base[w], later[w]);
            }
          }
        }

        if (report.projective) {
          // the constant 1 first, then random F_t-measurable levels
          const RandomVariable mt = i == 0 ? RandomVariable::constant(space, ExtReal(1.0))
                                           : random_measurable(space, t, rng);
          const RandomVariable back = rule(t, s, mt, x);
          const std::size_t w = first_mismatch(back, mt, eps);
          if (w < back.size()) record(report.projective, "projective", t, s, mt, std::nullopt, x, w, back[w], mt[w]);
          // without sX-invariance the rule is not projective even if it fixes m_t
          if (!report.sx_invariant) report.projective = false;
        }
      }
    }
  }
  const RuleFlags& d = report.declared;
  if (d.x_invariant && !report.x_invariant) report.contradictions.push_back("x_invariant");
  if (d.sx_invariant && !report.sx_invariant) report.contradictions.push_back("sx_invariant");
  if (d.projective && !report.projective) report.contradictions.push_back("projective");
  return report;
}

}  // namespace tclab
