#include "tclab/consistency.hpp"

#include <algorithm>
#include <cmath>

#include "tclab/cond_ops.hpp"
#include "tclab/errors.hpp"
#include "tclab/sweep.hpp"

namespace tclab {

const char* to_string(Scope scope) { return scope == Scope::OneStep ? "one-step" : "full"; }

std::size_t instance_count(const CheckOptions& options) { return options.inputs.size() + options.samples; }

AdaptedProcess make_instance(const CheckOptions& options, Kind kind, std::size_t i) {
  if (i < options.inputs.size()) return options.inputs[i];
  InstanceRng rng = InstanceRng::stream(options.seed, i);
  const SpacePtr space = options.space ? options.space : random_space(rng, options.max_outcomes, options.max_horizon);
  return random_position(space, kind, rng, options.mix);
}

namespace {

constexpr std::uint64_t kThresholdSalt = 0x7468726573686f6cULL;

InstanceRng threshold_rng(const CheckOptions& options, std::size_t i) {
  return InstanceRng::stream(splitmix64(options.seed ^ kThresholdSalt), i);
}

bool fails(ExtReal lhs, ExtReal rhs, Direction d, double eps) {
  return d == Direction::Accept ? !approx_ge(lhs, rhs, eps) : !approx_le(lhs, rhs, eps);
}

// First outcome (optionally restricted to `gate` != 0) where lhs vs rhs fails.
std::optional<std::size_t> first_failure(const RandomVariable& lhs, const RandomVariable& rhs, Direction d, double eps,
                                         const RandomVariable* gate = nullptr) {
  for (std::size_t w = 0; w < lhs.size(); ++w) {
    if (gate && (*gate)[w].is_zero()) continue;
    if (fails(lhs[w], rhs[w], d, eps)) return w;
  }
  return std::nullopt;
}

TcWitness make_witness(std::string condition, std::size_t instance, const AdaptedProcess& x, int t, int s,
                       std::optional<RandomVariable> m, std::size_t w, ExtReal lhs, ExtReal rhs) {
  const std::size_t atom = x.space()->atom_of(t, w);
  return TcWitness{std::move(condition), instance, x, t, s, std::move(m), w, atom, lhs, rhs};
}

// Threshold on the permissive side of `level`: below it for accept, above it for reject.
RandomVariable threshold_past(const RandomVariable& level, int t, Direction d, InstanceRng& rng) {
  if (d == Direction::Accept) return random_below(level, t, rng);
  return pointwise_neg(random_below(pointwise_neg(level), t, rng));
}

RandomVariable conditional_bound(const RandomVariable& m, int t, Direction d) {
  return d == Direction::Accept ? cond_essinf(m, t) : cond_esssup(m, t);
}

std::vector<RandomVariable> evaluate_all(const LMMeasure& phi, const AdaptedProcess& x) {
  std::vector<RandomVariable> out;
  out.reserve(static_cast<std::size_t>(x.horizon()) + 1);
  for (int t = 0; t <= x.horizon(); ++t) out.push_back(phi(t, x));
  return out;
}

void equivalence_broken(const std::string& what, std::size_t instance, int t, int s) {
  throw Error(ErrorCode::EquivalenceBroken, what + " disagree on instance " + std::to_string(instance) +
                                                " at t=" + std::to_string(t) + " s=" + std::to_string(s));
}

// Verdict assembly shared by all sweeps: optional shrinking, then recomputing
// the witness on the reduced process so it re-evaluates as reported.
template <class Instance>
Verdict finish(const std::optional<Hit<TcWitness>>& hit, std::size_t n, const CheckOptions& options,
               Direction direction, Kind kind, const Instance& recheck) {
  Verdict v;
  v.seed = options.seed;
  v.eps = options.eps;
  v.direction = direction;
  v.checked = examined(hit, n);
  v.holds = !hit;
  if (!hit) return v;
  TcWitness witness = hit->value;
  if (options.shrink) {
    AdaptedProcess x = witness.x;
    v.shrink_steps =
        shrink_process(x, [&](const AdaptedProcess& candidate) { return recheck(candidate, witness.instance).has_value(); },
                       kind);
    if (v.shrink_steps > 0) {
      if (std::optional<TcWitness> again = recheck(x, witness.instance)) witness = std::move(*again);
    }
  }
  v.witness = std::move(witness);
  return v;
}

// ---------------------------------------------------------------------------
// mu-consistency

std::optional<TcWitness> mu_recursive(const LMMeasure& phi, const UpdateRule& mu, Direction d, Scope scope,
                                      const AdaptedProcess& x, std::size_t instance, double eps,
                                      InstanceRng* threshold_source, int thresholds) {
  const int horizon = x.horizon();
  const std::vector<RandomVariable> vals = evaluate_all(phi, x);
  std::optional<TcWitness> recursive;
  bool threshold_failed = false;
  for (int t = 0; t < horizon; ++t) {
    const int s_max = scope == Scope::OneStep ? t + 1 : horizon;
    for (int s = t + 1; s <= s_max; ++s) {
      auto apply = [&](const RandomVariable& m) {
        return mu.one_step_only() && s != t + 1 ? compose_nested(mu, t, s, m, x) : mu(t, s, m, x);
      };
      const RandomVariable rhs = apply(vals[static_cast<std::size_t>(s)]);
      const RandomVariable& lhs = vals[static_cast<std::size_t>(t)];
      const std::optional<std::size_t> w = first_failure(lhs, rhs, d, eps);
      if (w && !recursive)
        recursive = make_witness("recursive", instance, x, t, s, vals[static_cast<std::size_t>(s)], *w, lhs[*w], rhs[*w]);
      if (!threshold_source) continue;
      for (int k = 0; k < thresholds; ++k) {
        const RandomVariable m = threshold_past(vals[static_cast<std::size_t>(s)], s, d, *threshold_source);
        if (first_failure(lhs, apply(m), d, eps)) threshold_failed = true;
      }
      if (threshold_failed && !recursive) equivalence_broken("threshold and recursive forms", instance, t, s);
    }
  }
  return recursive;
}

// ---------------------------------------------------------------------------
// weak consistency (terminal payoffs)

struct WeakFlags {
  bool c1 = false, c2 = false, c3 = false, c4 = false, c2_finite = false;
};

std::optional<TcWitness> weak_instance(const LMMeasure& phi, Direction d, const AdaptedProcess& x, std::size_t instance,
                                       const CheckOptions& options, bool with_thresholds) {
  const double eps = options.eps;
  const bool monetary = phi.flags().monetary_utility;
  const int horizon = x.horizon();
  const std::vector<RandomVariable> vals = evaluate_all(phi, x);
  InstanceRng rng = threshold_rng(options, instance);
  std::optional<TcWitness> witness;
  for (int t = 0; t < horizon; ++t) {
    const RandomVariable& lhs = vals[static_cast<std::size_t>(t)];
    for (int s = t + 1; s <= horizon; ++s) {
      const RandomVariable& level = vals[static_cast<std::size_t>(s)];
      const RandomVariable bound = conditional_bound(level, t, d);
      WeakFlags f;
      // 2) phi_t >= Essinf_t phi_s
      const std::optional<std::size_t> w2 = first_failure(lhs, bound, d, eps);
      f.c2 = w2.has_value();
      if (w2 && !witness) witness = make_witness("2", instance, x, t, s, level, *w2, lhs[*w2], bound[*w2]);
      if (!with_thresholds) continue;
      // 1) thresholds m_s on the permissive side of phi_s, starting with phi_s itself
      f.c1 = first_failure(lhs, conditional_bound(level, t, d), d, eps).has_value();
      for (int k = 0; k < options.thresholds; ++k) {
        const RandomVariable ms = threshold_past(level, s, d, rng);
        if (first_failure(lhs, conditional_bound(ms, t, d), d, eps)) f.c1 = true;
      }
      // 3) F_t-measurable thresholds m_t with phi_s >= m_t; the bound is the extreme one
      f.c3 = first_failure(lhs, bound, d, eps).has_value();
      for (int k = 0; k < options.thresholds; ++k) {
        const RandomVariable mt = threshold_past(bound, t, d, rng);
        if (first_failure(lhs, mt, d, eps)) f.c3 = true;
      }
      if (f.c1 != f.c2) equivalence_broken("conditions 1) and 2)", instance, t, s);
      if (f.c3 != f.c2) equivalence_broken("conditions 3) and 2)", instance, t, s);
      if (!monetary) continue;
      // 4) phi_s(X') >= 0 => phi_t(X') >= 0 for X' = X - m_t where m_t is finite
      const RandomVariable& payoff = x.row(horizon);
      std::vector<ExtReal> shifted(payoff.size());
      RandomVariable finite_gate = RandomVariable::constant(x.space(), ExtReal(0.0));
      for (std::size_t w = 0; w < payoff.size(); ++w) {
        const bool finite = bound[w].is_finite();
        finite_gate[w] = ExtReal(finite ? 1.0 : 0.0);
        shifted[w] = finite ? sub(payoff[w], bound[w]) : ExtReal(0.0);
      }
      const AdaptedProcess moved = AdaptedProcess::terminal(RandomVariable(x.space(), std::move(shifted)));
      const RandomVariable moved_t = phi(t, moved);
      for (std::size_t w = 0; w < payoff.size(); ++w) {
        if (finite_gate[w].is_zero()) continue;
        const double tol = tolerance_for(lhs[w], bound[w], eps);
        const bool bad = d == Direction::Accept ? moved_t[w] < ExtReal(-tol) : moved_t[w] > ExtReal(tol);
        if (bad) f.c4 = true;
      }
      f.c2_finite = first_failure(lhs, bound, d, eps, &finite_gate).has_value();
      if (f.c4 != f.c2_finite) equivalence_broken("conditions 4) and 2)", instance, t, s);
    }
  }
  return witness;
}

// ---------------------------------------------------------------------------
// semi-weak consistency (processes, one step)

std::optional<TcWitness> semiweak_instance(const LMMeasure& phi, Direction d, const AdaptedProcess& x,
                                           std::size_t instance, const CheckOptions& options, bool with_thresholds) {
  const double eps = options.eps;
  const int horizon = x.horizon();
  const UpdateRule rule = semiweak_rule(d);
  const std::vector<RandomVariable> vals = evaluate_all(phi, x);
  InstanceRng rng = threshold_rng(options, instance);
  std::optional<TcWitness> witness;
  for (int t = 0; t < horizon; ++t) {
    const RandomVariable& lhs = vals[static_cast<std::size_t>(t)];
    const RandomVariable& next = vals[static_cast<std::size_t>(t + 1)];
    // 2) phi_t >= 1{V_t >= 0} Essinf_t phi_{t+1} + 1{V_t < 0}(-inf)
    const RandomVariable rhs = rule(t, t + 1, next, x);
    const std::optional<std::size_t> w2 = first_failure(lhs, rhs, d, eps);
    if (w2 && !witness) witness = make_witness("2", instance, x, t, t + 1, next, *w2, lhs[*w2], rhs[*w2]);
    if (!with_thresholds) continue;
    // 1) thresholds m_{t+1} on the permissive side of phi_{t+1}
    bool c1 = w2.has_value();
    for (int k = 0; k < options.thresholds; ++k) {
      const RandomVariable m = threshold_past(next, t + 1, d, rng);
      if (first_failure(lhs, rule(t, t + 1, m, x), d, eps)) c1 = true;
    }
    // 3) on {V_t >= 0} (accept) the dividend stream 1{V_t >= 0} ._t V has V_t >= 0 everywhere
    const RandomVariable& vt = x.row(t);
    RandomVariable gate = RandomVariable::constant(x.space(), ExtReal(0.0));
    for (std::size_t w = 0; w < gate.size(); ++w) {
      const bool on = d == Direction::Accept ? vt[w] >= ExtReal(0.0) : vt[w] <= ExtReal(0.0);
      gate[w] = ExtReal(on ? 1.0 : 0.0);
    }
    const AdaptedProcess gated = mult_t(gate, x, t);
    const RandomVariable gated_t = phi(t, gated);
    const RandomVariable mt = conditional_bound(phi(t + 1, gated), t, d);
    bool c3 = first_failure(gated_t, mt, d, eps, &gate).has_value();
    for (int k = 0; k < options.thresholds; ++k) {
      if (first_failure(gated_t, threshold_past(mt, t, d, rng), d, eps, &gate)) c3 = true;
    }
    if (c1 != w2.has_value()) equivalence_broken("conditions 1) and 2)", instance, t, t + 1);
    if (c3 != w2.has_value()) equivalence_broken("conditions 3) and 2)", instance, t, t + 1);
  }
  return witness;
}

// ---------------------------------------------------------------------------
// benchmark consistency

constexpr double kShiftGrid[] = {-100.0, -10.0, -5.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0};

std::optional<TcWitness> benchmark_instance(const LMMeasure& phi, const std::vector<RandomVariable>& family,
                                            Direction d, const AdaptedProcess& x, std::size_t instance, double eps,
                                            const BenchmarkOptions& search) {
  const int horizon = x.horizon();
  const std::vector<RandomVariable> vals = evaluate_all(phi, x);
  const bool accept = d == Direction::Accept;
  for (int t = 0; t < horizon; ++t) {
    for (int s = t + 1; s <= horizon; ++s) {
      const RandomVariable& xs = vals[static_cast<std::size_t>(s)];
      const RandomVariable& xt = vals[static_cast<std::size_t>(t)];
      const Partition& atoms = x.space()->atoms(t);
      for (const RandomVariable& y : family) {
        require_same_space(y.space(), x.space(), "benchmark generator");
        for (const Atom& atom : atoms) {
          std::vector<ExtReal> shifts(std::begin(kShiftGrid), std::end(kShiftGrid));
          const ShiftSearch found = search_shift(phi, y, s, xs, atom, d, search);
          if (found.outcome == ShiftSearch::Outcome::Bounded) shifts.push_back(ExtReal(found.shift));
          if (found.outcome == ShiftSearch::Outcome::InfiniteShift)
            shifts.push_back(accept ? ExtReal::neg_inf() : ExtReal::pos_inf());
          if (found.outcome == ShiftSearch::Outcome::Unbounded)
            shifts.push_back(ExtReal(accept ? search.shift_cap : -search.shift_cap));
          for (ExtReal r : shifts) {
            const RandomVariable yr = shift_by(y, r);
            const RandomVariable ys = phi(s, yr);
            const bool premise = std::all_of(atom.begin(), atom.end(), [&](std::size_t w) {
              return accept ? xs[w] >= ys[w] : xs[w] <= ys[w];
            });
            if (!premise) continue;
            const RandomVariable yt = phi(t, yr);
            const std::size_t w = atom.front();
            if (fails(xt[w], yt[w], d, eps)) return make_witness("benchmark", instance, x, t, s, yr, w, xt[w], yt[w]);
          }
        }
      }
    }
  }
  return std::nullopt;
}

void require_kind(const LMMeasure& phi, Kind kind, const char* check) {
  if (phi.kind() != kind)
    throw Error(ErrorCode::KindMismatch, std::string(check) + " needs a " + to_string(kind) + " measure, " + phi.name() +
                                             " is " + to_string(phi.kind()));
}

}  // namespace

// ---------------------------------------------------------------------------

Verdict check_mu_tc(const LMMeasure& phi, const UpdateRule& mu, Direction direction, Scope scope,
                    const CheckOptions& options) {
  if (mu.kind() && *mu.kind() != phi.kind())
    throw Error(ErrorCode::KindMismatch, mu.name() + " acts on " + to_string(*mu.kind()) + ", " + phi.name() +
                                             " on " + to_string(phi.kind()));
  const std::size_t n = instance_count(options);
  auto hit = first_hit<TcWitness>(
      n,
      [&](std::size_t i) {
        InstanceRng rng = threshold_rng(options, i);
        return mu_recursive(phi, mu, direction, scope, make_instance(options, phi.kind(), i), i, options.eps, &rng,
                            options.thresholds);
      },
      options.parallel);
  Verdict v = finish(hit, n, options, direction, phi.kind(), [&](const AdaptedProcess& x, std::size_t i) {
    return mu_recursive(phi, mu, direction, scope, x, i, options.eps, nullptr, 0);
  });
  v.conditions = {{"recursive", v.holds, true}, {"threshold", v.holds, true}};
  return v;
}

Verdict check_weak_tc(const LMMeasure& phi, Direction direction, const CheckOptions& options) {
  require_kind(phi, Kind::Variables, "weak consistency");
  const std::size_t n = instance_count(options);
  auto hit = first_hit<TcWitness>(
      n,
      [&](std::size_t i) {
        return weak_instance(phi, direction, make_instance(options, Kind::Variables, i), i, options, true);
      },
      options.parallel);
  Verdict v = finish(hit, n, options, direction, Kind::Variables, [&](const AdaptedProcess& x, std::size_t i) {
    return weak_instance(phi, direction, x, i, options, false);
  });
  const bool monetary = phi.flags().monetary_utility;
  v.conditions = {{"1", v.holds, true}, {"2", v.holds, true}, {"3", v.holds, true}, {"4", v.holds, monetary}};
  return v;
}

Verdict check_semiweak_tc(const LMMeasure& phi, Direction direction, const CheckOptions& options) {
  require_kind(phi, Kind::Processes, "semi-weak consistency");
  const std::size_t n = instance_count(options);
  auto hit = first_hit<TcWitness>(
      n,
      [&](std::size_t i) {
        return semiweak_instance(phi, direction, make_instance(options, Kind::Processes, i), i, options, true);
      },
      options.parallel);
  Verdict v = finish(hit, n, options, direction, Kind::Processes, [&](const AdaptedProcess& x, std::size_t i) {
    return semiweak_instance(phi, direction, x, i, options, false);
  });
  v.conditions = {{"1", v.holds, true}, {"2", v.holds, true}, {"3", v.holds, true}};
  return v;
}

Verdict check_benchmark_tc(const LMMeasure& phi, const std::vector<RandomVariable>& generators, Direction direction,
                           const CheckOptions& options, const BenchmarkOptions& search) {
  const std::vector<RandomVariable> family = benchmark_family(generators);
  const SpacePtr& space = family.front().space();
  if (options.space == nullptr && options.samples > 0)
    throw Error(ErrorCode::SpaceMismatch, "benchmark checks need a fixed space for the generators");
  CheckOptions opts = options;
  opts.space = space;
  const std::size_t n = instance_count(opts);
  auto kernel = [&](const AdaptedProcess& x, std::size_t i) {
    return benchmark_instance(phi, family, direction, x, i, opts.eps, search);
  };
  auto hit = first_hit<TcWitness>(
      n, [&](std::size_t i) { return kernel(make_instance(opts, phi.kind(), i), i); }, opts.parallel);
  Verdict v = finish(hit, n, opts, direction, phi.kind(), kernel);
  v.conditions = {{"benchmark", v.holds, true}};
  return v;
}

Verdict check_projective_implies_weak(const LMMeasure& phi, const UpdateRule& mu, Direction direction,
                                      const CheckOptions& options, std::size_t classify_samples) {
  require_kind(phi, Kind::Variables, "projective implies weak");
  const SpacePtr probe = options.space ? options.space : make_s4();
  const ClassReport report = classify(mu, probe, classify_samples, options.seed, options.eps);
  if (!report.projective) {
    std::string detail = mu.name() + " is not projective";
    if (!report.witnesses.empty()) {
      const RuleWitness& w = report.witnesses.back();
      detail += " (" + w.property + " fails at t=" + std::to_string(w.t) + " s=" + std::to_string(w.s) + ")";
    }
    throw Error(ErrorCode::NotProjective, detail);
  }
  const std::size_t n = instance_count(options);
  auto kernel = [&](const AdaptedProcess& x, std::size_t i) -> std::optional<TcWitness> {
    if (mu_recursive(phi, mu, direction, Scope::Full, x, i, options.eps, nullptr, 0)) return std::nullopt;
    std::optional<TcWitness> weak = weak_instance(phi, direction, x, i, options, false);
    if (weak) weak->condition = "projective-implies-weak";
    return weak;
  };
  auto hit = first_hit<TcWitness>(
      n, [&](std::size_t i) { return kernel(make_instance(options, Kind::Variables, i), i); }, options.parallel);
  Verdict v = finish(hit, n, options, direction, Kind::Variables, kernel);
  v.conditions = {{"implication", v.holds, true}};
  return v;
}

std::optional<TcWitness> dglr_chain_violation(const AdaptedProcess& v, double eps) {
  const SpacePtr& space = v.space();
  for (int t = 0; t < v.horizon(); ++t) {
    const RandomVariable c = cond_essinf(dglr(t + 1, v), t);
    const RandomVariable tail_t = v.tail_sum(t);
    const RandomVariable tail_next = v.tail_sum(t + 1);
    const RandomVariable gain_t = cond_expect(tail_t, t);
    const RandomVariable gain_next = cond_expect(tail_next, t);
    std::vector<ExtReal> loss_next(tail_next.size()), loss_t(tail_t.size());
    for (std::size_t w = 0; w < loss_t.size(); ++w) {
      loss_next[w] = negative_part(tail_next[w]);
      loss_t[w] = negative_part(tail_t[w]);
    }
    const RandomVariable inner = cond_expect(cond_expect(RandomVariable(space, std::move(loss_next)), t + 1), t);
    const RandomVariable outer = cond_expect(RandomVariable(space, std::move(loss_t)), t);
    for (const Atom& atom : space->atoms(t)) {
      const std::size_t w = atom.front();
      if (v.row(t)[w] < ExtReal(0.0) || !(c[w] > ExtReal(0.0)) || !c[w].is_finite()) continue;
      const ExtReal links[4] = {gain_t[w], gain_next[w], mul(c[w], inner[w]), mul(c[w], outer[w])};
      for (int k = 0; k < 3; ++k) {
        if (!approx_ge(links[k], links[k + 1], eps))
          return make_witness("chain-" + std::to_string(k + 1), 0, v, t, t + 1, c, w, links[k], links[k + 1]);
      }
    }
  }
  return std::nullopt;
}

std::size_t shrink_process(AdaptedProcess& x, const std::function<bool(const AdaptedProcess&)>& still_fails, Kind kind) {
  const SpacePtr& space = x.space();
  const int horizon = x.horizon();
  std::size_t steps = 0;
  auto candidates = [](ExtReal v) {
    std::vector<ExtReal> out;
    if (!v.is_zero()) out.push_back(ExtReal(0.0));
    if (!v.is_finite()) {
      out.push_back(ExtReal(v.is_pos_inf() ? 1.0 : -1.0));
    } else {
      const double r = std::round(v.value());
      if (r != v.value()) out.push_back(ExtReal(r));
      if (std::fabs(r) > 1.0) out.push_back(ExtReal(r > 0 ? 1.0 : -1.0));
    }
    return out;
  };
  for (int pass = 0; pass < 8; ++pass) {
    bool changed = false;
    for (int r = kind == Kind::Variables ? horizon : 0; r <= horizon; ++r) {
      const Partition& atoms = space->atoms(r);
      for (const Atom& atom : atoms) {
        const ExtReal current = x.row(r)[atom.front()];
        for (ExtReal c : candidates(current)) {
          std::vector<RandomVariable> rows = x.rows();
          for (std::size_t w : atom) rows[static_cast<std::size_t>(r)][w] = c;
          AdaptedProcess trial(space, std::move(rows));
          if (still_fails(trial)) {
            x = std::move(trial);
            ++steps;
            changed = true;
            break;
          }
        }
      }
    }
    if (!changed) break;
  }
  return steps;
}

LMMeasure random_lm_measure(Kind kind, std::uint64_t seed) {
  InstanceRng rng(splitmix64(seed));
  constexpr int kLevels = 5;
  struct Level {
    double w_inf, w_mean, w_sup, shift;
  };
  std::vector<Level> levels(kLevels);
  const bool shifted = rng.bernoulli(0.3);
  for (Level& l : levels) {
    double w[3];
    double total = 0.0;
    for (double& wi : w) {
      wi = rng.bernoulli(0.3) ? 0.0 : rng.uniform(0.0, 1.0);
      total += wi;
    }
    if (total == 0.0) {
      w[1] = 1.0;
      total = 1.0;
    }
    l = Level{w[0] / total, w[1] / total, w[2] / total, shifted ? rng.uniform(-1.0, 1.0) : 0.0};
  }
  std::optional<MonotoneTransform> g;
  if (rng.bernoulli(0.25)) g = rng.bernoulli(0.5) ? MonotoneTransform::cube() : MonotoneTransform::arctan();
  const bool monetary = !shifted && !g;
  return LMMeasure(
      "random:" + std::to_string(seed), kind,
      [kind, levels, g](int t, const AdaptedProcess& x) {
        const RandomVariable payoff = kind == Kind::Variables ? x.row(x.horizon()) : x.tail_sum(t);
        const Level& l = levels[static_cast<std::size_t>(t) % levels.size()];
        const RandomVariable lo = cond_essinf(payoff, t);
        const RandomVariable mean = cond_expect(payoff, t);
        const RandomVariable hi = cond_esssup(payoff, t);
        std::vector<ExtReal> out(payoff.size());
        for (std::size_t w = 0; w < out.size(); ++w) {
          ExtReal v = add(add(mul(ExtReal(l.w_inf), lo[w]), mul(ExtReal(l.w_mean), mean[w])), mul(ExtReal(l.w_sup), hi[w]));
          v = add(v, ExtReal(l.shift));
          out[w] = g ? g->apply(v) : v;
        }
        return RandomVariable(x.space(), std::move(out));
      },
      MeasureFlags{monetary, false, false});
}

}  // namespace tclab
