#include "tclab/lm_measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tclab/cond_ops.hpp"
#include "tclab/errors.hpp"

namespace tclab {

LMMeasure::LMMeasure(std::string name, Kind kind, Evaluator eval, MeasureFlags flags)
    : name_(std::move(name)), kind_(kind), eval_(std::move(eval)), flags_(flags) {}

RandomVariable LMMeasure::operator()(int t, const AdaptedProcess& x) const {
  x.space()->check_time(t);
  RandomVariable out = eval_(t, x);
  require_same_space(out.space(), x.space(), name_.c_str());
  return out;
}

LMMeasure RiskFamily::at(double x) const {
  auto fn = eval;
  return LMMeasure(name + "@" + to_string(ExtReal(x)), kind,
                   [fn, x](int t, const AdaptedProcess& v) { return fn(x, t, v); });
}

namespace {

void check_alpha_half_open(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::BadAlpha, "alpha=" + std::to_string(alpha) + " not in (0,1]");
}

void check_alpha_open(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::BadAlpha, "alpha=" + std::to_string(alpha) + " not in (0,1)");
}

}  // namespace

RandomVariable dglr(int t, const AdaptedProcess& v) {
  const RandomVariable s = v.tail_sum(t);
  const RandomVariable gain = cond_expect(s, t);
  std::vector<ExtReal> losses_raw(s.size());
  for (std::size_t w = 0; w < s.size(); ++w) losses_raw[w] = negative_part(s[w]);
  const RandomVariable loss = cond_expect(RandomVariable(s.space(), std::move(losses_raw)), t);
  std::vector<ExtReal> out(s.size());
  for (std::size_t w = 0; w < s.size(); ++w) {
    if (!(gain[w] > ExtReal(0.0)))
      out[w] = ExtReal(0.0);
    else if (loss[w].is_zero())
      out[w] = ExtReal::pos_inf();
    else
      out[w] = ratio_nonneg(gain[w], loss[w]);
  }
  return RandomVariable(s.space(), std::move(out));
}

RandomVariable cvar_density(const RandomVariable& s, int t, double alpha) {
  check_alpha_half_open(alpha);
  const FilteredSpace& space = *s.space();
  std::vector<ExtReal> z(s.size(), ExtReal(0.0));
  const Partition& part = space.atoms(t);
  for (std::size_t k = 0; k < part.size(); ++k) {
    Atom order = part[k];
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
    double remaining = space.atom_prob(t, k);
    for (std::size_t w : order) {
      if (remaining <= 0.0) break;
      const double take = std::min(space.prob(w) / alpha, remaining);
      z[w] = ExtReal(take / space.prob(w));
      remaining -= take;
    }
  }
  return RandomVariable(s.space(), std::move(z));
}

RandomVariable cvar_rho(int t, const AdaptedProcess& v, double alpha) {
  check_alpha_half_open(alpha);
  const RandomVariable s = v.tail_sum(t);
  return cond_expect(pointwise_mul(cvar_density(s, t, alpha), s), t);
}

RandomVariable draroc(int t, const AdaptedProcess& v, double alpha) {
  check_alpha_open(alpha);
  const RandomVariable gain = cond_expect(v.tail_sum(t), t);
  const RandomVariable rho = cvar_rho(t, v, alpha);
  std::vector<ExtReal> out(gain.size());
  for (std::size_t w = 0; w < gain.size(); ++w) {
    if (rho[w] >= ExtReal(0.0))
      out[w] = ExtReal::pos_inf();
    else if (!(gain[w] > ExtReal(0.0)))
      out[w] = ExtReal(0.0);
    else
      out[w] = ratio_nonneg(gain[w], neg(rho[w]));
  }
  return RandomVariable(gain.space(), std::move(out));
}

RandomVariable raroc_risk_family(double x, int t, const AdaptedProcess& v, double alpha) {
  check_alpha_open(alpha);
  if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorCode::BadX, "x=" + std::to_string(x) + " must be finite and >= 0");
  const RandomVariable gain = cond_expect(v.tail_sum(t), t);
  const RandomVariable rho = cvar_rho(t, v, alpha);
  const ExtReal w_mean(1.0 / (1.0 + x));
  const ExtReal w_tail(x / (1.0 + x));
  std::vector<ExtReal> out(gain.size());
  for (std::size_t w = 0; w < gain.size(); ++w) out[w] = add(mul(w_mean, gain[w]), mul(w_tail, rho[w]));
  return RandomVariable(gain.space(), std::move(out));
}

LMMeasure cond_expectation_measure() {
  return LMMeasure("cexp", Kind::Variables,
                   [](int t, const AdaptedProcess& x) { return cond_expect(x.row(x.horizon()), t); },
                   MeasureFlags{true, false, false});
}

LMMeasure dglr_measure() {
  return LMMeasure("dglr", Kind::Processes, [](int t, const AdaptedProcess& v) { return dglr(t, v); },
                   MeasureFlags{false, true, true});
}

LMMeasure draroc_measure(double alpha) {
  check_alpha_open(alpha);
  return LMMeasure("draroc:" + to_string(ExtReal(alpha)), Kind::Processes,
                   [alpha](int t, const AdaptedProcess& v) { return draroc(t, v, alpha); },
                   MeasureFlags{false, true, true});
}

LMMeasure raroc_family_measure(double alpha, double x) {
  check_alpha_open(alpha);
  if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorCode::BadX, "x=" + std::to_string(x) + " must be finite and >= 0");
  return LMMeasure("raroc-family:" + to_string(ExtReal(alpha)) + ":" + to_string(ExtReal(x)), Kind::Processes,
                   [alpha, x](int t, const AdaptedProcess& v) { return raroc_risk_family(x, t, v, alpha); },
                   MeasureFlags{false, false, true});
}

RiskFamily raroc_family(double alpha) {
  check_alpha_open(alpha);
  return RiskFamily{"raroc:" + to_string(ExtReal(alpha)), Kind::Processes,
                    [alpha](double x, int t, const AdaptedProcess& v) { return raroc_risk_family(x, t, v, alpha); }};
}

LMMeasure esssup_measure() {
  return LMMeasure("esssup", Kind::Variables,
                   [](int t, const AdaptedProcess& x) { return cond_esssup(x.row(x.horizon()), t); });
}

LMMeasure monotone_transform_measure(const MonotoneTransform& g, const LMMeasure& measure) {
  return LMMeasure(g.name() + "(" + measure.name() + ")", measure.kind(),
                   [g, measure](int t, const AdaptedProcess& x) {
                     RandomVariable out = measure(t, x);
                     for (std::size_t w = 0; w < out.size(); ++w) out[w] = g.apply(out[w]);
                     return out;
                   });
}

AxiomReport check_lm_axioms(const LMMeasure& measure, const SpacePtr& space, std::size_t sample_count,
                            std::uint64_t seed, double eps) {
  AxiomReport report;
  report.seed = seed;
  const bool exhaustive = space->size() <= 12;
  for (std::size_t i = 0; i < sample_count; ++i) {
    InstanceRng rng = InstanceRng::stream(seed, i);
    const AdaptedProcess x = random_position(space, measure.kind(), rng);
    for (int t = 0; t <= space->horizon(); ++t) {
      const RandomVariable base = measure(t, x);
      const std::size_t atoms = space->atoms(t).size();
      const std::uint64_t masks = exhaustive ? (std::uint64_t{1} << atoms) : 64;
      for (std::uint64_t k = 0; k < masks && report.local; ++k) {
        const std::uint64_t mask = exhaustive ? k : rng.engine()() & ((std::uint64_t{1} << std::min<std::size_t>(atoms, 63)) - 1);
        const RandomVariable ind = atom_union_indicator(space, t, mask);
        const RandomVariable restricted = measure(t, mult_t(ind, x, t));
        ++report.checked;
        for (std::size_t w = 0; w < space->size(); ++w) {
          const ExtReal lhs = mul(ind[w], base[w]);
          const ExtReal rhs = mul(ind[w], restricted[w]);
          if (!approx_eq(lhs, rhs, eps)) {
            report.local = false;
            report.locality_witness = AxiomWitness{x, std::nullopt, t, mask, w, lhs, rhs};
            break;
          }
        }
      }
      if (!report.monotone) continue;
      const AdaptedProcess lower = random_below(x, rng, measure.kind());
      const RandomVariable lo = measure(t, lower);
      ++report.checked;
      for (std::size_t w = 0; w < space->size(); ++w) {
        if (!approx_le(lo[w], base[w], eps)) {
          report.monotone = false;
          report.monotonicity_witness = AxiomWitness{lower, x, t, 0, w, lo[w], base[w]};
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace tclab
