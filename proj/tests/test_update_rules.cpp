#include <doctest.h>

#include "gen.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "tclab/cond_ops.hpp"
#include "tclab/update_rules.hpp"

using namespace tclab;
using gen::rv;
using support::same;

namespace {

const double inf = ExtReal::pos_inf().value();

AdaptedProcess with_row(const SpacePtr& s, int t, std::vector<double> row) {
  auto v = AdaptedProcess::zero(s);
  auto rows = v.rows();
  rows[static_cast<std::size_t>(t)] = rv(s, row);
  return AdaptedProcess(s, rows);
}

}  // namespace

TEST_CASE("essinf and esssup rules") {
  auto s = make_s4();
  auto mu = essinf_rule();
  CHECK(mu(0, 2, rv(s, {1, 3, 2, 5})) == RandomVariable::constant(s, 1.0));
  CHECK(mu(1, 2, rv(s, {-inf, 3, 2, 5})) == rv(s, {-inf, -inf, 2, 2}));
  CHECK(mu(1, 2, rv(s, {4, 4, -1, -1})) == rv(s, {4, 4, -1, -1}));
  CHECK(esssup_rule()(1, 2, rv(s, {1, 3, 2, 5})) == rv(s, {3, 3, 5, 5}));
  CHECK(mu.declared().projective);
}

TEST_CASE("expectation rule") {
  auto s = make_s4();
  auto mu = expectation_rule();
  CHECK(mu(1, 2, rv(s, {1, 3, 2, 5})) == rv(s, {2, 2, 3.5, 3.5}));
  CHECK(mu(1, 2, rv(s, {6, 6, -2, -2})) == rv(s, {6, 6, -2, -2}));
  CHECK(mu(1, 2, rv(s, {inf, 2, -inf, inf})) == rv(s, {inf, inf, -inf, -inf}));
}

TEST_CASE("discounted rule") {
  auto s = make_s4();
  auto mu = discounted_rule(0.5);
  CHECK(mu(0, 2, rv(s, {1, 3, 2, 5}))[0] == ExtReal(0.6875));
  CHECK(mu(0, 2, RandomVariable::constant(s, -4.0))[0] == ExtReal(-16.0));
  CHECK(mu(0, 2, RandomVariable::constant(s, 0.0))[0] == ExtReal(0.0));
  CHECK(mu(1, 2, rv(s, {1, 3, -2, -6})) == rv(s, {1, 1, -8, -8}));
  CHECK_CODE(discounted_rule(1.0), ErrorCode::BadAlpha);
  CHECK_CODE(discounted_rule(0.0), ErrorCode::BadAlpha);
}

TEST_CASE("process weak rule") {
  auto s = make_s4();
  auto m = rv(s, {1, 3, 2, 5});
  auto acc = process_weak_rule(Direction::Accept);
  CHECK(acc(1, 2, m, with_row(s, 1, {1, 1, 0, 0})) == rv(s, {2, 2, 2, 2}));
  CHECK(acc(1, 2, m, AdaptedProcess::zero(s)) == essinf_rule()(1, 2, m));
  CHECK(acc(1, 2, rv(s, {7, 7, 1, 1}), AdaptedProcess::zero(s)) == rv(s, {7, 7, 1, 1}));
  CHECK(process_weak_rule(Direction::Reject)(1, 2, m, with_row(s, 1, {1, 1, 0, 0})) == rv(s, {4, 4, 5, 5}));
  CHECK(acc.kind() == Kind::Processes);
  CHECK(acc.one_step_only());
}

TEST_CASE("semi-weak rule") {
  auto s = make_s4();
  auto m = rv(s, {1, 3, 2, 5});
  auto v = with_row(s, 1, {1, 1, -1, -1});
  CHECK(semiweak_rule(Direction::Accept)(1, 2, m, v) == rv(s, {1, 1, -inf, -inf}));
  CHECK(semiweak_rule(Direction::Reject)(1, 2, m, v) == rv(s, {inf, inf, 5, 5}));
  auto pos = with_row(s, 1, {0, 0, 2, 2});
  CHECK(semiweak_rule(Direction::Accept)(1, 2, m, pos) == essinf_rule()(1, 2, m));
}

TEST_CASE("call validation") {
  auto s = make_s4();
  auto m = rv(s, {1, 3, 2, 5});
  CHECK_CODE(essinf_rule()(1, 1, m), ErrorCode::TimeOrder);
  CHECK_CODE(essinf_rule()(2, 1, m), ErrorCode::TimeOrder);
  CHECK_CODE(essinf_rule()(0, 1, m), ErrorCode::NotMeasurable);
  CHECK_CODE(semiweak_rule(Direction::Accept)(0, 2, m, AdaptedProcess::zero(s)), ErrorCode::NotOneStep);
  CHECK_CODE(essinf_rule()(0, 3, m), ErrorCode::TimeOutOfRange);
}

TEST_CASE("benchmark rule") {
  auto s = make_s4();
  auto zero = std::vector<RandomVariable>{RandomVariable::constant(s, 0.0)};
  auto mu = benchmark_rule(zero, cond_expectation_measure());
  auto out = mu(1, 2, rv(s, {1, 3, 2, 5}));
  CHECK(same(out, rv(s, {1, 1, 2, 2})));
  CHECK(mu(1, 2, RandomVariable::constant(s, -inf)) == RandomVariable::constant(s, -inf));
  auto lower = mu(1, 2, rv(s, {0, 3, 2, 5}));
  CHECK(same(lower, rv(s, {0, 0, 2, 2})));
  for (std::size_t w = 0; w < 4; ++w) CHECK(lower[w] <= out[w]);
  auto rej = benchmark_rule(zero, cond_expectation_measure(), Direction::Reject);
  CHECK(same(rej(1, 2, rv(s, {1, 3, 2, 5})), rv(s, {3, 3, 5, 5})));
  CHECK(rej(1, 2, RandomVariable::constant(s, inf)) == RandomVariable::constant(s, inf));

  CHECK_CODE(benchmark_family({}), ErrorCode::EmptyBenchmark);
  CHECK(benchmark_family({rv(s, {0, 0, 1, 1})}).size() == 2);
  CHECK(benchmark_family({rv(s, {3, 3, 3, 3})}).size() == 1);

  // A nonconstant generator on its own: Y + r with Y = (0, 0, 1, 1).
  auto gen_mu = benchmark_rule({rv(s, {0, 0, 1, 1})}, cond_expectation_measure());
  auto g_out = gen_mu(0, 1, rv(s, {3, 3, 3, 3}));
  CHECK(same(g_out, RandomVariable::constant(s, 3.0)));
}

TEST_CASE("shift search outcomes") {
  auto s = make_s4();
  auto phi = cond_expectation_measure();
  auto y = RandomVariable::constant(s, 0.0);
  const auto& atom = s->atoms(1)[0];
  auto bounded = search_shift(phi, y, 2, rv(s, {1, 3, 2, 5}), atom, Direction::Accept, {});
  CHECK(bounded.outcome == ShiftSearch::Outcome::Bounded);
  CHECK(bounded.shift == doctest::Approx(1.0));
  auto none = search_shift(phi, y, 2, RandomVariable::constant(s, -inf), atom, Direction::Accept, {});
  CHECK(none.outcome == ShiftSearch::Outcome::InfiniteShift);
  auto all = search_shift(phi, y, 2, RandomVariable::constant(s, inf), atom, Direction::Accept, {});
  CHECK(all.outcome == ShiftSearch::Outcome::Unbounded);
  // A generator whose expectation is -inf everywhere admits only the infinite shift.
  auto bad = search_shift(phi, rv(s, {-inf, -inf, -inf, -inf}), 2, rv(s, {1, 3, 2, 5}), atom, Direction::Reject, {});
  CHECK(bad.outcome == ShiftSearch::Outcome::Infeasible);
}

TEST_CASE("nested composition") {
  auto s = make_s4();
  auto m = rv(s, {1, 3, 2, 5});
  CHECK(compose_nested(expectation_rule(), 0, 2, m, AdaptedProcess::zero(s))[0] == ExtReal(2.75));
  CHECK(compose_nested(expectation_rule(), 1, 2, m, AdaptedProcess::zero(s)) == expectation_rule()(1, 2, m));
  CHECK(compose_nested(essinf_rule(), 0, 2, m, AdaptedProcess::zero(s))[0] == ExtReal(1.0));
  CHECK_CODE(compose_nested(essinf_rule(), 1, 1, m, AdaptedProcess::zero(s)), ErrorCode::TimeOrder);
  auto nested = nested_rule(process_weak_rule(Direction::Accept));
  auto v = with_row(s, 1, {1, 1, 0, 0});
  CHECK(nested(0, 2, m, v)[0] == ExtReal(2.0));
  CHECK(!nested.one_step_only());
}

TEST_CASE("monotone transform rule") {
  auto s = make_s4();
  auto m = rv(s, {2, 6, 4, 10});
  auto id = monotone_transform_rule(MonotoneTransform::identity(), expectation_rule());
  CHECK(id(1, 2, m) == expectation_rule()(1, 2, m));
  auto twice = monotone_transform_rule(MonotoneTransform::scale(2.0), essinf_rule());
  CHECK(twice(1, 2, m) == rv(s, {2, 2, 4, 4}));
  auto bounded = monotone_transform_rule(MonotoneTransform::arctan(), expectation_rule());
  auto rep = classify(bounded, s, 100, 4);
  CHECK(rep.local);
  CHECK(rep.monotone);
}

TEST_CASE("classifier verdicts") {
  auto s = make_s4();
  auto ei = classify(essinf_rule(), s, 100, 1);
  CHECK(ei.local);
  CHECK(ei.monotone);
  CHECK(ei.x_invariant);
  CHECK(ei.sx_invariant);
  CHECK(ei.projective);
  CHECK(ei.contradictions.empty());
  CHECK(classify(expectation_rule(), s, 100, 1).projective);

  auto disc = classify(discounted_rule(0.5), s, 100, 1);
  CHECK(disc.local);
  CHECK(disc.monotone);
  CHECK(disc.x_invariant);
  CHECK(!disc.projective);
  bool found = false;
  for (const auto& w : disc.witnesses) {
    if (w.property != "projective") continue;
    found = true;
    CHECK(w.m == RandomVariable::constant(s, 1.0));
    CHECK(w.lhs != w.rhs);
  }
  CHECK(found);

  auto semi = classify(semiweak_rule(Direction::Accept), s, 200, 1);
  CHECK(semi.local);
  CHECK(semi.monotone);
  CHECK(!semi.x_invariant);
  bool xw = false;
  for (const auto& w : semi.witnesses) xw = xw || w.property == "x_invariant";
  CHECK(xw);

  UpdateRule liar("liar", [](int t, int, const RandomVariable& m, const AdaptedProcess&) {
    return pointwise_neg(cond_essinf(m, t));
  }, RuleFlags{true, true, true});
  auto lr = classify(liar, s, 100, 1);
  CHECK(!lr.monotone);
  CHECK(!lr.contradictions.empty());
}

TEST_CASE("property: constructed rules are local and monotone on random spaces") {
  std::vector<UpdateRule> rules{essinf_rule(),
                                esssup_rule(),
                                expectation_rule(),
                                discounted_rule(0.7),
                                process_weak_rule(Direction::Accept),
                                process_weak_rule(Direction::Reject),
                                semiweak_rule(Direction::Accept),
                                semiweak_rule(Direction::Reject),
                                monotone_transform_rule(MonotoneTransform::cube(), expectation_rule())};
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    gen::Gen g(seed);
    auto s = g.space(12, 3);
    for (const auto& mu : rules) {
      auto rep = classify(mu, s, 40, seed);
      INFO(mu.name() << " seed " << seed);
      CHECK(rep.local);
      CHECK(rep.monotone);
    }
  }
}

TEST_CASE("property: essinf and expectation rules fix F_t-measurable levels") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    gen::Gen g(seed);
    auto s = g.space(10, 4);
    int t = g.integer(0, s->horizon() - 1);
    int u = g.integer(t + 1, s->horizon());
    auto m = g.measurable(s, t);
    CHECK(essinf_rule()(t, u, m) == m);
    CHECK(same(expectation_rule()(t, u, m), m, 1e-12));
  }
}

TEST_CASE("property: benchmark rule with generator 0 and a monetary measure is Essinf") {
  auto phi = cond_expectation_measure();
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    gen::Gen g(seed);
    auto s = g.space(8, 3);
    int t = g.integer(0, s->horizon() - 1);
    int u = g.integer(t + 1, s->horizon());
    auto m = g.measurable(s, u);
    for (auto dir : {Direction::Accept, Direction::Reject}) {
      auto mu = benchmark_rule({RandomVariable::constant(s, 0.0)}, phi, dir);
      auto want = dir == Direction::Accept ? oracle::atom_min(m, t) : oracle::atom_max(m, t);
      INFO("seed " << seed << " m " << support::show(m) << " " << to_string(dir));
      CHECK(same(mu(t, u, m), want));
    }
  }
}
