#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "tclab/cond_ops.hpp"
#include "tclab/lm_measures.hpp"
#include "tclab/transforms.hpp"

using namespace tclab;
using gen::rv;
using support::same;

namespace {

const double inf = ExtReal::pos_inf().value();

AdaptedProcess terminal(const SpacePtr& s, std::vector<double> v) { return AdaptedProcess::terminal(rv(s, v)); }

AdaptedProcess scaled(const RandomVariable& lambda, const AdaptedProcess& v, int t) { return mult_t(lambda, v, t); }

AdaptedProcess shifted_at(const AdaptedProcess& v, int t, const RandomVariable& c) {
  auto rows = v.rows();
  rows[static_cast<std::size_t>(t)] = pointwise_add(rows[static_cast<std::size_t>(t)], c);
  return AdaptedProcess(v.space(), rows);
}

}  // namespace

TEST_CASE("conditional expectation measure") {
  auto s = make_s4();
  auto phi = cond_expectation_measure();
  CHECK(phi.kind() == Kind::Variables);
  CHECK(phi.flags().monetary_utility);
  CHECK(phi(1, rv(s, {4, 2, -2, 6})) == rv(s, {3, 3, 2, 2}));
  CHECK(phi(0, rv(s, {1, 3, 2, 5})) == RandomVariable::constant(s, 2.75));
  auto c = rv(s, {1, 1, -4, -4});
  CHECK(phi(1, pointwise_add(rv(s, {4, 2, -2, 6}), c)) == pointwise_add(rv(s, {3, 3, 2, 2}), c));
}

TEST_CASE("dglr examples") {
  auto s = make_s4();
  CHECK(dglr(0, terminal(s, {2, -1, 4, -3}))[0] == ExtReal(0.5));
  CHECK(dglr(0, terminal(s, {-1, -1, 1, 0}))[0] == ExtReal(0.0));
  CHECK(dglr(0, terminal(s, {1, 2, 3, 4}))[0] == ExtReal::pos_inf());
  // Dividends before t do not count.
  AdaptedProcess v(s, {rv(s, {-9, -9, -9, -9}), rv(s, {0, 0, 0, 0}), rv(s, {2, -1, 4, -3})});
  CHECK(dglr(1, v) == rv(s, {1, 1, 1.0 / 3, 1.0 / 3}));
  CHECK(dglr(1, v) == dglr(1, terminal(s, {2, -1, 4, -3})));
}

TEST_CASE("cvar and draroc examples") {
  auto s = make_s4();
  CHECK(cvar_rho(0, terminal(s, {1, 2, 3, 4}), 0.5)[0] == ExtReal(1.5));
  CHECK(cvar_rho(0, terminal(s, {7, 7, 7, 7}), 0.25)[0] == ExtReal(7.0));
  CHECK(cvar_rho(1, terminal(s, {1, 2, 3, 4}), 1.0) == cond_expect(rv(s, {1, 2, 3, 4}), 1));
  CHECK(cvar_rho(0, terminal(s, {-1, -2, 3, 4}), 0.5)[0] == ExtReal(-1.5));
  CHECK(same(draroc(0, terminal(s, {-1, -2, 3, 4}), 0.5), RandomVariable::constant(s, 2.0 / 3)));
  CHECK(draroc(0, terminal(s, {1, 2, 3, 4}), 0.5)[0] == ExtReal::pos_inf());
  CHECK(draroc(0, terminal(s, {-1, -1, 1, 0}), 0.5)[0] == ExtReal(0.0));
  CHECK_CODE(cvar_rho(0, terminal(s, {1, 2, 3, 4}), 0.0), ErrorCode::BadAlpha);
  CHECK_CODE(cvar_rho(0, terminal(s, {1, 2, 3, 4}), 1.5), ErrorCode::BadAlpha);
  CHECK_CODE(draroc_measure(1.0), ErrorCode::BadAlpha);
}

TEST_CASE("RAROC risk family examples") {
  auto s = make_s4();
  auto v = terminal(s, {-1, -2, 3, 4});
  CHECK(raroc_risk_family(0.0, 0, v, 0.5) == cond_expect(rv(s, {-1, -2, 3, 4}), 0));
  CHECK(raroc_risk_family(1.0, 0, v, 0.5)[0] == ExtReal(-0.25));
  CHECK(approx_eq(raroc_risk_family(1e6, 0, v, 0.5)[0], ExtReal(-1.5), 1e-5));
  CHECK_CODE(raroc_risk_family(-1.0, 0, v, 0.5), ErrorCode::BadX);
  CHECK_CODE(raroc_family_measure(0.5, inf), ErrorCode::BadX);
  auto family = raroc_family(0.5);
  CHECK(family.at(1.0)(0, v) == raroc_risk_family(1.0, 0, v, 0.5));
}

TEST_CASE("axiom checks") {
  auto s = make_s4();
  for (const auto& phi : {dglr_measure(), draroc_measure(0.5), cond_expectation_measure(), esssup_measure()}) {
    auto rep = check_lm_axioms(phi, s, 200, 3);
    INFO(phi.name());
    CHECK(rep.local);
    CHECK(rep.monotone);
    CHECK(rep.seed == 3);
  }
  LMMeasure broken("neg-cexp", Kind::Variables, [](int t, const AdaptedProcess& x) {
    return pointwise_neg(cond_expect(x.row(x.horizon()), t));
  });
  auto rep = check_lm_axioms(broken, s, 200, 3);
  CHECK(rep.local);
  CHECK(!rep.monotone);
  REQUIRE(rep.monotonicity_witness);
  const auto& w = *rep.monotonicity_witness;
  REQUIRE(w.y);
  CHECK(broken(w.t, w.x)[w.outcome] == w.lhs);
  CHECK(broken(w.t, *w.y)[w.outcome] == w.rhs);
  CHECK(w.lhs > w.rhs);

  LMMeasure nonlocal("global-mean", Kind::Variables, [](int, const AdaptedProcess& x) {
    return cond_expect(x.row(x.horizon()), 0);
  });
  auto rep2 = check_lm_axioms(nonlocal, s, 50, 3);
  CHECK(!rep2.local);
  CHECK(rep2.locality_witness);
}

TEST_CASE("monotone transforms") {
  auto s = make_s4();
  auto v = terminal(s, {2, -1, 4, -3});
  auto id = monotone_transform_measure(MonotoneTransform::identity(), dglr_measure());
  CHECK(id(0, v) == dglr(0, v));
  auto cube = monotone_transform_measure(MonotoneTransform::cube(), dglr_measure());
  CHECK(cube(0, v)[0] == ExtReal(0.125));
  auto rep = check_lm_axioms(cube, s, 200, 5);
  CHECK(rep.local);
  CHECK(rep.monotone);
  auto at = monotone_transform_measure(MonotoneTransform::arctan(), dglr_measure());
  CHECK(at(0, terminal(s, {1, 2, 3, 4}))[0] == ExtReal(std::numbers::pi / 2));
  auto g = MonotoneTransform::arctan();
  CHECK(g.invert(g.apply(ExtReal::pos_inf())) == ExtReal::pos_inf());
  CHECK(g.invert(g.apply(ExtReal::neg_inf())) == ExtReal::neg_inf());
  CHECK(g.apply(ExtReal(0.0)) == ExtReal(0.0));
  CHECK_CODE(MonotoneTransform("square", [](ExtReal x) { return mul(x, x); }, [](ExtReal y) { return y; }),
             ErrorCode::NonInvertibleTransform);
  CHECK_CODE(MonotoneTransform::scale(-1.0), ErrorCode::NonInvertibleTransform);
}

TEST_CASE("property: ratio measures are scale invariant and nonnegative") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    gen::Gen g(seed);
    auto s = g.space(8, 3);
    auto v = g.process(s);
    int t = g.integer(0, s->horizon());
    auto lambda = g.measurable(s, t, false);
    for (std::size_t w = 0; w < s->size(); ++w) lambda[w] = ExtReal(0.25 + std::abs(lambda[w].value()));
    INFO("seed " << seed);
    auto d = dglr(t, v);
    auto r = draroc(t, v, 0.5);
    CHECK(same(dglr(t, scaled(lambda, v, t)), d));
    CHECK(same(draroc(t, scaled(lambda, v, t), 0.5), r));
    for (std::size_t w = 0; w < s->size(); ++w) {
      CHECK(d[w] >= ExtReal(0.0));
      CHECK(r[w] >= ExtReal(0.0));
    }
  }
}

TEST_CASE("property: RAROC family is non-increasing in x") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    gen::Gen g(seed);
    auto s = g.space(8, 3);
    auto v = g.process(s);
    int t = g.integer(0, s->horizon());
    double x1 = g.real(0.0, 5.0);
    double x2 = x1 + g.real(0.0, 5.0);
    auto a = raroc_risk_family(x1, t, v, 0.5);
    auto b = raroc_risk_family(x2, t, v, 0.5);
    for (std::size_t w = 0; w < s->size(); ++w) CHECK(approx_le(b[w], a[w], 1e-9));
  }
}

TEST_CASE("property: cvar monotone, cash additive, non-decreasing in alpha, equal to the LP") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    gen::Gen g(seed);
    auto s = g.space(7, 3);
    auto v = g.process(s, false);
    int t = g.integer(0, s->horizon());
    double a = g.real(0.05, 1.0);
    double b = g.real(a, 1.0);
    INFO("seed " << seed << " t " << t << " alpha " << a);
    auto rho = cvar_rho(t, v, a);
    auto lp = oracle::lp_cvar(v.tail_sum(t), t, a);
    for (std::size_t w = 0; w < s->size(); ++w) CHECK(rho[w].value() == doctest::Approx(lp[w]).epsilon(1e-9));

    std::vector<RandomVariable> lower;
    for (int u = 0; u <= s->horizon(); ++u) lower.push_back(g.below(v.row(u), u));
    auto rho_low = cvar_rho(t, AdaptedProcess(s, lower), a);
    auto c = g.measurable(s, t, false);
    auto rho_shift = cvar_rho(t, shifted_at(v, t, c), a);
    auto rho_b = cvar_rho(t, v, b);
    for (std::size_t w = 0; w < s->size(); ++w) {
      CHECK(approx_le(rho_low[w], rho[w], 1e-9));
      CHECK(approx_eq(rho_shift[w], add(rho[w], c[w]), 1e-9));
      CHECK(approx_le(rho[w], rho_b[w], 1e-9));
    }
  }
}
