#include <doctest.h>

#include "gen.hpp"
#include "support.hpp"
#include "tclab/prob_space.hpp"

using namespace tclab;
using gen::rv;

TEST_CASE("S4 builds and canonicalises atoms") {
  auto s = make_s4();
  CHECK(s->size() == 4);
  CHECK(s->horizon() == 2);
  CHECK(s->atoms(1).size() == 2);
  CHECK(s->atom_of(1, 3) == 1);
  CHECK(s->atom_prob(1, 0) == doctest::Approx(0.5));

  auto shuffled = FilteredSpace::build({"a", "b", "c", "d"}, {0.25, 0.25, 0.25, 0.25},
                                       {{{3, 1, 2, 0}}, {{3, 2}, {1, 0}}, {{2}, {0}, {3}, {1}}});
  CHECK(shuffled->atoms(1)[0] == Atom{0, 1});
  CHECK(shuffled->atoms(2)[3] == Atom{3});
}

TEST_CASE("space validation errors") {
  CHECK_CODE(FilteredSpace::build({"a", "b", "c"}, {0.5, 0.5, 0.5}, {{{0, 1, 2}}}), ErrorCode::BadProbabilities);
  CHECK_CODE(FilteredSpace::build({"a", "b"}, {1.0, 0.0}, {{{0, 1}}}), ErrorCode::BadProbabilities);
  CHECK_CODE(FilteredSpace::build({"a", "b", "c", "d"}, {0.25, 0.25, 0.25, 0.25},
                                  {{{0, 1, 2, 3}}, {{0}, {1}, {2}, {3}}, {{0, 1}, {2, 3}}}),
             ErrorCode::NonRefiningFiltration);
  CHECK_CODE(FilteredSpace::build({"a", "b"}, {0.5, 0.5}, {{{0}, {1}}, {{0}, {1}}}), ErrorCode::NontrivialRoot);
  CHECK_CODE(FilteredSpace::build({"a", "b"}, {0.5, 0.5}, {{{0, 1}}}), ErrorCode::BadPartition);
  CHECK_CODE(FilteredSpace::build({"a", "b"}, {0.5, 0.5}, {{{0, 1}}, {{0}}}), ErrorCode::BadPartition);
  CHECK_CODE(FilteredSpace::build({"a", "b"}, {0.5, 0.5}, {{{0, 1}}, {{0, 0}, {1}}}), ErrorCode::BadPartition);
  CHECK_CODE(make_s4()->check_time(3), ErrorCode::TimeOutOfRange);
  CHECK_CODE(make_s4()->check_time(-1), ErrorCode::TimeOutOfRange);
}

TEST_CASE("measurability") {
  auto s = make_s4();
  CHECK(is_measurable(rv(s, {1, 1, 2, 2}), 1));
  CHECK(!is_measurable(rv(s, {1, 3, 2, 2}), 1));
  CHECK(is_measurable(rv(s, {1, 3, 2, 2}), 2));
  CHECK_CODE(AdaptedProcess(s, {rv(s, {1, 1, 1, 1}), rv(s, {1, 2, 3, 3}), rv(s, {0, 0, 0, 0})}),
             ErrorCode::NotMeasurable);
}

TEST_CASE("mult_t") {
  auto s = make_s4();
  AdaptedProcess v(s, {rv(s, {1, 1, 1, 1}), rv(s, {2, 2, 3, 3}), rv(s, {1, 2, 3, 4})});
  auto z = mult_t(RandomVariable::constant(s, 0.0), v, 1);
  CHECK(z.row(0) == v.row(0));
  CHECK(z.row(1) == rv(s, {0, 0, 0, 0}));
  CHECK(z.row(2) == rv(s, {0, 0, 0, 0}));
  CHECK(!(z == AdaptedProcess::zero(s)));
  CHECK(mult_t(RandomVariable::constant(s, 1.0), v, 1) == v);
  CHECK_CODE(mult_t(rv(s, {1, 2, 1, 1}), v, 1), ErrorCode::NotMeasurable);

  auto x = rv(s, {1, -2, ExtReal::pos_inf().value(), 4});
  auto m = rv(s, {2, 2, 0, 3});
  CHECK(mult_t(m, AdaptedProcess::terminal(x), 2).row(2) == pointwise_mul(m, x));
}

TEST_CASE("tail sums follow the conventions") {
  auto s = make_s4();
  const double inf = ExtReal::pos_inf().value();
  AdaptedProcess v(s, {rv(s, {1, 1, 1, 1}), rv(s, {inf, inf, 3, 3}), rv(s, {-inf, 2, 3, 4})});
  CHECK(v.tail_sum(0) == rv(s, {-inf, inf, 7, 8}));
  CHECK(v.tail_sum(2) == v.row(2));
}

TEST_CASE("atom_union_indicator and space mismatch") {
  auto s = make_s4();
  CHECK(atom_union_indicator(s, 1, 0b10) == rv(s, {0, 0, 1, 1}));
  CHECK(atom_union_indicator(s, 2, 0b0101) == rv(s, {1, 0, 1, 0}));
  CHECK_CODE(pointwise_add(rv(s, {1, 1, 1, 1}), rv(make_s4(), {1, 1, 1, 1})), ErrorCode::SpaceMismatch);
}

TEST_CASE("property: refinement and measurability persist in time") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    gen::Gen g(seed);
    auto s = g.space(10, 4);
    for (int t = 0; t < s->horizon(); ++t) {
      for (const auto& fine : s->atoms(t + 1)) {
        std::size_t containing = 0;
        for (const auto& coarse : s->atoms(t)) {
          std::size_t inside = 0;
          for (auto w : fine) inside += std::count(coarse.begin(), coarse.end(), w);
          if (inside == fine.size()) ++containing;
          else CHECK(inside == 0);
        }
        CHECK(containing == 1);
      }
    }
    int t = g.integer(0, s->horizon());
    auto x = g.measurable(s, t);
    for (int u = t; u <= s->horizon(); ++u) CHECK(is_measurable(x, u));
  }
}

TEST_CASE("property: mult_t is monotone in V for m >= 0") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    gen::Gen g(seed);
    auto s = g.space();
    int t = g.integer(0, s->horizon());
    auto v = g.process(s);
    std::vector<RandomVariable> lower;
    for (int u = 0; u <= s->horizon(); ++u) lower.push_back(g.below(v.row(u), u));
    AdaptedProcess w(s, lower);
    auto m = g.measurable(s, t, false);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = ExtReal(std::abs(m[k].value()));
    auto a = mult_t(m, w, t);
    auto b = mult_t(m, v, t);
    for (int u = 0; u <= s->horizon(); ++u)
      for (std::size_t k = 0; k < s->size(); ++k) CHECK(a.row(u)[k] <= b.row(u)[k]);
    CHECK(mult_t(RandomVariable::constant(s, 1.0), v, t) == v);
  }
}
