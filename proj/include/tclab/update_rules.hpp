#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tclab/lm_measures.hpp"
#include "tclab/prob_space.hpp"
#include "tclab/random.hpp"
#include "tclab/transforms.hpp"

namespace tclab {

enum class Direction { Accept, Reject };
const char* to_string(Direction d);

struct RuleFlags {
  bool x_invariant = false;
  bool sx_invariant = false;
  bool projective = false;
};

/// Update rule mu_{t,s}(m, X): translates a time-s level m into a time-t level.
///
/// Calls are validated: 0 <= t < s <= T (TimeOrder), s == t+1 for one-step
/// rules (NotOneStep) and m must be F_s-measurable (NotMeasurable). Declared
/// flags are metadata only; `classify` checks them.
class UpdateRule {
 public:
  using Evaluator = std::function<RandomVariable(int t, int s, const RandomVariable& m, const AdaptedProcess& x)>;

  UpdateRule(std::string name, Evaluator eval, RuleFlags declared, bool one_step_only = false,
             std::optional<Kind> kind = std::nullopt);

  RandomVariable operator()(int t, int s, const RandomVariable& m, const AdaptedProcess& x) const;
  RandomVariable operator()(int t, int s, const RandomVariable& m) const;

  const std::string& name() const noexcept { return name_; }
  const RuleFlags& declared() const noexcept { return declared_; }
  bool one_step_only() const noexcept { return one_step_only_; }
  /// Set when the rule only makes sense for one kind of argument.
  const std::optional<Kind>& kind() const noexcept { return kind_; }

 private:
  std::string name_;
  Evaluator eval_;
  RuleFlags declared_;
  bool one_step_only_;
  std::optional<Kind> kind_;
};

UpdateRule essinf_rule();
UpdateRule esssup_rule();
UpdateRule expectation_rule();
/// alpha^{s-t} E[m|F_t] where that is >= 0 and alpha^{t-s} E[m|F_t] elsewhere.
UpdateRule discounted_rule(double alpha);
/// Accept: Essinf_t m + V_t; reject: Esssup_t m + V_t.
UpdateRule process_weak_rule(Direction direction);
/// Accept: Essinf_t m on {V_t >= 0}, -inf elsewhere; reject mirrored with +inf.
UpdateRule semiweak_rule(Direction direction);

struct BenchmarkOptions {
  /// Absolute width at which the shift bisection stops; 0 bisects to adjacent doubles.
  double tol = 0.0;
  int max_iter = 200;
  /// Exponential bracketing stops past this magnitude; beyond it the shift is unbounded.
  double shift_cap = 1e12;
};

/// Generators with the constant 0 appended unless some generator is already
/// constant, so that the shift-closed family contains 0.
/// Throws EmptyBenchmark for an empty list.
std::vector<RandomVariable> benchmark_family(std::vector<RandomVariable> generators);

/// Update rule induced by the benchmark family {Y + r : Y in generators, r real}.
/// Accept: per atom a of F_t, the supremum of phi_t(Y + r) over generators and
/// shifts with phi_s(Y + r) <= m on a, -inf when nothing is feasible.
/// Reject: the infimum of phi_t(Y + r) subject to phi_s(Y + r) >= m on a, +inf when empty.
UpdateRule benchmark_rule(std::vector<RandomVariable> generators, LMMeasure phi, Direction direction = Direction::Accept,
                          BenchmarkOptions options = {});

/// Result of the per-atom shift search used by the benchmark rule.
struct ShiftSearch {
  /// InfiniteShift: no finite shift is feasible but the infinite one is (-inf
  /// for accept, +inf for reject). Unbounded: every finite shift past the cap is feasible.
  enum class Outcome { Infeasible, InfiniteShift, Bounded, Unbounded } outcome = Outcome::Infeasible;
  double shift = 0.0;  // extreme feasible shift when Bounded
};

/// Accept: largest r with phi_s(Y + r) <= m on `atom` (of F_t).
/// Reject: smallest r with phi_s(Y + r) >= m on `atom`.
/// Exponential bracketing then bisection; throws InvalidArgument if phi_s is
/// seen to move against the shift.
ShiftSearch search_shift(const LMMeasure& phi, const RandomVariable& generator, int s, const RandomVariable& m,
                         const Atom& atom, Direction direction, const BenchmarkOptions& options);

/// Shifted generator Y + r.
RandomVariable shift_by(const RandomVariable& y, ExtReal r);

/// mu_{t,t+1}(mu_{t+1,t+2}(... mu_{s-1,s}(m, X) ..., X), X). Throws TimeOrder unless s > t.
RandomVariable compose_nested(const UpdateRule& one_step, int t, int s, const RandomVariable& m, const AdaptedProcess& x);

/// The rule as a whole-horizon rule built by nesting one-step applications.
UpdateRule nested_rule(const UpdateRule& one_step);

/// g(mu_{t,s}(g^{-1}(m), X)).
UpdateRule monotone_transform_rule(const MonotoneTransform& g, const UpdateRule& mu);

struct RuleWitness {
  std::string property;
  int t = 0;
  int s = 0;
  RandomVariable m;
  std::optional<RandomVariable> m_other;
  AdaptedProcess x;
  std::size_t outcome = 0;
  ExtReal lhs;
  ExtReal rhs;
};

struct ClassReport {
  bool local = true;
  bool monotone = true;
  bool x_invariant = true;
  bool sx_invariant = true;
  bool projective = true;
  RuleFlags declared;
  std::vector<RuleWitness> witnesses;      // first counterexample per failed property
  std::vector<std::string> contradictions;  // declared flags refuted by a witness
  std::size_t checked = 0;
  std::uint64_t seed = 0;
};

/// Property verdicts over randomized (m, X) pairs; locality is exhaustive over
/// atom unions of F_t on spaces with <= 12 outcomes.
ClassReport classify(const UpdateRule& rule, const SpacePtr& space, std::size_t sample_count, std::uint64_t seed,
                     double eps = 1e-9);

}  // namespace tclab
