#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tclab/lm_measures.hpp"
#include "tclab/random.hpp"
#include "tclab/update_rules.hpp"

namespace tclab {

enum class Scope { OneStep, Full };
const char* to_string(Scope scope);

/// A concrete violation: at outcome `outcome` (in atom `atom` of F_t),
/// lhs >= rhs (accept) or lhs <= rhs (reject) fails beyond tolerance.
struct TcWitness {
  std::string condition;
  std::size_t instance = 0;
  AdaptedProcess x;
  int t = 0;
  int s = 0;
  std::optional<RandomVariable> m;  // threshold or benchmark involved, if any
  std::size_t outcome = 0;
  std::size_t atom = 0;
  ExtReal lhs;
  ExtReal rhs;
};

struct ConditionResult {
  std::string name;
  bool holds = true;
  bool evaluated = true;
};

struct Verdict {
  bool holds = true;
  std::optional<TcWitness> witness;
  std::size_t checked = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  Direction direction = Direction::Accept;
  std::vector<ConditionResult> conditions;
  std::size_t shrink_steps = 0;
};

struct CheckOptions {
  /// Space for random instances; null draws a fresh random space per instance.
  SpacePtr space;
  /// Checked first, in order, before the random instances.
  std::vector<AdaptedProcess> inputs;
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  double eps = 1e-9;
  bool parallel = true;
  bool shrink = true;
  /// Random thresholds tried per (instance, t, s) for the threshold forms.
  int thresholds = 3;
  ValueMix mix{};
  int max_outcomes = 12;
  int max_horizon = 4;
};

/// Instance i of a check: inputs first, then seeded random positions.
AdaptedProcess make_instance(const CheckOptions& options, Kind kind, std::size_t i);
std::size_t instance_count(const CheckOptions& options);

/// phi_t(X) >= mu_{t,s}(phi_s(X), X) (<= for reject) for t < s in scope. A
/// one-step rule under Full scope is applied by nested composition. The
/// threshold form (phi_s(X) >= m_s implies phi_t(X) >= mu_{t,s}(m_s, X)) is
/// evaluated on the same instances and must agree (EquivalenceBroken).
/// Throws KindMismatch when the rule is tied to the other kind.
Verdict check_mu_tc(const LMMeasure& phi, const UpdateRule& mu, Direction direction, Scope scope,
                    const CheckOptions& options);

/// Weak consistency for terminal payoffs. Evaluates conditions 1) to 3) of the
/// equivalence (and 4) for monetary utility measures) on every instance and
/// throws EquivalenceBroken if they disagree; the verdict follows condition 2).
Verdict check_weak_tc(const LMMeasure& phi, Direction direction, const CheckOptions& options);

/// Semi-weak consistency for processes, one step. Conditions 1) to 3) as above.
Verdict check_semiweak_tc(const LMMeasure& phi, Direction direction, const CheckOptions& options);

/// Benchmark form: on every atom a of F_t, phi_s(X) >= phi_s(Y) on a implies
/// phi_t(X) >= phi_t(Y) on a, for Y = generator + r over a shift grid plus the
/// bisection-refined boundary shift.
Verdict check_benchmark_tc(const LMMeasure& phi, const std::vector<RandomVariable>& generators, Direction direction,
                           const CheckOptions& options, const BenchmarkOptions& search = {});

/// If phi is mu-consistent on the instances then it is weakly consistent on
/// them. Throws NotProjective unless `classify` confirms mu is projective.
Verdict check_projective_implies_weak(const LMMeasure& phi, const UpdateRule& mu, Direction direction,
                                      const CheckOptions& options, std::size_t classify_samples = 20);

/// Replays the dGLR semi-weak acceptance argument on one process: on atoms of
/// F_t with V_t >= 0 and 0 < c = Essinf_t dGLR_{t+1}(V) < inf it checks
///   E[S_t|F_t] >= E[S_{t+1}|F_t] >= c E[E[S_{t+1}^-|F_{t+1}]|F_t] >= c E[S_t^-|F_t]
/// with S_u = sum_{i>=u} V_i. Returns the first broken link ("chain-1".."chain-3").
std::optional<TcWitness> dglr_chain_violation(const AdaptedProcess& v, double eps);

/// Reduces a witness process cell by cell (zeroing, then coarsening values) while
/// `still_fails` keeps reporting a violation. Returns the number of accepted steps.
std::size_t shrink_process(AdaptedProcess& x, const std::function<bool(const AdaptedProcess&)>& still_fails,
                           Kind kind);

/// Random local, monotone measure: per time a nonnegative mix of Essinf_t, E[.|F_t]
/// and Esssup_t of the payoff (tail sum for processes), sometimes shifted or
/// passed through a monotone transform. Monetary when neither happens.
LMMeasure random_lm_measure(Kind kind, std::uint64_t seed);

}  // namespace tclab
