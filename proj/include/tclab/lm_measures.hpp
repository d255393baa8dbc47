#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "tclab/prob_space.hpp"
#include "tclab/random.hpp"
#include "tclab/transforms.hpp"

namespace tclab {

struct MeasureFlags {
  bool monetary_utility = false;
  bool translation_invariant = false;
  bool independent_of_past = false;
};

/// Dynamic LM-measure: a family phi_t of local, monotone maps into
/// F_t-measurable extended-real variables.
///
/// Every argument is an adapted process; a Variables-kind measure reads only
/// the terminal row. Evaluators must be pure, which is what lets the checkers
/// run instances concurrently.
class LMMeasure {
 public:
  using Evaluator = std::function<RandomVariable(int t, const AdaptedProcess& x)>;

  LMMeasure(std::string name, Kind kind, Evaluator eval, MeasureFlags flags = {});

  RandomVariable operator()(int t, const AdaptedProcess& x) const;
  RandomVariable operator()(int t, const RandomVariable& x) const { return (*this)(t, AdaptedProcess::terminal(x)); }

  const std::string& name() const noexcept { return name_; }
  Kind kind() const noexcept { return kind_; }
  const MeasureFlags& flags() const noexcept { return flags_; }

 private:
  std::string name_;
  Kind kind_;
  Evaluator eval_;
  MeasureFlags flags_;
};

/// A family x -> phi^x indexed by x >= 0 (used by the index/risk converters).
struct RiskFamily {
  std::string name;
  Kind kind = Kind::Processes;
  std::function<RandomVariable(double x, int t, const AdaptedProcess& v)> eval;

  LMMeasure at(double x) const;
};

// Closed-form evaluations -------------------------------------------------

/// Dynamic Gain Loss Ratio: E[S|F_t] / E[S^-|F_t] where S = sum_{i>=t} V_i and
/// the numerator is positive; 0 otherwise; +inf when positive with no losses.
RandomVariable dglr(int t, const AdaptedProcess& v);

/// Worst-case density of D^alpha_t for S: mass 1/alpha loaded on the worst
/// outcomes of every atom. Throws BadAlpha unless 0 < alpha <= 1.
RandomVariable cvar_density(const RandomVariable& s, int t, double alpha);

/// rho^alpha_t(V) = essinf over D^alpha_t of E[Z S | F_t] (sorted-tail method).
RandomVariable cvar_rho(int t, const AdaptedProcess& v, double alpha);

/// Dynamic RAROC: +inf where rho >= 0, 0 where E[S|F_t] <= 0, E / (-rho) otherwise.
RandomVariable draroc(int t, const AdaptedProcess& v, double alpha);

/// phi^x_t(V) = E[S|F_t]/(1+x) + x rho^alpha_t(V)/(1+x); throws BadX unless x >= 0 finite.
RandomVariable raroc_risk_family(double x, int t, const AdaptedProcess& v, double alpha);

// Measure objects ------------------------------------------------------------

LMMeasure cond_expectation_measure();
LMMeasure dglr_measure();
LMMeasure draroc_measure(double alpha);
LMMeasure raroc_family_measure(double alpha, double x);
RiskFamily raroc_family(double alpha);

/// phi_t(X) = Esssup_t X on terminal payoffs.
LMMeasure esssup_measure();

/// Pointwise g o phi_t.
LMMeasure monotone_transform_measure(const MonotoneTransform& g, const LMMeasure& measure);

// Axiom checks ---------------------------------------------------------------

struct AxiomWitness {
  AdaptedProcess x;
  std::optional<AdaptedProcess> y;  // dominating argument for monotonicity
  int t = 0;
  std::uint64_t atom_mask = 0;      // locality: the atom union A of F_t
  std::size_t outcome = 0;
  ExtReal lhs;
  ExtReal rhs;
};

struct AxiomReport {
  bool local = true;
  bool monotone = true;
  std::optional<AxiomWitness> locality_witness;
  std::optional<AxiomWitness> monotonicity_witness;
  std::size_t checked = 0;
  std::uint64_t seed = 0;
};

/// Locality exhaustively over all atom unions (spaces with <= 12 outcomes) and
/// monotonicity over random dominated pairs.
AxiomReport check_lm_axioms(const LMMeasure& measure, const SpacePtr& space, std::size_t sample_count,
                            std::uint64_t seed, double eps = 1e-9);

}  // namespace tclab
