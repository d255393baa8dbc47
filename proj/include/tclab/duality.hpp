#pragma once

#include <cstdint>
#include <vector>

#include "tclab/consistency.hpp"
#include "tclab/lm_measures.hpp"
#include "tclab/prob_space.hpp"

namespace tclab {

/// P_t = {Z >= 0, E[Z|F_t] = 1}; D_alpha = {0 <= Z <= 1/alpha, E[Z|F_t] = 1}.
enum class ScenarioSet { P, DAlpha };

/// Extreme points of the admissible densities restricted to one atom of F_t,
/// as values on the atom's outcomes (in the atom's order). Throws BadAlpha for
/// D_alpha unless 0 < alpha <= 1.
std::vector<std::vector<double>> atom_vertices(const FilteredSpace& space, int t, std::size_t atom, ScenarioSet set,
                                               double alpha = 1.0);

/// Extreme points of the whole product polytope (one vertex per atom, pasted).
/// Throws InvalidArgument past `limit` vertices.
std::vector<RandomVariable> scenario_vertices(const SpacePtr& space, int t, ScenarioSet set, double alpha = 1.0,
                                              std::size_t limit = 100000);

/// essinf over P_t of E[Z m|F_t] by vertex enumeration.
RandomVariable dual_essinf(const RandomVariable& m, int t);
/// esssup over P_t of E[Z m|F_t].
RandomVariable dual_esssup(const RandomVariable& m, int t);

/// essinf over D_alpha of E[Z S|F_t], S = sum_{i>=t} V_i, by vertex enumeration.
RandomVariable lp_cvar_rho(int t, const AdaptedProcess& v, double alpha);

/// essinf over B^x = {1/(1+x) + x/(1+x) Z1 : Z1 in D_alpha} of E[Z S|F_t].
RandomVariable lp_raroc_family(double x, int t, const AdaptedProcess& v, double alpha);

/// phi_t(X) >= essinf_{Z in P_t} E[Z phi_s(X)|F_t] for all t < s, on terminal payoffs.
Verdict robust_weak_check(const LMMeasure& phi, const CheckOptions& options);

struct ConverterOptions {
  double x_max = 1e6;
  double c_lo = -1e6;
  double c_hi = 1e6;
  double tol = 1e-8;
  int max_iter = 200;
  double eps = 1e-9;
  /// Throw BracketExhausted instead of returning an infinite end of the c search.
  bool strict_bracket = false;
  /// Randomized translation-invariance / independence-of-past probes.
  std::size_t probes = 8;
  std::uint64_t seed = 1;
};

/// Per atom: sup{x >= 0 : phi^x_t(V) >= 0} by bisection; 0 when phi^0 < 0 and
/// +inf when phi^{x_max} >= 0. Throws NotDecreasingFamily when a grid check
/// finds phi^x increasing in x on this (t, V).
RandomVariable index_from_risk_family(const RiskFamily& family, int t, const AdaptedProcess& v,
                                      const ConverterOptions& options = {});

/// Per atom: inf{c : alpha_t(V - c 1_{t}) <= x} by bisection within [c_lo, c_hi];
/// -inf / +inf when the bracket is exhausted below / above. Throws
/// NotTranslationInvariant unless the index is flagged translation invariant
/// and independent of the past and randomized probes agree.
RandomVariable risk_family_from_index(const LMMeasure& index, double x, int t, const AdaptedProcess& v,
                                      const ConverterOptions& options = {});

/// The index built from a risk family, as a measure.
LMMeasure index_measure(const RiskFamily& family, const ConverterOptions& options = {});
/// The family x -> risk_family_from_index(index, x).
RiskFamily risk_family_of_index(const LMMeasure& index, const ConverterOptions& options = {});

/// Checks the hypotheses of the converter propositions on the instances, then
/// their conclusions: family weakly consistent at every tested x => index
/// semi-weakly consistent; index semi-weakly consistent => every tested phi^x
/// weakly consistent. Throws HypothesisFailed naming the failing hypothesis.
Verdict converter_consistency_transfer(const RiskFamily& family, Direction direction, const CheckOptions& options,
                                       const std::vector<double>& xs = {0.5, 1.0, 2.0},
                                       const ConverterOptions& converter = {});
Verdict converter_consistency_transfer(const LMMeasure& index, Direction direction, const CheckOptions& options,
                                       const std::vector<double>& xs = {0.5, 1.0, 2.0},
                                       const ConverterOptions& converter = {});

}  // namespace tclab
