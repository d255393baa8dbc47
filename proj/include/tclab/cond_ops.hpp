#pragma once

#include <span>

#include "tclab/prob_space.hpp"

namespace tclab {

/// Generalised conditional expectation E[X|F_t] = E[X^+|F_t] - E[X^-|F_t],
/// each part the probability-weighted atom average, combined with inf - inf = -inf.
RandomVariable cond_expect(const RandomVariable& x, int t);

/// Conditional essential infimum; on a finite space the per-atom minimum.
RandomVariable cond_essinf(const RandomVariable& x, int t);
/// Esssup_t X = -Essinf_t(-X), the per-atom maximum.
RandomVariable cond_esssup(const RandomVariable& x, int t);

/// Pointwise infimum of a nonempty family on one space.
RandomVariable family_essinf(std::span<const RandomVariable> xs);
RandomVariable family_esssup(std::span<const RandomVariable> xs);

/// Conditional upper alpha-quantile: per atom, the supremum of thresholds y
/// with P(m <= y | atom) <= alpha. Throws BadAlpha unless 0 < alpha < 1.
RandomVariable cond_upper_quantile(const RandomVariable& m, int t, double alpha);

/// Z_alpha = 1{m <= q+} / E[1{m <= q+} | F_t], zero on atoms with no mass.
RandomVariable worst_case_density(const RandomVariable& m, int t, double alpha);

}  // namespace tclab
