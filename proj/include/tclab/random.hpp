#pragma once

#include <cstdint>
#include <random>

#include "tclab/prob_space.hpp"

namespace tclab {

/// Whether a measure or rule acts on terminal payoffs or on dividend processes.
/// Terminal payoffs are carried as processes (0, ..., 0, X).
enum class Kind { Variables, Processes };

const char* to_string(Kind kind);

/// Mixed value distribution: finite uniform on [lo, hi], exact zeros and both
/// infinities, so that the extended-real conventions are exercised.
struct ValueMix {
  double lo = -10.0;
  double hi = 10.0;
  double p_zero = 0.1;
  double p_pos_inf = 0.04;
  double p_neg_inf = 0.04;

  static ValueMix finite() { return ValueMix{-10.0, 10.0, 0.1, 0.0, 0.0}; }
};

/// Deterministic random stream. `InstanceRng::stream(seed, i)` gives every
/// sample index its own stream, so sweeps may run in any order or in parallel.
class InstanceRng {
 public:
  explicit InstanceRng(std::uint64_t seed) : engine_(seed) {}
  static InstanceRng stream(std::uint64_t seed, std::uint64_t index);

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool bernoulli(double p) { return std::bernoulli_distribution(p)(engine_); }
  ExtReal value(const ValueMix& mix);
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Random F_t-measurable variable (constant on every atom of F_t).
RandomVariable random_measurable(const SpacePtr& space, int t, InstanceRng& rng, const ValueMix& mix = {});
AdaptedProcess random_process(const SpacePtr& space, InstanceRng& rng, const ValueMix& mix = {});
/// Terminal-only process for Kind::Variables, full process otherwise.
AdaptedProcess random_position(const SpacePtr& space, Kind kind, InstanceRng& rng, const ValueMix& mix = {});

/// x minus a nonnegative F_t-measurable perturbation (sometimes +inf), so the
/// result is <= x and still F_t-measurable when x is.
RandomVariable random_below(const RandomVariable& x, int t, InstanceRng& rng);
/// Same for processes: every row lowered by an adapted nonnegative amount.
AdaptedProcess random_below(const AdaptedProcess& v, InstanceRng& rng, Kind kind);

/// Random refining filtration on 2..max_outcomes outcomes with horizon 1..max_horizon.
SpacePtr random_space(InstanceRng& rng, int max_outcomes = 12, int max_horizon = 4);

}  // namespace tclab
