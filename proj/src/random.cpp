#include "tclab/random.hpp"

#include <algorithm>
#include <numeric>

namespace tclab {

const char* to_string(Kind kind) { return kind == Kind::Variables ? "variables" : "processes"; }

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

InstanceRng InstanceRng::stream(std::uint64_t seed, std::uint64_t index) {
  return InstanceRng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

ExtReal InstanceRng::value(const ValueMix& mix) {
  const double u = uniform(0.0, 1.0);
  if (u < mix.p_pos_inf) return ExtReal::pos_inf();
  if (u < mix.p_pos_inf + mix.p_neg_inf) return ExtReal::neg_inf();
  if (u < mix.p_pos_inf + mix.p_neg_inf + mix.p_zero) return ExtReal(0.0);
  return ExtReal(uniform(mix.lo, mix.hi));
}

RandomVariable random_measurable(const SpacePtr& space, int t, InstanceRng& rng, const ValueMix& mix) {
  std::vector<ExtReal> values(space->size());
  for (const Atom& atom : space->atoms(t)) {
    const ExtReal v = rng.value(mix);
    for (std::size_t w : atom) values[w] = v;
  }
  return RandomVariable(space, std::move(values));
}

AdaptedProcess random_process(const SpacePtr& space, InstanceRng& rng, const ValueMix& mix) {
  std::vector<RandomVariable> rows;
  for (int t = 0; t <= space->horizon(); ++t) rows.push_back(random_measurable(space, t, rng, mix));
  return AdaptedProcess(space, std::move(rows));
}

AdaptedProcess random_position(const SpacePtr& space, Kind kind, InstanceRng& rng, const ValueMix& mix) {
  if (kind == Kind::Processes) return random_process(space, rng, mix);
  return AdaptedProcess::terminal(random_measurable(space, space->horizon(), rng, mix));
}

RandomVariable random_below(const RandomVariable& x, int t, InstanceRng& rng) {
  const RandomVariable gap = random_measurable(x.space(), t, rng, ValueMix{0.0, 5.0, 0.3, 0.05, 0.0});
  return pointwise_add(x, pointwise_neg(gap));
}

AdaptedProcess random_below(const AdaptedProcess& v, InstanceRng& rng, Kind kind) {
  std::vector<RandomVariable> rows = v.rows();
  const int horizon = v.horizon();
  for (int t = 0; t <= horizon; ++t) {
    if (kind == Kind::Variables && t < horizon) continue;
    rows[static_cast<std::size_t>(t)] = random_below(rows[static_cast<std::size_t>(t)], t, rng);
  }
  return AdaptedProcess(v.space(), std::move(rows));
}

SpacePtr random_space(InstanceRng& rng, int max_outcomes, int max_horizon) {
  const int n = rng.integer(2, std::max(2, max_outcomes));
  const int horizon = rng.integer(1, std::max(1, max_horizon));
  std::vector<double> probs(static_cast<std::size_t>(n));
  for (double& p : probs) p = rng.uniform(0.05, 1.0);
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& p : probs) p /= total;
  // Absorb the rounding residue so the weights sum to 1 within a few ulps.
  probs.back() = 1.0 - std::accumulate(probs.begin(), probs.end() - 1, 0.0);

  std::vector<Partition> partitions;
  Atom all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::shuffle(all.begin(), all.end(), rng.engine());
  partitions.push_back({all});
  for (int t = 1; t <= horizon; ++t) {
    Partition next;
    for (const Atom& atom : partitions.back()) {
      if (t == horizon && rng.bernoulli(0.7)) {
        for (std::size_t w : atom) next.push_back({w});
        continue;
      }
      // Split into a random number of contiguous chunks of the shuffled atom.
      Atom shuffled = atom;
      std::shuffle(shuffled.begin(), shuffled.end(), rng.engine());
      const int pieces = rng.integer(1, std::min<int>(3, static_cast<int>(shuffled.size())));
      std::vector<std::size_t> cuts;
      for (int k = 1; k < pieces; ++k) cuts.push_back(static_cast<std::size_t>(rng.integer(1, static_cast<int>(shuffled.size()) - 1)));
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      std::size_t start = 0;
      for (std::size_t cut : cuts) {
        next.emplace_back(shuffled.begin() + static_cast<std::ptrdiff_t>(start), shuffled.begin() + static_cast<std::ptrdiff_t>(cut));
        start = cut;
      }
      next.emplace_back(shuffled.begin() + static_cast<std::ptrdiff_t>(start), shuffled.end());
    }
    partitions.push_back(std::move(next));
  }
  return FilteredSpace::build({}, std::move(probs), std::move(partitions));
}

}  // namespace tclab
