#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tclab/extreal.hpp"

namespace tclab {

using Atom = std::vector<std::size_t>;
using Partition = std::vector<Atom>;

/// Finite filtered probability space (Omega, P, F_0 <= ... <= F_T).
///
/// Immutable after construction. Atoms of every partition are sorted
/// internally and ordered by their least outcome index.
class FilteredSpace {
 public:
  /// Validates and canonicalises. Throws NontrivialRoot, NonRefiningFiltration,
  /// BadProbabilities or BadPartition naming the offending time or weight.
  static std::shared_ptr<const FilteredSpace> build(std::vector<std::string> outcomes, std::vector<double> probs,
                                                    std::vector<Partition> partitions, double eps = 1e-9);

  std::size_t size() const noexcept { return probs_.size(); }
  int horizon() const noexcept { return static_cast<int>(partitions_.size()) - 1; }
  const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
  double prob(std::size_t w) const { return probs_.at(w); }
  std::span<const double> probs() const noexcept { return probs_; }

  const Partition& atoms(int t) const;
  /// Index into atoms(t) of the atom holding outcome w.
  std::size_t atom_of(int t, std::size_t w) const;
  double atom_prob(int t, std::size_t atom) const;

  /// Throws TimeOutOfRange unless 0 <= t <= T.
  void check_time(int t) const;

 private:
  FilteredSpace() = default;

  std::vector<std::string> outcomes_;
  std::vector<double> probs_;
  std::vector<Partition> partitions_;
  std::vector<std::vector<std::size_t>> atom_index_;  // [t][w]
  std::vector<std::vector<double>> atom_prob_;        // [t][atom]
};

using SpacePtr = std::shared_ptr<const FilteredSpace>;

/// ExtReal-valued function on the outcomes of a space.
class RandomVariable {
 public:
  RandomVariable(SpacePtr space, std::vector<ExtReal> values);
  static RandomVariable constant(SpacePtr space, ExtReal c);
  static RandomVariable from_doubles(SpacePtr space, const std::vector<double>& values);

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return values_.size(); }
  ExtReal operator[](std::size_t w) const { return values_[w]; }
  ExtReal& operator[](std::size_t w) { return values_[w]; }
  const std::vector<ExtReal>& values() const noexcept { return values_; }

  /// Value on an atom of F_t; requires measurability on that atom.
  ExtReal on_atom(int t, std::size_t atom) const { return values_[space_->atoms(t)[atom].front()]; }

  friend bool operator==(const RandomVariable& a, const RandomVariable& b) {
    return a.space_ == b.space_ && a.values_ == b.values_;
  }

 private:
  SpacePtr space_;
  std::vector<ExtReal> values_;
};

/// Adapted process V_0..V_T with V_t measurable w.r.t. F_t.
class AdaptedProcess {
 public:
  /// Throws NotMeasurable naming the row when a row is not F_t-measurable.
  AdaptedProcess(SpacePtr space, std::vector<RandomVariable> rows);
  static AdaptedProcess zero(SpacePtr space);
  /// The process (0, ..., 0, X): how a terminal payoff is embedded.
  static AdaptedProcess terminal(const RandomVariable& x);

  const SpacePtr& space() const noexcept { return space_; }
  const RandomVariable& row(int t) const { return rows_.at(static_cast<std::size_t>(t)); }
  const std::vector<RandomVariable>& rows() const noexcept { return rows_; }
  int horizon() const noexcept { return static_cast<int>(rows_.size()) - 1; }

  /// Sum_{i=t}^{T} V_i with the extended-real conventions.
  RandomVariable tail_sum(int t) const;

  friend bool operator==(const AdaptedProcess& a, const AdaptedProcess& b) {
    return a.space_ == b.space_ && a.rows_ == b.rows_;
  }

 private:
  SpacePtr space_;
  std::vector<RandomVariable> rows_;
};

bool is_measurable(const RandomVariable& x, int t);

/// m ._t V: rows before t unchanged, rows from t on multiplied by m.
/// Throws NotMeasurable unless m is F_t-measurable.
AdaptedProcess mult_t(const RandomVariable& m, const AdaptedProcess& v, int t);

/// Pointwise operations used throughout.
RandomVariable pointwise_add(const RandomVariable& a, const RandomVariable& b);
RandomVariable pointwise_mul(const RandomVariable& a, const RandomVariable& b);
RandomVariable pointwise_neg(const RandomVariable& a);
RandomVariable pointwise_min(const RandomVariable& a, const RandomVariable& b);

/// Indicator of a union of atoms of F_t, given as a bitmask over atoms(t).
RandomVariable atom_union_indicator(const SpacePtr& space, int t, std::uint64_t mask);

/// Throws SpaceMismatch if the two objects live on different spaces.
void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* what);

/// Canonical 4-outcome fixture: uniform weights, F_1 = {{0,1},{2,3}}, F_2 discrete.
SpacePtr make_s4();

}  // namespace tclab
