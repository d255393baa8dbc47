#include "tclab/prob_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tclab/errors.hpp"

namespace tclab {

SpacePtr FilteredSpace::build(std::vector<std::string> outcomes, std::vector<double> probs,
                              std::vector<Partition> partitions, double eps) {
  const std::size_t n = probs.size();
  if (n == 0) throw Error(ErrorCode::BadProbabilities, "space has no outcomes");
  if (outcomes.empty()) {
    for (std::size_t w = 0; w < n; ++w) outcomes.push_back("w" + std::to_string(w));
  }
  if (outcomes.size() != n) {
    std::ostringstream os;
    os << outcomes.size() << " outcome labels but " << n << " probabilities";
    throw Error(ErrorCode::BadProbabilities, os.str());
  }
  double total = 0.0;
  for (std::size_t w = 0; w < n; ++w) {
    if (!(probs[w] > 0.0) || !std::isfinite(probs[w])) {
      std::ostringstream os;
      os << "probs[" << w << "] = " << probs[w] << " is not strictly positive";
      throw Error(ErrorCode::BadProbabilities, os.str());
    }
    total += probs[w];
  }
  if (std::fabs(total - 1.0) > eps) {
    std::ostringstream os;
    os.precision(17);
    os << "probabilities sum to " << total << ", not 1";
    throw Error(ErrorCode::BadProbabilities, os.str());
  }
  if (partitions.size() < 2) throw Error(ErrorCode::BadPartition, "need partitions for t = 0..T with T >= 1");

  auto space = std::shared_ptr<FilteredSpace>(new FilteredSpace());
  space->atom_index_.assign(partitions.size(), std::vector<std::size_t>(n));
  for (std::size_t t = 0; t < partitions.size(); ++t) {
    Partition& part = partitions[t];
    std::vector<int> seen(n, 0);
    for (Atom& atom : part) {
      if (atom.empty()) throw Error(ErrorCode::BadPartition, "empty atom at t=" + std::to_string(t));
      std::sort(atom.begin(), atom.end());
      for (std::size_t w : atom) {
        if (w >= n) {
          throw Error(ErrorCode::BadPartition,
                      "outcome index " + std::to_string(w) + " out of range at t=" + std::to_string(t));
        }
        ++seen[w];
      }
    }
    for (std::size_t w = 0; w < n; ++w) {
      if (seen[w] != 1) {
        throw Error(ErrorCode::BadPartition, "outcome " + std::to_string(w) + " covered " +
                                                 std::to_string(seen[w]) + " times at t=" + std::to_string(t));
      }
    }
    std::sort(part.begin(), part.end(), [](const Atom& a, const Atom& b) { return a.front() < b.front(); });
    for (std::size_t k = 0; k < part.size(); ++k)
      for (std::size_t w : part[k]) space->atom_index_[t][w] = k;
  }
  if (partitions[0].size() != 1) {
    throw Error(ErrorCode::NontrivialRoot,
                "partitions[0] has " + std::to_string(partitions[0].size()) + " atoms, expected 1");
  }
  for (std::size_t t = 0; t + 1 < partitions.size(); ++t) {
    for (const Atom& atom : partitions[t + 1]) {
      const std::size_t parent = space->atom_index_[t][atom.front()];
      for (std::size_t w : atom) {
        if (space->atom_index_[t][w] != parent) {
          throw Error(ErrorCode::NonRefiningFiltration,
                      "partitions[" + std::to_string(t + 1) + "] does not refine partitions[" + std::to_string(t) +
                          "] (outcome " + std::to_string(w) + ")");
        }
      }
    }
  }

  space->outcomes_ = std::move(outcomes);
  space->probs_ = std::move(probs);
  space->partitions_ = std::move(partitions);
  for (const Partition& part : space->partitions_) {
    std::vector<double> mass;
    for (const Atom& atom : part) {
      double p = 0.0;
      for (std::size_t w : atom) p += space->probs_[w];
      mass.push_back(p);
    }
    space->atom_prob_.push_back(std::move(mass));
  }
  return space;
}

void FilteredSpace::check_time(int t) const {
  if (t < 0 || t > horizon()) {
    throw Error(ErrorCode::TimeOutOfRange,
                "t=" + std::to_string(t) + " outside 0.." + std::to_string(horizon()));
  }
}

const Partition& FilteredSpace::atoms(int t) const {
  check_time(t);
  return partitions_[static_cast<std::size_t>(t)];
}

std::size_t FilteredSpace::atom_of(int t, std::size_t w) const {
  check_time(t);
  return atom_index_[static_cast<std::size_t>(t)].at(w);
}

double FilteredSpace::atom_prob(int t, std::size_t atom) const {
  check_time(t);
  return atom_prob_[static_cast<std::size_t>(t)].at(atom);
}

void require_same_space(const SpacePtr& a, const SpacePtr& b, const char* what) {
  if (a != b) throw Error(ErrorCode::SpaceMismatch, std::string(what) + " lives on a different space");
}

RandomVariable::RandomVariable(SpacePtr space, std::vector<ExtReal> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw Error(ErrorCode::InvalidArgument, "random variable without a space");
  if (values_.size() != space_->size()) {
    throw Error(ErrorCode::SpaceMismatch, "random variable has " + std::to_string(values_.size()) +
                                              " values for " + std::to_string(space_->size()) + " outcomes");
  }
}

RandomVariable RandomVariable::constant(SpacePtr space, ExtReal c) {
  const std::size_t n = space->size();
  return RandomVariable(std::move(space), std::vector<ExtReal>(n, c));
}

RandomVariable RandomVariable::from_doubles(SpacePtr space, const std::vector<double>& values) {
  return RandomVariable(std::move(space), std::vector<ExtReal>(values.begin(), values.end()));
}

bool is_measurable(const RandomVariable& x, int t) {
  for (const Atom& atom : x.space()->atoms(t)) {
    for (std::size_t w : atom)
      if (x[w] != x[atom.front()]) return false;
  }
  return true;
}

AdaptedProcess::AdaptedProcess(SpacePtr space, std::vector<RandomVariable> rows)
    : space_(std::move(space)), rows_(std::move(rows)) {
  if (static_cast<int>(rows_.size()) != space_->horizon() + 1) {
    throw Error(ErrorCode::AdaptednessError, "process has " + std::to_string(rows_.size()) + " rows, expected " +
                                                 std::to_string(space_->horizon() + 1));
  }
  for (std::size_t t = 0; t < rows_.size(); ++t) {
    require_same_space(space_, rows_[t].space(), "process row");
    if (!is_measurable(rows_[t], static_cast<int>(t))) {
      throw Error(ErrorCode::NotMeasurable, "process row " + std::to_string(t) + " is not F_" +
                                                std::to_string(t) + "-measurable");
    }
  }
}

AdaptedProcess AdaptedProcess::zero(SpacePtr space) {
  std::vector<RandomVariable> rows(static_cast<std::size_t>(space->horizon() + 1),
                                   RandomVariable::constant(space, ExtReal(0.0)));
  return AdaptedProcess(std::move(space), std::move(rows));
}

AdaptedProcess AdaptedProcess::terminal(const RandomVariable& x) {
  const SpacePtr& space = x.space();
  std::vector<RandomVariable> rows(static_cast<std::size_t>(space->horizon()),
                                   RandomVariable::constant(space, ExtReal(0.0)));
  rows.push_back(x);
  return AdaptedProcess(space, std::move(rows));
}

RandomVariable AdaptedProcess::tail_sum(int t) const {
  space_->check_time(t);
  RandomVariable acc = rows_[static_cast<std::size_t>(t)];
  for (std::size_t i = static_cast<std::size_t>(t) + 1; i < rows_.size(); ++i) acc = pointwise_add(acc, rows_[i]);
  return acc;
}

AdaptedProcess mult_t(const RandomVariable& m, const AdaptedProcess& v, int t) {
  require_same_space(m.space(), v.space(), "multiplier");
  if (!is_measurable(m, t))
    throw Error(ErrorCode::NotMeasurable, "multiplier is not F_" + std::to_string(t) + "-measurable");
  std::vector<RandomVariable> rows = v.rows();
  for (std::size_t i = static_cast<std::size_t>(t); i < rows.size(); ++i) rows[i] = pointwise_mul(m, rows[i]);
  return AdaptedProcess(v.space(), std::move(rows));
}

namespace {

template <class Op>
RandomVariable zip(const RandomVariable& a, const RandomVariable& b, Op op) {
  require_same_space(a.space(), b.space(), "operand");
  std::vector<ExtReal> out(a.size());
  for (std::size_t w = 0; w < a.size(); ++w) out[w] = op(a[w], b[w]);
  return RandomVariable(a.space(), std::move(out));
}

}  // namespace

RandomVariable pointwise_add(const RandomVariable& a, const RandomVariable& b) { return zip(a, b, add); }
RandomVariable pointwise_mul(const RandomVariable& a, const RandomVariable& b) { return zip(a, b, mul); }
RandomVariable pointwise_min(const RandomVariable& a, const RandomVariable& b) {
  return zip(a, b, [](ExtReal x, ExtReal y) { return min(x, y); });
}

RandomVariable pointwise_neg(const RandomVariable& a) {
  std::vector<ExtReal> out(a.size());
  for (std::size_t w = 0; w < a.size(); ++w) out[w] = neg(a[w]);
  return RandomVariable(a.space(), std::move(out));
}

RandomVariable atom_union_indicator(const SpacePtr& space, int t, std::uint64_t mask) {
  std::vector<ExtReal> out(space->size(), ExtReal(0.0));
  const Partition& part = space->atoms(t);
  for (std::size_t k = 0; k < part.size(); ++k) {
    if ((mask >> k) & 1U)
      for (std::size_t w : part[k]) out[w] = ExtReal(1.0);
  }
  return RandomVariable(space, std::move(out));
}

SpacePtr make_s4() {
  return FilteredSpace::build({"w1", "w2", "w3", "w4"}, {0.25, 0.25, 0.25, 0.25},
                              {{{0, 1, 2, 3}}, {{0, 1}, {2, 3}}, {{0}, {1}, {2}, {3}}});
}

}  // namespace tclab
