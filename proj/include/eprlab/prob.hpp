#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eprlab/numeric.hpp"

namespace epr {

/// Finite outcome set.  Outcomes are the indices 0..size-1; labels are
/// optional display names.
class SampleSpace {
 public:
  explicit SampleSpace(std::size_t size, std::vector<std::string> labels = {})
      : size_(size), labels_(std::move(labels)) {
    if (size_ == 0) throw DimensionError("sample space must have at least one outcome");
    if (!labels_.empty()) {
      if (labels_.size() != size_) {
        throw DimensionError("label count does not match space size");
      }
      std::set<std::string> seen(labels_.begin(), labels_.end());
      if (seen.size() != labels_.size()) {
        throw PreconditionError("outcome labels must be pairwise distinct");
      }
    }
  }

  std::size_t size() const { return size_; }
  bool has_labels() const { return !labels_.empty(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

 private:
  std::size_t size_;
  std::vector<std::string> labels_;
};

/// A subset of outcomes, stored as a sorted index set.  The empty set and
/// the full set are both valid events.
class Event {
 public:
  Event() = default;
  Event(std::initializer_list<std::size_t> members)
      : Event(std::vector<std::size_t>(members)) {}
  explicit Event(std::vector<std::size_t> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  static Event full(std::size_t space_size) {
    std::vector<std::size_t> all(space_size);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return Event(std::move(all));
  }

  const std::vector<std::size_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(std::size_t i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
  }
  std::size_t max_index() const { return members_.empty() ? 0 : members_.back(); }

  Event intersect(const Event& other) const {
    std::vector<std::size_t> out;
    std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                          other.members_.end(), std::back_inserter(out));
    return Event(std::move(out));
  }

  Event unite(const Event& other) const {
    std::vector<std::size_t> out;
    std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                   other.members_.end(), std::back_inserter(out));
    return Event(std::move(out));
  }

  Event complement(std::size_t space_size) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < space_size; ++i) {
      if (!contains(i)) out.push_back(i);
    }
    return Event(std::move(out));
  }

  bool disjoint_from(const Event& other) const { return intersect(other).empty(); }

  bool operator==(const Event& other) const { return members_ == other.members_; }

 private:
  std::vector<std::size_t> members_;
};

/// Probability measure on a finite space: one nonnegative weight per
/// outcome, summing to one within the mode's normalization slack.
template <class S>
class Measure {
 public:
  explicit Measure(std::vector<S> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw DimensionError("measure needs at least one weight");
    S sum = ScalarTraits<S>::zero();
    for (const S& w : weights_) {
      if (w < ScalarTraits<S>::zero()) {
        throw PreconditionError("measure weight is negative");
      }
      sum += w;
    }
    if (!approx_eq(sum, ScalarTraits<S>::one(), ScalarTraits<S>::norm_tolerance())) {
      throw PreconditionError("measure weights do not sum to one");
    }
  }

  std::size_t size() const { return weights_.size(); }
  const S& weight(std::size_t i) const {
    if (i >= weights_.size()) throw DimensionError("outcome index out of range");
    return weights_[i];
  }
  const std::vector<S>& weights() const { return weights_; }

 private:
  std::vector<S> weights_;
};

/// Disjoint cover of the space; stands in for the sub-sigma-algebra it
/// generates (on a finite space every sub-sigma-algebra arises this way).
class Partition {
 public:
  Partition(std::size_t space_size, std::vector<Event> cells)
      : space_size_(space_size), cells_(std::move(cells)),
        cell_of_(space_size, kNoCell) {
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      if (cells_[c].empty()) throw PreconditionError("partition cell is empty");
      for (std::size_t i : cells_[c].members()) {
        if (i >= space_size_) throw DimensionError("partition cell index out of range");
        if (cell_of_[i] != kNoCell) throw PreconditionError("partition cells overlap");
        cell_of_[i] = c;
      }
    }
    for (std::size_t i = 0; i < space_size_; ++i) {
      if (cell_of_[i] == kNoCell) {
        throw PreconditionError("partition does not cover the space");
      }
    }
  }

  /// Single-cell partition: the trivial sigma algebra.
  static Partition trivial(std::size_t space_size) {
    return Partition(space_size, {Event::full(space_size)});
  }

  /// All-singletons partition: the full power set.
  static Partition discrete(std::size_t space_size) {
    std::vector<Event> cells;
    cells.reserve(space_size);
    for (std::size_t i = 0; i < space_size; ++i) cells.push_back(Event{i});
    return Partition(space_size, std::move(cells));
  }

  std::size_t space_size() const { return space_size_; }
  std::size_t cell_count() const { return cells_.size(); }
  const Event& cell(std::size_t c) const { return cells_.at(c); }
  const std::vector<Event>& cells() const { return cells_; }
  std::size_t cell_index_of(std::size_t outcome) const {
    if (outcome >= space_size_) throw DimensionError("outcome index out of range");
    return cell_of_[outcome];
  }

  /// True iff the event is a union of whole cells.
  bool measurable(const Event& e) const {
    for (std::size_t i : e.members()) {
      if (i >= space_size_) throw DimensionError("event index out of range");
    }
    for (const Event& c : cells_) {
      const Event common = c.intersect(e);
      if (!common.empty() && common.size() != c.size()) return false;
    }
    return true;
  }

 private:
  static constexpr std::size_t kNoCell = static_cast<std::size_t>(-1);
  std::size_t space_size_;
  std::vector<Event> cells_;
  std::vector<std::size_t> cell_of_;
};

/// A random variable that is constant on every cell of a partition.
template <class S>
class MeasurableFunction {
 public:
  MeasurableFunction(std::vector<S> values, Partition constant_on)
      : values_(std::move(values)), constant_on_(std::move(constant_on)) {
    if (values_.size() != constant_on_.space_size()) {
      throw DimensionError("value vector does not match space size");
    }
    for (const Event& cell : constant_on_.cells()) {
      const S& v0 = values_[cell.members().front()];
      for (std::size_t i : cell.members()) {
        if (!(values_[i] == v0)) {
          throw PreconditionError("function is not constant on a cell");
        }
      }
    }
  }

  std::size_t size() const { return values_.size(); }
  const S& value(std::size_t i) const {
    if (i >= values_.size()) throw DimensionError("outcome index out of range");
    return values_[i];
  }
  const std::vector<S>& values() const { return values_; }
  const Partition& constant_on() const { return constant_on_; }

  /// Value on a whole cell (all outcomes agree by construction).
  const S& cell_value(std::size_t cell_index) const {
    return values_[constant_on_.cell(cell_index).members().front()];
  }

 private:
  std::vector<S> values_;
  Partition constant_on_;
};

namespace detail {

template <class S>
void require_event_in_space(const Measure<S>& m, const Event& a) {
  if (!a.empty() && a.max_index() >= m.size()) {
    throw DimensionError("event index out of range for this measure");
  }
}

}  // namespace detail

/// P(a) = sum of weights over the members of a.
template <class S>
S probability(const Measure<S>& m, const Event& a) {
  detail::require_event_in_space(m, a);
  S sum = ScalarTraits<S>::zero();
  for (std::size_t i : a.members()) sum += m.weight(i);
  return sum;
}

/// Conditional probability of `a` given the sigma algebra generated by
/// `part`, as a function on outcomes: P(a ∩ C)/P(C) on each cell C with
/// positive probability, 0 on null cells by convention.
template <class S>
MeasurableFunction<S> conditional_probability(const Measure<S>& m, const Event& a,
                                              const Partition& part) {
  detail::require_event_in_space(m, a);
  if (part.space_size() != m.size()) {
    throw DimensionError("partition does not match the measure's space");
  }
  std::vector<S> values(m.size(), ScalarTraits<S>::zero());
  for (const Event& cell : part.cells()) {
    const S p_cell = probability(m, cell);
    if (p_cell > ScalarTraits<S>::zero()) {
      const S ratio = S(probability(m, a.intersect(cell)) / p_cell);
      for (std::size_t i : cell.members()) values[i] = ratio;
    }
  }
  return MeasurableFunction<S>(std::move(values), part);
}

/// EX[f] = sum over outcomes of f * weight.
template <class S>
S expectation(const Measure<S>& m, const MeasurableFunction<S>& f) {
  if (f.size() != m.size()) {
    throw DimensionError("function does not match the measure's space");
  }
  S sum = ScalarTraits<S>::zero();
  for (std::size_t i = 0; i < m.size(); ++i) sum += S(f.value(i) * m.weight(i));
  return sum;
}

/// Checks countable (here: finite) additivity of conditional probability:
/// the conditional probability of the union of pairwise disjoint events
/// must equal the pointwise sum of their conditional probabilities.
template <class S>
bool countable_additivity_check(const Measure<S>& m, const std::vector<Event>& parts,
                                const Partition& partn,
                                const S& tol = ScalarTraits<S>::default_tolerance()) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      if (!parts[i].disjoint_from(parts[j])) {
        throw PreconditionError("events are not pairwise disjoint");
      }
    }
  }
  Event all;
  for (const Event& e : parts) all = all.unite(e);
  const MeasurableFunction<S> lhs = conditional_probability(m, all, partn);
  std::vector<S> rhs(m.size(), ScalarTraits<S>::zero());
  for (const Event& e : parts) {
    const MeasurableFunction<S> f = conditional_probability(m, e, partn);
    for (std::size_t i = 0; i < m.size(); ++i) rhs[i] += f.value(i);
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!approx_eq(lhs.value(i), rhs[i], tol)) return false;
  }
  return true;
}

/// Checks the localization identity: conditioning a ∩ E on the partition
/// reproduces the conditional probability of a inside E and vanishes
/// outside, for any E that is a union of cells.
template <class S>
bool intersection_localization_check(const Measure<S>& m, const Event& a,
                                     const Event& cell_event, const Partition& part,
                                     const S& tol = ScalarTraits<S>::default_tolerance()) {
  if (!part.measurable(cell_event)) {
    throw PreconditionError("cell_event is not a union of partition cells");
  }
  const MeasurableFunction<S> restricted =
      conditional_probability(m, a.intersect(cell_event), part);
  const MeasurableFunction<S> plain = conditional_probability(m, a, part);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const S expected = cell_event.contains(i) ? plain.value(i) : ScalarTraits<S>::zero();
    if (!approx_eq(restricted.value(i), expected, tol)) return false;
  }
  return true;
}

/// Event equivalence: P(a ∩ b) = P(a) = P(b).  Equivalent events co-occur
/// almost surely.
template <class S>
bool events_equivalent(const Measure<S>& m, const Event& a, const Event& b,
                       const S& tol = ScalarTraits<S>::default_tolerance()) {
  const S p_ab = probability(m, a.intersect(b));
  const S p_a = probability(m, a);
  const S p_b = probability(m, b);
  return approx_eq(p_ab, p_a, tol) && approx_eq(p_ab, p_b, tol);
}

}  // namespace epr
