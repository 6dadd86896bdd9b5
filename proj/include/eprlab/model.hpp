#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eprlab/numeric.hpp"
#include "eprlab/prob.hpp"

namespace epr {

inline constexpr double kAxisTolerance = 1e-9;

/// Detector axis: a unit 3-vector.  Axes are geometric data and stay in
/// double precision in both arithmetic modes.
struct Axis {
  std::array<double, 3> direction{0.0, 0.0, 1.0};

  Axis() = default;
  Axis(double x, double y, double z) : direction{x, y, z} {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (std::fabs(n - 1.0) > 1e-6) {
      throw PreconditionError("axis is not a unit vector");
    }
    // Renormalize so dot products of nominally equal axes stay within
    // kAxisTolerance of one.
    direction = {x / n, y / n, z / n};
  }

  /// Axis at `degrees` from the z direction, rotating inside the x-z plane.
  static Axis in_plane_degrees(double degrees) {
    const double rad = degrees * std::acos(-1.0) / 180.0;
    return Axis(std::sin(rad), 0.0, std::cos(rad));
  }

  double dot(const Axis& other) const {
    return direction[0] * other.direction[0] + direction[1] * other.direction[1] +
           direction[2] * other.direction[2];
  }

  /// Two axes count as the same setting when their directions agree up to
  /// kAxisTolerance.
  bool same_as(const Axis& other) const { return dot(other) >= 1.0 - kAxisTolerance; }
};

enum class Spin : int { up = 0, down = 1 };

inline Spin flip(Spin s) { return s == Spin::up ? Spin::down : Spin::up; }
inline int spin_sign(Spin s) { return s == Spin::up ? +1 : -1; }
inline const char* spin_name(Spin s) { return s == Spin::up ? "up" : "down"; }

/// One axis per station.
struct SettingPair {
  Axis station1;
  Axis station2;
};

/// Distribution of the pair of spins observed at the two stations, in
/// (up,up), (up,down), (down,up), (down,down) layout.
template <class S>
struct JointDistribution {
  std::array<std::array<S, 2>, 2> p{};

  JointDistribution()
      : p{{{ScalarTraits<S>::zero(), ScalarTraits<S>::zero()},
           {ScalarTraits<S>::zero(), ScalarTraits<S>::zero()}}} {}

  JointDistribution(S p_uu, S p_ud, S p_du, S p_dd)
      : p{{{std::move(p_uu), std::move(p_ud)}, {std::move(p_du), std::move(p_dd)}}} {
    validate();
  }

  const S& at(Spin a, Spin b) const {
    return p[static_cast<int>(a)][static_cast<int>(b)];
  }
  S& at(Spin a, Spin b) { return p[static_cast<int>(a)][static_cast<int>(b)]; }

  void validate() const {
    S sum = ScalarTraits<S>::zero();
    for (const auto& row : p) {
      for (const S& v : row) {
        if (v < ScalarTraits<S>::zero()) {
          throw PreconditionError("joint distribution entry is negative");
        }
        sum += v;
      }
    }
    if (!approx_eq(sum, ScalarTraits<S>::one(), ScalarTraits<S>::norm_tolerance())) {
      throw PreconditionError("joint distribution does not sum to one");
    }
  }
};

/// Marginal of a joint at one station: (P(up), P(down)).
template <class S>
std::array<S, 2> marginal(const JointDistribution<S>& j, int station) {
  if (station != 1 && station != 2) throw PreconditionError("station must be 1 or 2");
  std::array<S, 2> out{ScalarTraits<S>::zero(), ScalarTraits<S>::zero()};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      out[station == 1 ? a : b] += j.p[a][b];
    }
  }
  return out;
}

/// The enlarged probability space of one experimental configuration:
/// outcomes are (lambda, spin at 1, spin at 2) triples, and the three
/// partitions generate the preparation-stage and per-station sigma
/// algebras.
template <class S>
struct EnlargedSpace {
  SampleSpace space;
  Measure<S> measure;
  Partition source_cells;    // groups outcomes by lambda
  Partition station1_cells;  // groups outcomes by the spin at station 1
  Partition station2_cells;  // groups outcomes by the spin at station 2

  std::size_t index(std::size_t lambda, Spin a, Spin b) const {
    return lambda * 4 + static_cast<std::size_t>(a) * 2 + static_cast<std::size_t>(b);
  }

  /// Event {spin at the given station equals s}.
  Event station_event(int station, Spin s) const {
    std::vector<std::size_t> members;
    const std::size_t n_lambda = space.size() / 4;
    for (std::size_t l = 0; l < n_lambda; ++l) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const int local = station == 1 ? a : b;
          if (local == static_cast<int>(s)) {
            members.push_back(l * 4 + static_cast<std::size_t>(a) * 2 + b);
          }
        }
      }
    }
    return Event(std::move(members));
  }

  /// Lifts a set of lambda indices to the corresponding preparation-stage
  /// event on the enlarged space.
  Event source_event(const Event& lambdas) const {
    std::vector<std::size_t> members;
    for (std::size_t l : lambdas.members()) {
      for (std::size_t k = 0; k < 4; ++k) members.push_back(l * 4 + k);
    }
    return Event(std::move(members));
  }
};

/// Finite hidden-variable model of the two-station experiment: a prior
/// over source outcomes and, for every declared setting pair and lambda, a
/// response kernel over the joint spins.  Kernels may depend on both axes;
/// locality is a property to check, not a constraint of the container.
template <class S>
class HiddenVariableModel {
 public:
  HiddenVariableModel(SampleSpace lambda_space, Measure<S> prior,
                      std::vector<Axis> station1_axes, std::vector<Axis> station2_axes,
                      std::vector<JointDistribution<S>> kernels)
      : lambda_space_(std::move(lambda_space)),
        prior_(std::move(prior)),
        axes1_(std::move(station1_axes)),
        axes2_(std::move(station2_axes)),
        kernels_(std::move(kernels)) {
    if (prior_.size() != lambda_space_.size()) {
      throw DimensionError("prior does not match the lambda space");
    }
    if (axes1_.empty() || axes2_.empty()) {
      throw PreconditionError("each station needs at least one declared axis");
    }
    const std::size_t expected = axes1_.size() * axes2_.size() * lambda_space_.size();
    if (kernels_.size() != expected) {
      throw DimensionError("kernel table must cover every (axis1, axis2, lambda)");
    }
    for (const auto& k : kernels_) k.validate();
  }

  const SampleSpace& lambda_space() const { return lambda_space_; }
  std::size_t n_lambda() const { return lambda_space_.size(); }
  const Measure<S>& prior() const { return prior_; }
  const std::vector<Axis>& station1_axes() const { return axes1_; }
  const std::vector<Axis>& station2_axes() const { return axes2_; }

  const JointDistribution<S>& kernel(std::size_t axis1_index, std::size_t axis2_index,
                                     std::size_t lambda) const {
    if (axis1_index >= axes1_.size() || axis2_index >= axes2_.size() ||
        lambda >= lambda_space_.size()) {
      throw DimensionError("kernel index out of range");
    }
    return kernels_[(axis1_index * axes2_.size() + axis2_index) * lambda_space_.size() +
                    lambda];
  }

  std::optional<std::size_t> find_axis(int station, const Axis& axis) const {
    const auto& axes = station == 1 ? axes1_ : axes2_;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      if (axes[i].same_as(axis)) return i;
    }
    return std::nullopt;
  }

  std::size_t require_axis(int station, const Axis& axis) const {
    const auto found = find_axis(station, axis);
    if (!found) {
      throw MissingKernelError("axis is not declared at station " +
                               std::to_string(station));
    }
    return *found;
  }

  /// Axes declared at both stations, as (station1 index, station2 index)
  /// pairs in station-1 order.
  std::vector<std::pair<std::size_t, std::size_t>> shared_axes() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < axes1_.size(); ++i) {
      for (std::size_t j = 0; j < axes2_.size(); ++j) {
        if (axes1_[i].same_as(axes2_[j])) {
          out.emplace_back(i, j);
          break;
        }
      }
    }
    return out;
  }

 private:
  SampleSpace lambda_space_;
  Measure<S> prior_;
  std::vector<Axis> axes1_;
  std::vector<Axis> axes2_;
  std::vector<JointDistribution<S>> kernels_;  // [axis1][axis2][lambda], flattened
};

/// Builds the enlarged probability space of one setting pair: outcomes
/// (lambda, a, b) weighted by prior(lambda) * kernel(s, lambda)(a, b).
template <class S>
EnlargedSpace<S> enlarged_space(const HiddenVariableModel<S>& model,
                                const SettingPair& s) {
  const std::size_t i1 = model.require_axis(1, s.station1);
  const std::size_t i2 = model.require_axis(2, s.station2);
  const std::size_t n_lambda = model.n_lambda();
  const std::size_t n = n_lambda * 4;

  std::vector<S> weights;
  weights.reserve(n);
  for (std::size_t l = 0; l < n_lambda; ++l) {
    const JointDistribution<S>& k = model.kernel(i1, i2, l);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        weights.push_back(S(model.prior().weight(l) * k.p[a][b]));
      }
    }
  }

  std::vector<Event> source_cells;
  for (std::size_t l = 0; l < n_lambda; ++l) {
    source_cells.push_back(Event({l * 4, l * 4 + 1, l * 4 + 2, l * 4 + 3}));
  }
  std::vector<Event> s1_cells(2), s2_cells(2);
  {
    std::vector<std::vector<std::size_t>> by_a(2), by_b(2);
    for (std::size_t l = 0; l < n_lambda; ++l) {
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          by_a[a].push_back(l * 4 + a * 2 + b);
          by_b[b].push_back(l * 4 + a * 2 + b);
        }
      }
    }
    s1_cells[0] = Event(by_a[0]);
    s1_cells[1] = Event(by_a[1]);
    s2_cells[0] = Event(by_b[0]);
    s2_cells[1] = Event(by_b[1]);
  }

  return EnlargedSpace<S>{SampleSpace(n), Measure<S>(std::move(weights)),
                          Partition(n, std::move(source_cells)),
                          Partition(n, std::move(s1_cells)),
                          Partition(n, std::move(s2_cells))};
}

/// Distribution of the joint outcome under one setting pair: the prior
/// mixture of the per-lambda kernels.
template <class S>
JointDistribution<S> joint_distribution(const HiddenVariableModel<S>& model,
                                        const SettingPair& s) {
  const std::size_t i1 = model.require_axis(1, s.station1);
  const std::size_t i2 = model.require_axis(2, s.station2);
  JointDistribution<S> out;
  for (std::size_t l = 0; l < model.n_lambda(); ++l) {
    const JointDistribution<S>& k = model.kernel(i1, i2, l);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        out.p[a][b] += S(model.prior().weight(l) * k.p[a][b]);
      }
    }
  }
  return out;
}

/// True iff the model shows perfect anticorrelation at every listed axis:
/// with equal settings, all probability mass sits on opposite outcomes.
template <class S>
bool anticorrelation_check(const HiddenVariableModel<S>& model,
                           const std::vector<Axis>& axes,
                           const S& tol = ScalarTraits<S>::default_tolerance()) {
  for (const Axis& axis : axes) {
    const JointDistribution<S> j = joint_distribution(model, SettingPair{axis, axis});
    const S opposite = S(j.at(Spin::up, Spin::down) + j.at(Spin::down, Spin::up));
    if (!approx_eq(opposite, ScalarTraits<S>::one(), tol)) return false;
  }
  return true;
}

}  // namespace epr
