#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "eprlab/inequalities.hpp"
#include "eprlab/model.hpp"
#include "eprlab/numeric.hpp"

namespace epr {

inline constexpr std::size_t kMaxStrategyBits = 24;

/// One vertex of the local polytope: a fixed spin answer per declared
/// axis at each station.
struct DeterministicStrategy {
  std::vector<Spin> assign1;
  std::vector<Spin> assign2;

  /// Strategies are ordered lexicographically over (assign1, assign2)
  /// with "up" before "down"; `index` enumerates them in that order.
  static DeterministicStrategy from_index(std::uint64_t index, std::size_t n1,
                                          std::size_t n2);
  std::uint64_t to_index() const;

  /// The induced correlation at a setting pair is just the product of the
  /// two fixed signs.
  int correlation_sign(std::size_t axis1_index, std::size_t axis2_index) const {
    return spin_sign(assign1.at(axis1_index)) * spin_sign(assign2.at(axis2_index));
  }
};

/// Number of deterministic strategies for the given axis counts; throws
/// SizeError beyond the enumeration guard.
std::uint64_t strategy_count(std::size_t n1, std::size_t n2);

/// All strategies in lexicographic order.  Materialized; callers at the
/// guard boundary should loop over indices with from_index instead.
std::vector<DeterministicStrategy> enumerate_strategies(std::size_t n1, std::size_t n2);

/// Wraps one strategy as a lambda-free hidden-variable model over the
/// given declared axes (kernels are point masses), so the locality
/// checkers can run on it.
template <class S>
HiddenVariableModel<S> strategy_model(const DeterministicStrategy& strategy,
                                      const std::vector<Axis>& station1_axes,
                                      const std::vector<Axis>& station2_axes) {
  std::vector<JointDistribution<S>> kernels;
  kernels.reserve(station1_axes.size() * station2_axes.size());
  for (std::size_t i = 0; i < station1_axes.size(); ++i) {
    for (std::size_t j = 0; j < station2_axes.size(); ++j) {
      JointDistribution<S> k;
      k.at(strategy.assign1[i], strategy.assign2[j]) = ScalarTraits<S>::one();
      kernels.push_back(std::move(k));
    }
  }
  return HiddenVariableModel<S>(SampleSpace(1), Measure<S>({ScalarTraits<S>::one()}),
                                station1_axes, station2_axes, std::move(kernels));
}

template <class S>
struct PolytopeReport {
  std::uint64_t n_strategies = 0;
  S max_lhs = ScalarTraits<S>::zero();
  DeterministicStrategy argmax;
  S bound = ScalarTraits<S>::zero();
  bool bound_match = false;
};

/// Maximum of the fixed-pattern CHSH left-hand side over all 16 vertices
/// of the 2+2 scenario.  Ties resolve to the lexicographically first
/// strategy.
template <class S>
PolytopeReport<S> max_chsh_local() {
  PolytopeReport<S> report;
  report.n_strategies = strategy_count(2, 2);
  report.bound = S(ScalarTraits<S>::one() + ScalarTraits<S>::one());
  bool first = true;
  for (std::uint64_t idx = 0; idx < report.n_strategies; ++idx) {
    const DeterministicStrategy strategy = DeterministicStrategy::from_index(idx, 2, 2);
    const S e11 = S(ScalarTraits<S>::one() * strategy.correlation_sign(0, 0));
    const S e12 = S(ScalarTraits<S>::one() * strategy.correlation_sign(0, 1));
    const S e21 = S(ScalarTraits<S>::one() * strategy.correlation_sign(1, 0));
    const S e22 = S(ScalarTraits<S>::one() * strategy.correlation_sign(1, 1));
    const S lhs = chsh<S>(e11, e12, e21, e22).lhs;
    if (first || lhs > report.max_lhs) {
      report.max_lhs = lhs;
      report.argmax = strategy;
      first = false;
    }
  }
  report.bound_match = report.max_lhs == report.bound;
  return report;
}

/// Maximum of the three-axis up-up sum over the 8 anticorrelated vertices
/// (station 2 always answers opposite to station 1) of a 3-shared-axis
/// scenario.
template <class S>
PolytopeReport<S> max_three_axis_local() {
  PolytopeReport<S> report;
  report.n_strategies = 8;
  report.bound = ScalarTraits<S>::one();
  bool first = true;
  for (std::uint64_t idx = 0; idx < 8; ++idx) {
    DeterministicStrategy strategy = DeterministicStrategy::from_index(idx << 3, 3, 3);
    for (std::size_t x = 0; x < 3; ++x) strategy.assign2[x] = flip(strategy.assign1[x]);
    S lhs = ScalarTraits<S>::zero();
    constexpr std::size_t pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    for (const auto& pair : pairs) {
      if (strategy.assign1[pair[0]] == Spin::up && strategy.assign2[pair[1]] == Spin::up) {
        lhs += ScalarTraits<S>::one();
      }
    }
    if (first || lhs > report.max_lhs) {
      report.max_lhs = lhs;
      report.argmax = strategy;
      first = false;
    }
  }
  report.bound_match = report.max_lhs == report.bound;
  return report;
}

/// Parameters of the derivative-free search for the quantum CHSH maximum
/// over coplanar axes: full grid first, then coordinate refinement with a
/// halving step.
struct QuantumSearchParams {
  double grid_step_degrees = 5.0;
  int refine_sweeps = 30;
  double shrink = 0.5;
  double target = 2.828427;
  double target_slack = 1e-6;
  /// Restrict the search to equal settings at the two stations
  /// (nu = mu, nu' = mu'), the regime of perfect anticorrelation.
  bool lock_equal_settings = false;
};

struct QuantumSearchResult {
  std::array<Axis, 4> axes;  // mu, mu', nu, nu'
  std::array<double, 4> angles_degrees{};
  double lhs = 0.0;
  bool converged = false;  // reached target - target_slack
  std::uint64_t evaluations = 0;
};

/// Deterministic grid-then-refine maximization of the fixed-pattern CHSH
/// value of the singlet over four in-plane angles.  Never throws on a
/// miss: a result below target comes back with converged = false.
QuantumSearchResult max_chsh_quantum(const QuantumSearchParams& params = {});

}  // namespace epr
