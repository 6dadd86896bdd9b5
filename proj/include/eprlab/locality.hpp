#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eprlab/model.hpp"
#include "eprlab/numeric.hpp"
#include "eprlab/prob.hpp"

namespace epr {

enum class LocalityCondition {
  no_signalling,
  active_locality,
  passive_locality,
  deterministic_passive_locality,
};

inline const char* condition_name(LocalityCondition c) {
  switch (c) {
    case LocalityCondition::no_signalling: return "no_signalling";
    case LocalityCondition::active_locality: return "active_locality";
    case LocalityCondition::passive_locality: return "passive_locality";
    case LocalityCondition::deterministic_passive_locality:
      return "deterministic_passive_locality";
  }
  return "?";
}

/// Outcome of one locality check.  A witness describing the violating
/// settings, lambda cell and numeric discrepancy is present exactly when
/// the condition fails.  For the deterministic check, the extracted
/// preparation events (one per axis, as lambda index sets) ride along on
/// success.
struct LocalityVerdict {
  LocalityCondition condition;
  bool holds = true;
  std::optional<std::string> witness;
  std::vector<Event> extracted_events;
};

enum class ExtractionFailure { none, anticorrelation, passive_locality, inconsistent };

/// Result of extracting the preparation-stage event that predetermines
/// the station-1 outcome at one axis.
template <class S>
struct Extraction {
  bool ok = false;
  ExtractionFailure failure = ExtractionFailure::none;
  std::string message;
  Event preparation_event;          // subset of lambda indices (the event at the source)
  S event_probability = ScalarTraits<S>::zero();  // P of that event = P(spin1 = up)
  std::vector<S> lambda_conditionals;  // P(spin1 = up | lambda), per lambda index
};

namespace detail {

template <class S>
std::array<S, 2> kernel_marginal(const JointDistribution<S>& k, int station) {
  return marginal(k, station);
}

template <class S>
bool passive_holds_at(const HiddenVariableModel<S>& model, std::size_t i1,
                      std::size_t i2, const S& tol, std::string* witness) {
  for (std::size_t l = 0; l < model.n_lambda(); ++l) {
    if (!(model.prior().weight(l) > ScalarTraits<S>::zero())) continue;
    const JointDistribution<S>& k = model.kernel(i1, i2, l);
    const auto m1 = kernel_marginal(k, 1);
    const auto m2 = kernel_marginal(k, 2);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const S product = S(m1[a] * m2[b]);
        if (!approx_eq(k.p[a][b], product, tol)) {
          if (witness) {
            *witness = "kernel at setting pair (station1 axis " + std::to_string(i1) +
                       ", station2 axis " + std::to_string(i2) + "), lambda " +
                       std::to_string(l) + " is not a product of its marginals: P(" +
                       spin_name(static_cast<Spin>(a)) + "," +
                       spin_name(static_cast<Spin>(b)) + ") = " +
                       format_scalar(k.p[a][b]) + ", marginal product = " +
                       format_scalar(product);
          }
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace detail

/// No-signalling: each station's outcome marginal is unchanged by the
/// remote setting, at the level of the aggregated (prior-averaged) joint.
/// This is the only constraint the quantum probabilities themselves
/// impose.
template <class S>
LocalityVerdict check_no_signalling(const HiddenVariableModel<S>& model,
                                    const std::vector<Axis>& station1_axes,
                                    const std::vector<Axis>& station2_axes,
                                    const S& tol = ScalarTraits<S>::default_tolerance()) {
  LocalityVerdict verdict{LocalityCondition::no_signalling};
  for (std::size_t a1 = 0; a1 < station1_axes.size(); ++a1) {
    for (std::size_t b1 = 0; b1 < station2_axes.size(); ++b1) {
      for (std::size_t b2 = b1 + 1; b2 < station2_axes.size(); ++b2) {
        const auto lhs = marginal(
            joint_distribution(model, SettingPair{station1_axes[a1], station2_axes[b1]}), 1);
        const auto rhs = marginal(
            joint_distribution(model, SettingPair{station1_axes[a1], station2_axes[b2]}), 1);
        if (!approx_eq(lhs[0], rhs[0], tol)) {
          verdict.holds = false;
          verdict.witness = "station 1 marginal at its axis " + std::to_string(a1) +
                            " shifts when the remote axis changes from " +
                            std::to_string(b1) + " to " + std::to_string(b2) +
                            ": P(up) = " + format_scalar(lhs[0]) + " vs " +
                            format_scalar(rhs[0]);
          return verdict;
        }
      }
    }
  }
  for (std::size_t b1 = 0; b1 < station2_axes.size(); ++b1) {
    for (std::size_t a1 = 0; a1 < station1_axes.size(); ++a1) {
      for (std::size_t a2 = a1 + 1; a2 < station1_axes.size(); ++a2) {
        const auto lhs = marginal(
            joint_distribution(model, SettingPair{station1_axes[a1], station2_axes[b1]}), 2);
        const auto rhs = marginal(
            joint_distribution(model, SettingPair{station1_axes[a2], station2_axes[b1]}), 2);
        if (!approx_eq(lhs[0], rhs[0], tol)) {
          verdict.holds = false;
          verdict.witness = "station 2 marginal at its axis " + std::to_string(b1) +
                            " shifts when the remote axis changes from " +
                            std::to_string(a1) + " to " + std::to_string(a2) +
                            ": P(up) = " + format_scalar(lhs[0]) + " vs " +
                            format_scalar(rhs[0]);
          return verdict;
        }
      }
    }
  }
  return verdict;
}

/// Active locality, checked at the lambda-resolved level: for every
/// lambda with positive prior, a station's conditional outcome marginal
/// must not react to the remote axis.  On two-outcome kernels this
/// renders the event-equivalence form of the condition faithfully; it is
/// strictly stronger than no-signalling, which only constrains the
/// aggregate.
template <class S>
LocalityVerdict check_active_locality(const HiddenVariableModel<S>& model,
                                      const std::vector<Axis>& station1_axes,
                                      const std::vector<Axis>& station2_axes,
                                      const S& tol = ScalarTraits<S>::default_tolerance()) {
  LocalityVerdict verdict{LocalityCondition::active_locality};
  std::vector<std::size_t> idx1, idx2;
  for (const Axis& a : station1_axes) idx1.push_back(model.require_axis(1, a));
  for (const Axis& a : station2_axes) idx2.push_back(model.require_axis(2, a));

  for (std::size_t l = 0; l < model.n_lambda(); ++l) {
    if (!(model.prior().weight(l) > ScalarTraits<S>::zero())) continue;
    for (std::size_t i1 : idx1) {
      for (std::size_t u = 0; u < idx2.size(); ++u) {
        for (std::size_t v = u + 1; v < idx2.size(); ++v) {
          const auto lhs = detail::kernel_marginal(model.kernel(i1, idx2[u], l), 1);
          const auto rhs = detail::kernel_marginal(model.kernel(i1, idx2[v], l), 1);
          if (!approx_eq(lhs[0], rhs[0], tol)) {
            verdict.holds = false;
            verdict.witness =
                "lambda " + std::to_string(l) + ": station 1 conditional marginal at its axis " +
                std::to_string(i1) + " shifts with the remote axis (" + std::to_string(idx2[u]) +
                " vs " + std::to_string(idx2[v]) + "): P(up | lambda) = " +
                format_scalar(lhs[0]) + " vs " + format_scalar(rhs[0]);
            return verdict;
          }
        }
      }
    }
    for (std::size_t i2 : idx2) {
      for (std::size_t u = 0; u < idx1.size(); ++u) {
        for (std::size_t v = u + 1; v < idx1.size(); ++v) {
          const auto lhs = detail::kernel_marginal(model.kernel(idx1[u], i2, l), 2);
          const auto rhs = detail::kernel_marginal(model.kernel(idx1[v], i2, l), 2);
          if (!approx_eq(lhs[0], rhs[0], tol)) {
            verdict.holds = false;
            verdict.witness =
                "lambda " + std::to_string(l) + ": station 2 conditional marginal at its axis " +
                std::to_string(i2) + " shifts with the remote axis (" + std::to_string(idx1[u]) +
                " vs " + std::to_string(idx1[v]) + "): P(up | lambda) = " +
                format_scalar(lhs[0]) + " vs " + format_scalar(rhs[0]);
            return verdict;
          }
        }
      }
    }
  }
  return verdict;
}

/// Passive locality: conditionally on the preparation stage (each lambda
/// cell), the two stations' outcomes are independent — every kernel
/// factorizes into its marginals.
template <class S>
LocalityVerdict check_passive_locality(const HiddenVariableModel<S>& model,
                                       const std::vector<Axis>& station1_axes,
                                       const std::vector<Axis>& station2_axes,
                                       const S& tol = ScalarTraits<S>::default_tolerance()) {
  LocalityVerdict verdict{LocalityCondition::passive_locality};
  for (const Axis& a1 : station1_axes) {
    for (const Axis& a2 : station2_axes) {
      std::string witness;
      if (!detail::passive_holds_at(model, model.require_axis(1, a1),
                                    model.require_axis(2, a2), tol, &witness)) {
        verdict.holds = false;
        verdict.witness = witness;
        return verdict;
      }
    }
  }
  return verdict;
}

/// Extracts the preparation-stage event implied by passive locality plus
/// perfect anticorrelation at one axis: the set of lambdas on which the
/// station-1 "up" outcome is certain.  Verifies the dichotomy of the
/// lambda conditionals, the probability identity P(event) = P(spin1=up),
/// and the three-way equivalence of {spin1=up}, {spin2=down} and the
/// lifted event on the enlarged space.
template <class S>
Extraction<S> extract_deterministic_event(
    const HiddenVariableModel<S>& model, const Axis& axis,
    const S& tol = ScalarTraits<S>::default_tolerance(),
    const S& det_tol = ScalarTraits<S>::dichotomy_tolerance()) {
  Extraction<S> result;
  const std::size_t i1 = model.require_axis(1, axis);
  const std::size_t i2 = model.require_axis(2, axis);

  if (!anticorrelation_check(model, {axis}, tol)) {
    result.failure = ExtractionFailure::anticorrelation;
    result.message = "anticorrelation fails at the requested axis: equal-setting joint "
                     "does not put mass 1 on opposite outcomes";
    return result;
  }
  {
    std::string witness;
    if (!detail::passive_holds_at(model, i1, i2, tol, &witness)) {
      result.failure = ExtractionFailure::passive_locality;
      result.message = "passive_locality fails at the equal-setting pair: " + witness;
      return result;
    }
  }

  const EnlargedSpace<S> enlarged = enlarged_space(model, SettingPair{axis, axis});
  const Event spin1_up = enlarged.station_event(1, Spin::up);
  const MeasurableFunction<S> conditional =
      conditional_probability(enlarged.measure, spin1_up, enlarged.source_cells);

  std::vector<std::size_t> event_lambdas;
  result.lambda_conditionals.reserve(model.n_lambda());
  for (std::size_t l = 0; l < model.n_lambda(); ++l) {
    const S value = conditional.cell_value(l);
    result.lambda_conditionals.push_back(value);
    if (!(model.prior().weight(l) > ScalarTraits<S>::zero())) continue;
    const bool is_zero = value <= S(ScalarTraits<S>::zero() + det_tol);
    const bool is_one = value >= S(ScalarTraits<S>::one() - det_tol);
    if (!is_zero && !is_one) {
      result.failure = ExtractionFailure::inconsistent;
      result.message = "conditional P(spin1 = up | lambda " + std::to_string(l) +
                       ") = " + format_scalar(value) +
                       " is strictly between 0 and 1; the premises cannot all hold";
      return result;
    }
    if (is_one) event_lambdas.push_back(l);
  }

  result.preparation_event = Event(std::move(event_lambdas));
  result.event_probability = probability(model.prior(), result.preparation_event);

  const S p_up = probability(enlarged.measure, spin1_up);
  if (!approx_eq(result.event_probability, p_up, tol)) {
    result.failure = ExtractionFailure::inconsistent;
    result.message = "P(preparation event) = " + format_scalar(result.event_probability) +
                     " does not match P(spin1 = up) = " + format_scalar(p_up);
    return result;
  }

  const Event spin2_down = enlarged.station_event(2, Spin::down);
  const Event lifted = enlarged.source_event(result.preparation_event);
  if (!events_equivalent(enlarged.measure, spin1_up, spin2_down, tol) ||
      !events_equivalent(enlarged.measure, spin1_up, lifted, tol) ||
      !events_equivalent(enlarged.measure, spin2_down, lifted, tol)) {
    result.failure = ExtractionFailure::inconsistent;
    result.message = "extracted event is not equivalent to the detector events";
    return result;
  }

  result.ok = true;
  return result;
}

/// Deterministic passive locality across a list of axes: extraction must
/// succeed at every one.  The extracted events ride along on the verdict.
template <class S>
LocalityVerdict check_deterministic_passive_locality(
    const HiddenVariableModel<S>& model, const std::vector<Axis>& axes,
    const S& tol = ScalarTraits<S>::default_tolerance(),
    const S& det_tol = ScalarTraits<S>::dichotomy_tolerance()) {
  LocalityVerdict verdict{LocalityCondition::deterministic_passive_locality};
  for (std::size_t i = 0; i < axes.size(); ++i) {
    Extraction<S> extraction = extract_deterministic_event(model, axes[i], tol, det_tol);
    if (!extraction.ok) {
      verdict.holds = false;
      verdict.witness = "axis " + std::to_string(i) + ": " + extraction.message;
      verdict.extracted_events.clear();
      return verdict;
    }
    verdict.extracted_events.push_back(std::move(extraction.preparation_event));
  }
  return verdict;
}

}  // namespace epr
