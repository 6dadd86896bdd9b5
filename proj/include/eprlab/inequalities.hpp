#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eprlab/model.hpp"
#include "eprlab/numeric.hpp"

namespace epr {

/// Correlation coefficient of one setting pair.
template <class S>
struct CorrelationValue {
  S value;
  SettingPair settings;
};

/// Evaluated inequality: left-hand side, classical bound, verdict and the
/// inputs that went in.  For the CHSH form the maximum over the four
/// placements of the single minus sign is reported alongside the fixed
/// pattern, since the literature is not consistent about which term
/// carries it.
template <class S>
struct InequalityReport {
  std::string name;
  S lhs = ScalarTraits<S>::zero();
  S bound = ScalarTraits<S>::zero();
  bool violated = false;
  std::vector<S> inputs;
  std::optional<S> max_sign_pattern_lhs;
};

/// E = P(up,up) + P(down,down) - P(up,down) - P(down,up).
template <class S>
S correlation(const JointDistribution<S>& j) {
  return S(S(j.at(Spin::up, Spin::up) + j.at(Spin::down, Spin::down)) -
           S(j.at(Spin::up, Spin::down) + j.at(Spin::down, Spin::up)));
}

template <class S>
CorrelationValue<S> correlation(const JointDistribution<S>& j, const SettingPair& s) {
  return CorrelationValue<S>{correlation(j), s};
}

namespace detail {

template <class S>
S chsh_max_over_sign_placements(const std::array<S, 4>& e) {
  const S sum = S(S(e[0] + e[1]) + S(e[2] + e[3]));
  S best = ScalarTraits<S>::zero();
  for (int k = 0; k < 4; ++k) {
    const S candidate = ScalarTraits<S>::abs(S(sum - S(e[k] + e[k])));
    if (candidate > best) best = candidate;
  }
  return best;
}

}  // namespace detail

/// CHSH inequality |E(mu,nu) + E(mu,nu') + E(mu',nu) - E(mu',nu')| <= 2.
/// Inputs in that argument order.
template <class S>
InequalityReport<S> chsh(const S& e_mn, const S& e_mn2, const S& e_m2n, const S& e_m2n2,
                         const S& tol = ScalarTraits<S>::default_tolerance()) {
  InequalityReport<S> report;
  report.name = "chsh";
  report.inputs = {e_mn, e_mn2, e_m2n, e_m2n2};
  report.lhs = ScalarTraits<S>::abs(S(S(e_mn + e_mn2) + S(e_m2n - e_m2n2)));
  report.bound = S(ScalarTraits<S>::one() + ScalarTraits<S>::one());
  report.violated = report.lhs > S(report.bound + tol);
  report.max_sign_pattern_lhs =
      detail::chsh_max_over_sign_placements<S>({e_mn, e_mn2, e_m2n, e_m2n2});
  return report;
}

template <class S>
InequalityReport<S> chsh(const CorrelationValue<S>& e_mn, const CorrelationValue<S>& e_mn2,
                         const CorrelationValue<S>& e_m2n, const CorrelationValue<S>& e_m2n2,
                         const S& tol = ScalarTraits<S>::default_tolerance()) {
  return chsh(e_mn.value, e_mn2.value, e_m2n.value, e_m2n2.value, tol);
}

/// Bell's first form |E(mu,nu) - E(mu,nu')| - E(nu,nu') <= 1.
template <class S>
InequalityReport<S> bell_original(const S& e_mn, const S& e_mn2, const S& e_nn2,
                                  const S& tol = ScalarTraits<S>::default_tolerance()) {
  InequalityReport<S> report;
  report.name = "bell_original";
  report.inputs = {e_mn, e_mn2, e_nn2};
  report.lhs = S(ScalarTraits<S>::abs(S(e_mn - e_mn2)) - e_nn2);
  report.bound = ScalarTraits<S>::one();
  report.violated = report.lhs > S(report.bound + tol);
  return report;
}

/// Correlation conditional on the preparation stage, as a function of the
/// two cell values P_mu = P(spin1=up | source) and P_nu = P(spin2=down |
/// source):
///   E = P_mu (1-P_nu) + (1-P_mu) P_nu - P_mu P_nu - (1-P_mu)(1-P_nu).
template <class S>
S conditional_correlation(const S& p_mu, const S& p_nu) {
  const S zero = ScalarTraits<S>::zero();
  const S one = ScalarTraits<S>::one();
  if (p_mu < zero || p_mu > one || p_nu < zero || p_nu > one) {
    throw PreconditionError("conditional correlation inputs must lie in [0,1]");
  }
  return S(S(S(p_mu * S(one - p_nu)) + S(S(one - p_mu) * p_nu)) -
           S(S(p_mu * p_nu) + S(S(one - p_mu) * S(one - p_nu))));
}

/// The pointwise core of the locality theorem: the CHSH combination of
/// conditional correlations, which never exceeds 2 anywhere on [0,1]^4.
template <class S>
InequalityReport<S> conditional_chsh(const S& p_mu, const S& p_mu2, const S& p_nu,
                                     const S& p_nu2,
                                     const S& tol = ScalarTraits<S>::default_tolerance()) {
  InequalityReport<S> report;
  report.name = "conditional_chsh";
  report.inputs = {p_mu, p_mu2, p_nu, p_nu2};
  const S e_mn = conditional_correlation(p_mu, p_nu);
  const S e_mn2 = conditional_correlation(p_mu, p_nu2);
  const S e_m2n = conditional_correlation(p_mu2, p_nu);
  const S e_m2n2 = conditional_correlation(p_mu2, p_nu2);
  report.lhs = ScalarTraits<S>::abs(S(S(e_mn + e_mn2) + S(e_m2n - e_m2n2)));
  report.bound = S(ScalarTraits<S>::one() + ScalarTraits<S>::one());
  report.violated = report.lhs > S(report.bound + tol);
  return report;
}

/// Three-axis sum P_AB(up,up) + P_BC(up,up) + P_CA(up,up) <= 1, the
/// exclusive-events bound that device-predetermined anticorrelated models
/// obey.
template <class S>
InequalityReport<S> three_axis_sum(const JointDistribution<S>& j_ab,
                                   const JointDistribution<S>& j_bc,
                                   const JointDistribution<S>& j_ca,
                                   const S& tol = ScalarTraits<S>::default_tolerance()) {
  InequalityReport<S> report;
  report.name = "three_axis";
  report.inputs = {j_ab.at(Spin::up, Spin::up), j_bc.at(Spin::up, Spin::up),
                   j_ca.at(Spin::up, Spin::up)};
  report.lhs = S(S(j_ab.at(Spin::up, Spin::up) + j_bc.at(Spin::up, Spin::up)) +
                 j_ca.at(Spin::up, Spin::up));
  report.bound = ScalarTraits<S>::one();
  report.violated = report.lhs > S(report.bound + tol);
  return report;
}

}  // namespace epr
