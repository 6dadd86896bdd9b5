#pragma once

#include <array>

#include "eprlab/model.hpp"

namespace epr {

/// Joint outcome distribution predicted by the singlet state for one
/// setting pair.  Satisfies p(a,b) = (1 - a*b*(mu.nu))/4, perfect
/// anticorrelation at equal axes, and correlation -mu.nu.
struct QuantumJoint {
  JointDistribution<double> joint;
  SettingPair settings;
};

/// Closed-form singlet prediction.
QuantumJoint singlet_joint(const SettingPair& s);

/// Independent verification path: evaluates <psi-| (P_a ⊗ P_b) |psi-> by
/// explicit two-qubit linear algebra with spin projectors along the axes.
/// Must agree with the closed form to 1e-12.
QuantumJoint density_matrix_oracle(const SettingPair& s);

/// Coplanar axes (station 1: 90 and 0 degrees, station 2: 45 and 135
/// degrees from z in the x-z plane), ordered (mu, mu', nu, nu') so that
/// the fixed CHSH sign pattern attains 2*sqrt(2) on the singlet.
std::array<Axis, 4> chsh_optimal_axes();

}  // namespace epr
