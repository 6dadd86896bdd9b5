#include "eprlab/polytope.hpp"

#include <cmath>
#include <string>

#include "eprlab/quantum.hpp"

namespace epr {

std::uint64_t strategy_count(std::size_t n1, std::size_t n2) {
  if (n1 + n2 > kMaxStrategyBits) {
    throw SizeError("strategy enumeration limited to " +
                    std::to_string(kMaxStrategyBits) + " axes total");
  }
  return std::uint64_t{1} << (n1 + n2);
}

DeterministicStrategy DeterministicStrategy::from_index(std::uint64_t index,
                                                        std::size_t n1, std::size_t n2) {
  if (n1 + n2 > kMaxStrategyBits) {
    throw SizeError("strategy enumeration limited to " +
                    std::to_string(kMaxStrategyBits) + " axes total");
  }
  DeterministicStrategy s;
  s.assign1.resize(n1);
  s.assign2.resize(n2);
  const std::size_t bits = n1 + n2;
  for (std::size_t k = 0; k < bits; ++k) {
    const int bit = static_cast<int>((index >> (bits - 1 - k)) & 1u);
    const Spin spin = bit == 0 ? Spin::up : Spin::down;
    if (k < n1) {
      s.assign1[k] = spin;
    } else {
      s.assign2[k - n1] = spin;
    }
  }
  return s;
}

std::uint64_t DeterministicStrategy::to_index() const {
  std::uint64_t index = 0;
  for (Spin v : assign1) index = (index << 1) | (v == Spin::down ? 1u : 0u);
  for (Spin v : assign2) index = (index << 1) | (v == Spin::down ? 1u : 0u);
  return index;
}

std::vector<DeterministicStrategy> enumerate_strategies(std::size_t n1, std::size_t n2) {
  const std::uint64_t count = strategy_count(n1, n2);
  std::vector<DeterministicStrategy> out;
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    out.push_back(DeterministicStrategy::from_index(idx, n1, n2));
  }
  return out;
}

namespace {

double chsh_fixed_pattern_value(const Axis& mu, const Axis& mu2, const Axis& nu,
                                const Axis& nu2, std::uint64_t* evaluations) {
  const double e_mn = correlation(singlet_joint(SettingPair{mu, nu}).joint);
  const double e_mn2 = correlation(singlet_joint(SettingPair{mu, nu2}).joint);
  const double e_m2n = correlation(singlet_joint(SettingPair{mu2, nu}).joint);
  const double e_m2n2 = correlation(singlet_joint(SettingPair{mu2, nu2}).joint);
  ++*evaluations;
  return std::fabs(e_mn + e_mn2 + e_m2n - e_m2n2);
}

double chsh_fixed_pattern_value(const std::array<double, 4>& angles_deg,
                                std::uint64_t* evaluations) {
  return chsh_fixed_pattern_value(
      Axis::in_plane_degrees(angles_deg[0]), Axis::in_plane_degrees(angles_deg[1]),
      Axis::in_plane_degrees(angles_deg[2]), Axis::in_plane_degrees(angles_deg[3]),
      evaluations);
}

}  // namespace

QuantumSearchResult max_chsh_quantum(const QuantumSearchParams& params) {
  QuantumSearchResult result;
  const int free_angles = params.lock_equal_settings ? 2 : 4;

  auto expand = [&](const std::array<double, 4>& raw) {
    std::array<double, 4> full = raw;
    if (params.lock_equal_settings) {
      full[2] = raw[0];
      full[3] = raw[1];
    }
    return full;
  };

  // Grid stage, over precomputed axes.
  const int steps = static_cast<int>(std::floor(360.0 / params.grid_step_degrees));
  std::vector<Axis> grid_axes;
  grid_axes.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    grid_axes.push_back(Axis::in_plane_degrees(i * params.grid_step_degrees));
  }
  std::array<double, 4> best{0.0, 0.0, 0.0, 0.0};
  double best_value = chsh_fixed_pattern_value(expand(best), &result.evaluations);
  std::array<int, 4> grid_index{0, 0, 0, 0};
  while (true) {
    int carry = free_angles - 1;
    while (carry >= 0 && ++grid_index[carry] == steps) {
      grid_index[carry] = 0;
      --carry;
    }
    if (carry < 0) break;
    const std::array<int, 4> full_index =
        params.lock_equal_settings
            ? std::array<int, 4>{grid_index[0], grid_index[1], grid_index[0], grid_index[1]}
            : grid_index;
    const double value = chsh_fixed_pattern_value(
        grid_axes[full_index[0]], grid_axes[full_index[1]], grid_axes[full_index[2]],
        grid_axes[full_index[3]], &result.evaluations);
    if (value > best_value) {
      best_value = value;
      for (int k = 0; k < free_angles; ++k) {
        best[k] = grid_index[k] * params.grid_step_degrees;
      }
    }
  }

  // Coordinate refinement with halving step.
  double step = params.grid_step_degrees * params.shrink;
  for (int sweep = 0; sweep < params.refine_sweeps; ++sweep) {
    for (int k = 0; k < free_angles; ++k) {
      for (const double delta : {+step, -step}) {
        std::array<double, 4> candidate = best;
        candidate[k] += delta;
        const double value =
            chsh_fixed_pattern_value(expand(candidate), &result.evaluations);
        if (value > best_value) {
          best_value = value;
          best = candidate;
        }
      }
    }
    step *= params.shrink;
  }

  result.angles_degrees = expand(best);
  result.axes = {Axis::in_plane_degrees(result.angles_degrees[0]),
                 Axis::in_plane_degrees(result.angles_degrees[1]),
                 Axis::in_plane_degrees(result.angles_degrees[2]),
                 Axis::in_plane_degrees(result.angles_degrees[3])};
  result.lhs = best_value;
  result.converged = result.lhs >= params.target - params.target_slack;
  return result;
}

}  // namespace epr
