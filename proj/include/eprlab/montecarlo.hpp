#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "eprlab/inequalities.hpp"
#include "eprlab/model.hpp"

namespace epr {

/// Settings to sample and how often, plus the master seed.  Each entry
/// gets its own deterministic substream, so sampling order (or
/// parallelism) cannot change the counts.
struct RunSchedule {
  struct Item {
    SettingPair settings;
    std::uint64_t trials = 1;
  };
  std::vector<Item> items;
  std::uint64_t seed = 0;
};

/// Outcome counts of one sampled setting, in (up,up), (up,down),
/// (down,up), (down,down) layout.
using CountTable = std::array<std::array<std::uint64_t, 2>, 2>;

inline std::uint64_t total_trials(const CountTable& counts) {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

/// Correlation estimate from counts, with the plug-in standard error
/// sqrt((1 - e_hat^2)/n).
struct EmpiricalCorrelation {
  double e_hat = 0.0;
  std::uint64_t n = 0;
  double std_err = 0.0;
};

EmpiricalCorrelation empirical_correlation(const CountTable& counts);

/// Draws per-trial outcomes from a hidden-variable model: lambda from the
/// prior, then the joint spin from the kernel, both by inverse CDF in
/// fixed cell order.  Identical (source, schedule) inputs give identical
/// counts.
std::vector<CountTable> sample_runs(const HiddenVariableModel<double>& model,
                                    const RunSchedule& schedule);

/// Same sampler against the analytic singlet prediction.
std::vector<CountTable> sample_runs_quantum(const RunSchedule& schedule);

/// CHSH evaluated on the four empirical correlations, with the standard
/// errors propagated in quadrature.
struct EmpiricalChsh {
  InequalityReport<double> report;
  std::array<EmpiricalCorrelation, 4> terms;
  double std_err = 0.0;
};

EmpiricalChsh empirical_chsh(const std::array<CountTable, 4>& counts);

namespace rng {

/// Substream seed for schedule item `index`: one splitmix64 scramble of
/// the master seed offset by the golden-ratio increment.  The scrambled
/// value seeds a std::mt19937_64, whose output sequence is fixed by the
/// standard, so streams are reproducible across platforms.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index);

/// Uniform double in [0,1) from the top 53 bits of a 64-bit draw.
double to_unit_interval(std::uint64_t word);

}  // namespace rng

}  // namespace epr
