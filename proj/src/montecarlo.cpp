#include "eprlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eprlab/quantum.hpp"

namespace epr {

namespace rng {

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t z = master_seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double to_unit_interval(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

}  // namespace rng

namespace {

/// Walks the four cells in (uu, ud, du, dd) order; the last cell absorbs
/// any residual rounding.
std::pair<int, int> draw_cell(const JointDistribution<double>& j, double u) {
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      if (a == 1 && b == 1) return {1, 1};
      if (u < j.p[a][b]) return {a, b};
      u -= j.p[a][b];
    }
  }
  return {1, 1};
}

std::size_t draw_index(const std::vector<double>& weights, double u) {
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

}  // namespace

EmpiricalCorrelation empirical_correlation(const CountTable& counts) {
  EmpiricalCorrelation out;
  out.n = total_trials(counts);
  if (out.n == 0) throw PreconditionError("no trials recorded for this setting");
  const double n = static_cast<double>(out.n);
  const double same = static_cast<double>(counts[0][0] + counts[1][1]);
  const double opposite = static_cast<double>(counts[0][1] + counts[1][0]);
  out.e_hat = (same - opposite) / n;
  out.std_err = std::sqrt(std::max(0.0, 1.0 - out.e_hat * out.e_hat) / n);
  return out;
}

std::vector<CountTable> sample_runs(const HiddenVariableModel<double>& model,
                                    const RunSchedule& schedule) {
  std::vector<CountTable> out;
  out.reserve(schedule.items.size());
  for (std::size_t item = 0; item < schedule.items.size(); ++item) {
    const auto& entry = schedule.items[item];
    if (entry.trials == 0) throw PreconditionError("trial count must be at least 1");
    const std::size_t i1 = model.require_axis(1, entry.settings.station1);
    const std::size_t i2 = model.require_axis(2, entry.settings.station2);

    std::mt19937_64 engine(rng::substream_seed(schedule.seed, item));
    CountTable counts{};
    for (std::uint64_t t = 0; t < entry.trials; ++t) {
      const std::size_t lambda =
          draw_index(model.prior().weights(), rng::to_unit_interval(engine()));
      const auto [a, b] =
          draw_cell(model.kernel(i1, i2, lambda), rng::to_unit_interval(engine()));
      ++counts[a][b];
    }
    out.push_back(counts);
  }
  return out;
}

std::vector<CountTable> sample_runs_quantum(const RunSchedule& schedule) {
  std::vector<CountTable> out;
  out.reserve(schedule.items.size());
  for (std::size_t item = 0; item < schedule.items.size(); ++item) {
    const auto& entry = schedule.items[item];
    if (entry.trials == 0) throw PreconditionError("trial count must be at least 1");
    const JointDistribution<double> joint = singlet_joint(entry.settings).joint;

    std::mt19937_64 engine(rng::substream_seed(schedule.seed, item));
    CountTable counts{};
    for (std::uint64_t t = 0; t < entry.trials; ++t) {
      const auto [a, b] = draw_cell(joint, rng::to_unit_interval(engine()));
      ++counts[a][b];
    }
    out.push_back(counts);
  }
  return out;
}

EmpiricalChsh empirical_chsh(const std::array<CountTable, 4>& counts) {
  EmpiricalChsh out;
  for (std::size_t k = 0; k < 4; ++k) out.terms[k] = empirical_correlation(counts[k]);
  out.report = chsh(out.terms[0].e_hat, out.terms[1].e_hat, out.terms[2].e_hat,
                    out.terms[3].e_hat);
  double sq = 0.0;
  for (const auto& term : out.terms) sq += term.std_err * term.std_err;
  out.std_err = std::sqrt(sq);
  return out;
}

}  // namespace epr
