#include "eprlab/locality.hpp"

#include <random>

#include "doctest.h"
#include "eprlab/inequalities.hpp"
#include "eprlab/quantum.hpp"
#include "test_support.hpp"

using namespace epr;
using epr::testing::build_model;
using epr::testing::plane_axes;
using epr::testing::point_mass;
using epr::testing::random_axis;
using epr::testing::random_local_anticorrelated_model;
using epr::testing::random_passive_anticorrelated_model;
using epr::testing::random_product_kernel;

namespace {

/// Correlated coin: passes active locality and anticorrelation, fails
/// passive locality.
HiddenVariableModel<double> correlated_coin_model(const std::vector<Axis>& axes) {
  return build_model<double>({1.0}, axes, axes, [](std::size_t, std::size_t, std::size_t) {
    return JointDistribution<double>(0.0, 0.5, 0.5, 0.0);
  });
}

/// Two-lambda cancellation: station-1 conditional marginals move with the
/// remote axis but the shifts cancel in the prior average, so
/// no-signalling survives while active locality fails.
HiddenVariableModel<double> cancellation_model() {
  const std::vector<Axis> axes1 = plane_axes({0.0});
  const std::vector<Axis> axes2 = plane_axes({0.0, 90.0});
  auto product = [](double p_up1, double p_up2) {
    return JointDistribution<double>(p_up1 * p_up2, p_up1 * (1 - p_up2),
                                     (1 - p_up1) * p_up2, (1 - p_up1) * (1 - p_up2));
  };
  return build_model<double>(
      {0.5, 0.5}, axes1, axes2, [&](std::size_t, std::size_t j, std::size_t l) {
        const double p = (j == 0) == (l == 0) ? 0.8 : 0.2;
        return product(p, 0.5);
      });
}

}  // namespace

TEST_CASE("no-signalling holds when kernels ignore the remote axis") {
  std::mt19937_64 rng(51);
  const std::vector<Axis> axes = plane_axes({0.0, 45.0, 90.0});
  std::vector<std::vector<JointDistribution<double>>> local(
      axes.size(), std::vector<JointDistribution<double>>(2));
  for (auto& row : local) {
    for (auto& k : row) k = epr::testing::random_kernel(rng);
  }
  // Station-1 marginal depends only on (axis1, lambda); build kernels as
  // products of per-station marginals.
  const auto model = build_model<double>(
      {0.5, 0.5}, axes, axes, [&](std::size_t i, std::size_t j, std::size_t l) {
        const double p1 = marginal(local[i][l], 1)[0];
        const double p2 = marginal(local[j][l], 2)[0];
        return JointDistribution<double>(p1 * p2, p1 * (1 - p2), (1 - p1) * p2,
                                         (1 - p1) * (1 - p2));
      });
  const auto verdict = check_no_signalling(model, axes, axes);
  CHECK(verdict.holds);
  CHECK_FALSE(verdict.witness.has_value());
}

TEST_CASE("a signalling kernel is caught with a witness") {
  const std::vector<Axis> axes2 = plane_axes({0.0, 90.0});
  const auto model = build_model<double>(
      {1.0}, plane_axes({0.0}), axes2, [](std::size_t, std::size_t j, std::size_t) {
        // Station-1 marginal flips with the remote axis.
        const double p = j == 0 ? 0.9 : 0.1;
        return JointDistribution<double>(p * 0.5, p * 0.5, (1 - p) * 0.5, (1 - p) * 0.5);
      });
  const auto verdict = check_no_signalling(model, plane_axes({0.0}), axes2);
  CHECK_FALSE(verdict.holds);
  REQUIRE(verdict.witness.has_value());
  CHECK(verdict.witness->find("station 1") != std::string::npos);
}

TEST_CASE("singlet-matched model is no-signalling at random axes") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<Axis> axes1 = {random_axis(rng), random_axis(rng)};
    const std::vector<Axis> axes2 = {random_axis(rng), random_axis(rng)};
    const auto model = build_model<double>(
        {1.0}, axes1, axes2, [&](std::size_t i, std::size_t j, std::size_t) {
          return singlet_joint(SettingPair{axes1[i], axes2[j]}).joint;
        });
    CHECK(check_no_signalling(model, axes1, axes2, 1e-9).holds);
  }
}

TEST_CASE("active locality holds for factorized kernels") {
  std::mt19937_64 rng(53);
  const std::vector<Axis> axes = plane_axes({0.0, 60.0});
  std::vector<std::vector<Rational>> p1(axes.size()), p2(axes.size());
  for (std::size_t i = 0; i < axes.size(); ++i) {
    for (int l = 0; l < 3; ++l) {
      p1[i].push_back(make_ratio(static_cast<long>(rng() % 5), 4));
      p2[i].push_back(make_ratio(static_cast<long>(rng() % 5), 4));
    }
  }
  const auto model = build_model<Rational>(
      epr::testing::random_rational_weights(rng, 3), axes, axes,
      [&](std::size_t i, std::size_t j, std::size_t l) {
        return JointDistribution<Rational>(
            Rational(p1[i][l] * p2[j][l]), Rational(p1[i][l] * (1 - p2[j][l])),
            Rational((1 - p1[i][l]) * p2[j][l]),
            Rational((1 - p1[i][l]) * (1 - p2[j][l])));
      });
  CHECK(check_active_locality(model, axes, axes).holds);
  CHECK(check_passive_locality(model, axes, axes).holds);
  CHECK(check_no_signalling(model, axes, axes).holds);
}

TEST_CASE("cancellation model separates no-signalling from active locality") {
  const auto model = cancellation_model();
  const std::vector<Axis> axes1 = plane_axes({0.0});
  const std::vector<Axis> axes2 = plane_axes({0.0, 90.0});

  CHECK(check_no_signalling(model, axes1, axes2).holds);
  const auto active = check_active_locality(model, axes1, axes2);
  CHECK_FALSE(active.holds);
  REQUIRE(active.witness.has_value());
  CHECK(active.witness->find("lambda") != std::string::npos);
  // The aggregate marginal hides what the lambda-resolved marginal shows.
}

TEST_CASE("single remote setting makes active locality vacuous") {
  const auto model = build_model<double>(
      {1.0}, plane_axes({0.0}), plane_axes({0.0}),
      [](std::size_t, std::size_t, std::size_t) {
        return JointDistribution<double>(0.0, 0.5, 0.5, 0.0);
      });
  CHECK(check_active_locality(model, plane_axes({0.0}), plane_axes({0.0})).holds);
  CHECK(check_no_signalling(model, plane_axes({0.0}), plane_axes({0.0})).holds);
}

TEST_CASE("passive locality") {
  const std::vector<Axis> axes = plane_axes({0.0, 90.0});

  SUBCASE("deterministic kernels factorize") {
    const auto model = build_model<double>(
        {0.5, 0.5}, axes, axes, [](std::size_t i, std::size_t, std::size_t l) {
          return point_mass<double>(l == 0 ? Spin::up : Spin::down,
                                    l == 0 ? Spin::down : Spin::up);
        });
    CHECK(check_passive_locality(model, axes, axes).holds);
  }

  SUBCASE("the correlated coin fails with a witness") {
    const auto verdict = check_passive_locality(correlated_coin_model(axes), axes, axes);
    CHECK_FALSE(verdict.holds);
    REQUIRE(verdict.witness.has_value());
    CHECK(verdict.witness->find("not a product") != std::string::npos);
  }

  SUBCASE("random product kernels pass") {
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 50; ++trial) {
      const auto model = build_model<Rational>(
          epr::testing::random_rational_weights(rng, 1 + rng() % 4), axes, axes,
          [&](std::size_t, std::size_t, std::size_t) {
            return random_product_kernel(rng);
          });
      CHECK(check_passive_locality(model, axes, axes).holds);
    }
  }
}

TEST_CASE("extraction of the preparation event") {
  const std::vector<Axis> axes = plane_axes({0.0});
  const Axis axis = axes[0];

  SUBCASE("two lambdas, opposite deterministic outcomes") {
    const auto model = build_model<Rational>(
        {make_ratio(1, 2), make_ratio(1, 2)}, axes, axes,
        [](std::size_t, std::size_t, std::size_t l) {
          return l == 0 ? point_mass<Rational>(Spin::up, Spin::down)
                        : point_mass<Rational>(Spin::down, Spin::up);
        });
    const auto extraction = extract_deterministic_event(model, axis);
    REQUIRE(extraction.ok);
    CHECK(extraction.preparation_event == Event{0});
    CHECK(extraction.event_probability == make_ratio(1, 2));
    CHECK(extraction.lambda_conditionals[0] == Rational(1));
    CHECK(extraction.lambda_conditionals[1] == Rational(0));
  }

  SUBCASE("all lambdas up: the event is the whole source space") {
    const auto model = build_model<Rational>(
        {make_ratio(1, 3), make_ratio(2, 3)}, axes, axes,
        [](std::size_t, std::size_t, std::size_t) {
          return point_mass<Rational>(Spin::up, Spin::down);
        });
    const auto extraction = extract_deterministic_event(model, axis);
    REQUIRE(extraction.ok);
    CHECK(extraction.preparation_event == Event{0, 1});
    CHECK(extraction.event_probability == Rational(1));
  }

  SUBCASE("correlated coin: refusal citing passive locality") {
    const auto extraction =
        extract_deterministic_event(correlated_coin_model(axes), axis);
    CHECK_FALSE(extraction.ok);
    CHECK(extraction.failure == ExtractionFailure::passive_locality);
    CHECK(extraction.message.find("passive_locality") != std::string::npos);
  }

  SUBCASE("no anticorrelation: refusal citing it") {
    const auto model = build_model<double>(
        {1.0}, axes, axes, [](std::size_t, std::size_t, std::size_t) {
          return JointDistribution<double>(0.25, 0.25, 0.25, 0.25);
        });
    const auto extraction = extract_deterministic_event(model, axis);
    CHECK_FALSE(extraction.ok);
    CHECK(extraction.failure == ExtractionFailure::anticorrelation);
  }
}

TEST_CASE("deterministic passive locality across axis lists") {
  SUBCASE("deterministic anticorrelated model on three axes") {
    std::mt19937_64 rng(55);
    const std::vector<Axis> axes = plane_axes({0.0, 45.0, 90.0});
    const auto model = random_local_anticorrelated_model(rng, axes);
    const auto verdict = check_deterministic_passive_locality(model, axes);
    CHECK(verdict.holds);
    CHECK(verdict.extracted_events.size() == 3);
  }

  SUBCASE("lambda-free singlet model fails: conditionals sit strictly inside (0,1)") {
    const std::vector<Axis> axes = plane_axes({0.0, 60.0});
    const auto model = build_model<double>(
        {1.0}, axes, axes, [&](std::size_t i, std::size_t j, std::size_t) {
          return singlet_joint(SettingPair{axes[i], axes[j]}).joint;
        });
    const auto verdict = check_deterministic_passive_locality(model, axes);
    CHECK_FALSE(verdict.holds);
    REQUIRE(verdict.witness.has_value());
  }

  SUBCASE("empty axis list holds vacuously") {
    const auto model = correlated_coin_model(plane_axes({0.0}));
    const auto verdict = check_deterministic_passive_locality(model, {});
    CHECK(verdict.holds);
    CHECK(verdict.extracted_events.empty());
  }
}

TEST_CASE("theorem gate: active + passive + anticorrelation keep CHSH at two") {
  std::mt19937_64 rng(56);
  const std::vector<Axis> axes = plane_axes({0.0, 35.0, 80.0});
  for (int trial = 0; trial < 100; ++trial) {
    const auto model = random_local_anticorrelated_model(rng, axes);
    REQUIRE(check_active_locality(model, axes, axes).holds);
    REQUIRE(check_passive_locality(model, axes, axes).holds);
    REQUIRE(anticorrelation_check(model, axes));

    std::vector<std::vector<Rational>> e(axes.size(), std::vector<Rational>(axes.size()));
    for (std::size_t i = 0; i < axes.size(); ++i) {
      for (std::size_t j = 0; j < axes.size(); ++j) {
        e[i][j] = correlation(joint_distribution(model, SettingPair{axes[i], axes[j]}));
      }
    }
    for (std::size_t m = 0; m < axes.size(); ++m) {
      for (std::size_t m2 = 0; m2 < axes.size(); ++m2) {
        for (std::size_t n = 0; n < axes.size(); ++n) {
          for (std::size_t n2 = 0; n2 < axes.size(); ++n2) {
            if (m == m2 || n == n2) continue;
            const auto report = chsh<Rational>(e[m][n], e[m][n2], e[m2][n], e[m2][n2]);
            CHECK(report.lhs <= Rational(2));
            CHECK(*report.max_sign_pattern_lhs <= Rational(2));
          }
        }
      }
    }
  }
}

TEST_CASE("Faris implication: passive + anticorrelation force the dichotomy") {
  std::mt19937_64 rng(57);
  const std::vector<Axis> axes = plane_axes({0.0, 45.0});
  for (int trial = 0; trial < 100; ++trial) {
    const auto model = random_passive_anticorrelated_model(rng, axes);
    for (const Axis& axis : axes) {
      const auto extraction = extract_deterministic_event(model, axis);
      REQUIRE(extraction.ok);
      for (std::size_t l = 0; l < model.n_lambda(); ++l) {
        if (model.prior().weight(l) > 0) {
          const Rational& v = extraction.lambda_conditionals[l];
          CHECK((v == 0 || v == 1));
        }
      }
    }
  }
}

TEST_CASE("indicator consistency: the lifted event reproduces P(spin1=up)") {
  std::mt19937_64 rng(58);
  const std::vector<Axis> axes = plane_axes({0.0, 30.0});
  for (int trial = 0; trial < 50; ++trial) {
    const auto model = random_passive_anticorrelated_model(rng, axes);
    const auto extraction = extract_deterministic_event(model, axes[0]);
    REQUIRE(extraction.ok);

    const auto enlarged = enlarged_space(model, SettingPair{axes[0], axes[0]});
    const Event lifted = enlarged.source_event(extraction.preparation_event);
    std::vector<Rational> indicator(enlarged.space.size(), Rational(0));
    for (std::size_t i : lifted.members()) indicator[i] = 1;
    const Rational expected =
        probability(enlarged.measure, enlarged.station_event(1, Spin::up));
    CHECK(expectation(enlarged.measure,
                      MeasurableFunction<Rational>(
                          indicator, Partition::discrete(enlarged.space.size()))) ==
          expected);
    CHECK(extraction.event_probability == expected);
  }
}

TEST_CASE("correlated coin separates passive from active locality") {
  const std::vector<Axis> axes = plane_axes({0.0, 90.0});
  const auto model = correlated_coin_model(axes);
  CHECK(check_active_locality(model, axes, axes).holds);
  CHECK(anticorrelation_check(model, axes));
  CHECK_FALSE(check_passive_locality(model, axes, axes).holds);
}
