#include "eprlab/quantum.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "eprlab/inequalities.hpp"
#include "test_support.hpp"

using namespace epr;
using epr::testing::random_axis;

TEST_CASE("singlet at equal axes is perfectly anticorrelated") {
  const Axis z(0.0, 0.0, 1.0);
  const auto q = singlet_joint(SettingPair{z, z});
  CHECK(q.joint.at(Spin::up, Spin::down) == doctest::Approx(0.5));
  CHECK(q.joint.at(Spin::down, Spin::up) == doctest::Approx(0.5));
  CHECK(q.joint.at(Spin::up, Spin::up) == 0.0);
  CHECK(q.joint.at(Spin::down, Spin::down) == 0.0);
}

TEST_CASE("singlet at orthogonal axes is uniform") {
  const auto q = singlet_joint(SettingPair{Axis(0, 0, 1), Axis(1, 0, 0)});
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) CHECK(q.joint.p[a][b] == doctest::Approx(0.25));
  }
  CHECK(correlation(q.joint) == doctest::Approx(0.0));
}

TEST_CASE("singlet at 120 degrees: up-up probability 3/8") {
  const auto q = singlet_joint(
      SettingPair{Axis::in_plane_degrees(0.0), Axis::in_plane_degrees(120.0)});
  // Density-matrix oracle value (1 - cos 120)/4 = 3/8.
  const auto oracle = density_matrix_oracle(
      SettingPair{Axis::in_plane_degrees(0.0), Axis::in_plane_degrees(120.0)});
  CHECK(q.joint.at(Spin::up, Spin::up) ==
        doctest::Approx(oracle.joint.at(Spin::up, Spin::up)).epsilon(1e-12));
  CHECK(q.joint.at(Spin::up, Spin::up) == doctest::Approx(0.375));
}

TEST_CASE("density matrix oracle at the z axis") {
  const auto q = density_matrix_oracle(SettingPair{Axis(0, 0, 1), Axis(0, 0, 1)});
  CHECK(q.joint.at(Spin::up, Spin::down) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(q.joint.at(Spin::down, Spin::up) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(q.joint.at(Spin::up, Spin::up) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("closed form and oracle agree to 1e-12 on random axes") {
  std::mt19937_64 rng(31);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const SettingPair s{random_axis(rng), random_axis(rng)};
    const auto closed = singlet_joint(s);
    const auto oracle = density_matrix_oracle(s);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        worst = std::max(worst, std::fabs(closed.joint.p[a][b] - oracle.joint.p[a][b]));
      }
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("correlation equals minus the axis cosine") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const SettingPair s{random_axis(rng), random_axis(rng)};
    CHECK(correlation(singlet_joint(s).joint) ==
          doctest::Approx(-s.station1.dot(s.station2)).epsilon(1e-12));
  }
  const SettingPair diag{Axis::in_plane_degrees(0.0), Axis::in_plane_degrees(45.0)};
  CHECK(correlation(density_matrix_oracle(diag).joint) ==
        doctest::Approx(-std::sqrt(2.0) / 2.0));
}

TEST_CASE("no-signalling marginals of the singlet are exactly one half") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const auto q = singlet_joint(SettingPair{random_axis(rng), random_axis(rng)});
    for (int station = 1; station <= 2; ++station) {
      const auto m = marginal(q.joint, station);
      CHECK(m[0] == doctest::Approx(0.5).epsilon(1e-15));
      CHECK(m[1] == doctest::Approx(0.5).epsilon(1e-15));
    }
  }
}

TEST_CASE("optimal axes reach 2*sqrt(2) on the fixed CHSH pattern") {
  const auto axes = chsh_optimal_axes();
  auto term = [&](const Axis& a, const Axis& b) {
    return correlation(singlet_joint(SettingPair{a, b}).joint);
  };
  const auto report = chsh(term(axes[0], axes[2]), term(axes[0], axes[3]),
                           term(axes[1], axes[2]), term(axes[1], axes[3]));
  CHECK(report.lhs == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(report.violated);
  CHECK(*report.max_sign_pattern_lhs == doctest::Approx(2.0 * std::sqrt(2.0)));

  SUBCASE("perturbing any single axis strictly decreases the value") {
    for (int k = 0; k < 4; ++k) {
      const double base_deg[4] = {90.0, 0.0, 45.0, 135.0};
      double perturbed[4];
      std::copy(base_deg, base_deg + 4, perturbed);
      perturbed[k] += 1.0;
      const Axis mu = Axis::in_plane_degrees(perturbed[0]);
      const Axis mu2 = Axis::in_plane_degrees(perturbed[1]);
      const Axis nu = Axis::in_plane_degrees(perturbed[2]);
      const Axis nu2 = Axis::in_plane_degrees(perturbed[3]);
      const auto r = chsh(term(mu, nu), term(mu, nu2), term(mu2, nu), term(mu2, nu2));
      CHECK(r.lhs < report.lhs - 1e-7);
    }
  }

  SUBCASE("all-equal axes degenerate to the classical edge") {
    const Axis z(0.0, 0.0, 1.0);
    auto e = term(z, z);
    const auto r = chsh(e, e, e, e);
    CHECK(*r.max_sign_pattern_lhs == doctest::Approx(2.0));
    CHECK(r.lhs == doctest::Approx(2.0));
  }
}
