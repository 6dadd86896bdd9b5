#include "eprlab/quantum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

namespace epr {

QuantumJoint singlet_joint(const SettingPair& s) {
  const double cosine = s.station1.dot(s.station2);
  JointDistribution<double> j;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const int sign_a = a == 0 ? +1 : -1;
      const int sign_b = b == 0 ? +1 : -1;
      // Clamp: equal axes can land a hair above cosine 1 in floating point.
      j.p[a][b] = std::max(0.0, (1.0 - sign_a * sign_b * cosine) / 4.0);
    }
  }
  return QuantumJoint{j, s};
}

namespace {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

Matrix2c spin_projector(const Axis& axis, int sign) {
  const std::complex<double> i(0.0, 1.0);
  Matrix2c pauli_dot;
  const double x = axis.direction[0], y = axis.direction[1], z = axis.direction[2];
  pauli_dot << z, x - i * y,
               x + i * y, -z;
  return 0.5 * (Matrix2c::Identity() + static_cast<double>(sign) * pauli_dot);
}

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
    }
  }
  return out;
}

}  // namespace

QuantumJoint density_matrix_oracle(const SettingPair& s) {
  // Singlet vector in the (uu, ud, du, dd) product basis.
  Vector4c psi;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  psi << 0.0, inv_sqrt2, -inv_sqrt2, 0.0;

  JointDistribution<double> j;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Matrix4c projector = kron(spin_projector(s.station1, a == 0 ? +1 : -1),
                                      spin_projector(s.station2, b == 0 ? +1 : -1));
      j.p[a][b] = std::max(0.0, (psi.adjoint() * projector * psi).value().real());
    }
  }
  return QuantumJoint{j, s};
}

std::array<Axis, 4> chsh_optimal_axes() {
  return {Axis::in_plane_degrees(90.0), Axis::in_plane_degrees(0.0),
          Axis::in_plane_degrees(45.0), Axis::in_plane_degrees(135.0)};
}

}  // namespace epr
