#include "stokes_lab/jones.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "stokes_lab/errors.hpp"

namespace stokes_lab::jones {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}  // namespace

Eigen::Matrix2cd rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix2cd m;
  m << c, s,
      -s, c;
  return m;
}

Eigen::Matrix2cd rotation45() {
  Eigen::Matrix2cd m;
  m << kInvSqrt2, kInvSqrt2,
      -kInvSqrt2, kInvSqrt2;
  return m;
}

Eigen::Matrix2cd quarter_wave_plate(WavePlateAxis fast_axis) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  if (fast_axis == WavePlateAxis::x) {
    m(0, 0) = 1.0;
    m(1, 1) = -kI;
  } else {
    m(0, 0) = -kI;
    m(1, 1) = 1.0;
  }
  return m;
}

Eigen::Matrix2cd s3_analyzer() {
  Eigen::Matrix2cd m;
  m << kInvSqrt2, -kI * kInvSqrt2,
      -kInvSqrt2, -kI * kInvSqrt2;
  return m;
}

Eigen::Matrix4cd polarizing_beam_splitter() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 2) = 1.0;  // c_x' <- b_x'
  m(1, 1) = 1.0;  // c_y' <- a_y'
  m(2, 0) = 1.0;  // d_x' <- a_x'
  m(3, 3) = 1.0;  // d_y' <- b_y'
  return m;
}

Eigen::Matrix2cd beam_splitter(double transmittance, double phase) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw InvalidArgument("beam splitter transmittance must lie in [0, 1]");
  }
  const double t = std::sqrt(transmittance);
  const double r = std::sqrt(1.0 - transmittance);
  const std::complex<double> e = std::polar(1.0, phase);
  Eigen::Matrix2cd m;
  m << t, e * r,
      r, -e * t;
  return m;
}

Eigen::Matrix2cd epr_beam_splitter() { return beam_splitter(0.5, std::numbers::pi / 2.0); }

double unitarity_residual(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).norm();
}

}  // namespace stokes_lab::jones
