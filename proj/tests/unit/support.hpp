#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Core>

#include "stokes_lab/fock_core.hpp"

namespace test_support {

inline double max_abs_diff(const stokes_lab::TwoModeFockState& a, const stokes_lab::TwoModeFockState& b) {
  double d = 0.0;
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

// Normalized random state supported on n_x + n_y <= max_total.
inline stokes_lab::TwoModeFockState random_state(std::mt19937& rng, int cutoff, int max_total) {
  std::normal_distribution<double> g;
  stokes_lab::TwoModeFockState s(cutoff);
  double norm = 0.0;
  for (int nx = 0; nx <= cutoff; ++nx) {
    for (int ny = 0; ny + nx <= max_total && ny <= cutoff; ++ny) {
      const std::complex<double> z{g(rng), g(rng)};
      s.set_amplitude(nx, ny, z);
      norm += std::norm(z);
    }
  }
  for (auto& a : s.amplitudes()) a /= std::sqrt(norm);
  return s;
}

inline Eigen::Matrix2cd random_unitary(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> t(0.0, 0.5 * M_PI);
  const double theta = t(rng), phi = u(rng), chi = u(rng), global = u(rng);
  const std::complex<double> i{0.0, 1.0};
  Eigen::Matrix2cd m;
  m << std::exp(i * phi) * std::cos(theta), std::exp(i * chi) * std::sin(theta),
      -std::exp(-i * chi) * std::sin(theta), std::exp(-i * phi) * std::cos(theta);
  return std::exp(i * global) * m;
}

}  // namespace test_support
