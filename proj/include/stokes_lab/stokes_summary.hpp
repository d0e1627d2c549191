#pragma once

#include <array>

namespace stokes_lab {

/// Means and variances of the four Stokes operators.
///
/// Index j of `mean` / `variance` is the Stokes index (0..3). `second_moment`
/// holds <S1^2>, <S2^2>, <S3^2>. The Poincare fields are the expectation values
/// of the two sides of S1^2 + S2^2 + S3^2 = S0^2 + 2 S0.
struct StokesSummary {
  std::array<double, 4> mean{};
  std::array<double, 4> variance{};
  std::array<double, 3> second_moment{};
  double poincare_lhs = 0.0;
  double poincare_rhs = 0.0;

  /// V2 V3 - <S1>^2, V3 V1 - <S2>^2, V1 V2 - <S3>^2. Nonnegative for physical states.
  std::array<double, 3> uncertainty_slack() const {
    return {variance[2] * variance[3] - mean[1] * mean[1],
            variance[3] * variance[1] - mean[2] * mean[2],
            variance[1] * variance[2] - mean[3] * mean[3]};
  }

  double poincare_residual() const { return poincare_lhs - poincare_rhs; }
};

}  // namespace stokes_lab
