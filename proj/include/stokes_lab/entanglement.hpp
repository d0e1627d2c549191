#pragma once

#include <array>
#include <span>
#include <vector>

#include "stokes_lab/linearized_optics.hpp"

namespace stokes_lab::entanglement {

/// Criteria are strict inequalities. A verdict needs the bound to be beaten by
/// more than this relative margin, so rounding at an exact boundary (coherent
/// inputs) never reads as entanglement.
inline constexpr double kBoundaryMargin = 1e-12;

/// The two polarization modes of one output beam.
struct BeamModes {
  gaussian::ModeLabel x;
  gaussian::ModeLabel y;
};

/// Linearized Stokes fluctuation moments of beams C and D. Arrays are indexed by
/// j - 1 for the Stokes indices j = 1, 2, 3.
struct StokesFluctuationStats {
  std::array<double, 3> var_c{};
  std::array<double, 3> var_d{};
  std::array<double, 3> cross{};      // <dS_jD dS_jC>
  std::array<double, 3> mean_c{};
  std::array<double, 3> mean_d{};
  std::array<double, 3> var_sum{};    // V(S_jD + S_jC)
  std::array<double, 3> var_diff{};   // V(S_jD - S_jC)
  std::array<double, 3> coherent_norm{};  // V(S_jD + S_jC) with vacuum-level fluctuations
  // V_cond(S_jD | S_jC) as the variance of dS_jD - k dS_jC with k = cross / var_c.
  // Equal to conditional_variance(var_d, var_c, cross) but free of its
  // cancellation when both variances are large; NaN when var_c <= 0.
  std::array<double, 3> vcond{};

  /// Throws InvalidArgument on negative variances or a Cauchy-Schwarz violation beyond 1e-9.
  void validate() const;
};

/// Stokes fluctuations of C and D as linear forms in the quadrature fluctuations,
/// with moments taken through the joint covariance. Throws InvalidArgument for
/// missing modes.
StokesFluctuationStats fluctuation_stats(const gaussian::GaussianBeamSet& beams, const BeamModes& c,
                                         const BeamModes& d);

/// var_d - cross^2 / var_c. Throws DegenerateConditioning for var_c <= 0.
double conditional_variance(double var_d, double var_c, double cross);

struct EprResult {
  double vcond_1 = 0.0;  // V_cond(S1D | S1C)
  double vcond_3 = 0.0;  // V_cond(S3D | S3C)
  double product = 0.0;
  double bound = 0.0;    // <S2C>^2
  bool entangled = false;
};

/// Uses stats.vcond. Throws DegenerateConditioning when var_c <= 0 for S1 or S3.
EprResult epr_check(const StokesFluctuationStats& stats);

/// Normalized sum/difference variances of one conjugate pair (z, w).
struct DuanResult {
  int z = 1;
  int w = 3;
  double v_z = 0.0;
  double v_w = 0.0;
  int sign_z = 1;  // +1: S_zD + S_zC, -1: S_zD - S_zC
  int sign_w = 1;
  double sum = 0.0;
  bool nonseparable = false;              // sum < 2
  bool squeezed_state_entangled = false;  // v_z < 1 and v_w < 1
};

/// For each index the sign giving the smaller variance is used. Throws
/// InvalidArgument unless z != w and both lie in 1..3.
DuanResult duan_check(const StokesFluctuationStats& stats, int z = 1, int w = 3);

/// Serialized in field order.
struct EntanglementReport {
  double vcond_1 = 0.0;
  double vcond_3 = 0.0;
  double epr_product = 0.0;
  double epr_bound = 0.0;
  double duan_sum = 0.0;
  double v_s1 = 0.0;
  double v_s3 = 0.0;
  bool epr = false;
  bool duan_nonseparable = false;
  bool squeezed_state_entangled = false;
  int sign_s1 = 1;
  int sign_s3 = 1;
};

EntanglementReport evaluate(const StokesFluctuationStats& stats);

/// 4 alpha^2 v+ v- / (v+ + v-): conditional variance of the two-beam
/// interference when every input mode has the same quadrature variances.
double equal_squeezing_conditional_variance(double v_plus, double v_minus, double alpha);

struct ThresholdRow {
  double v_plus = 0.0;
  double v_minus = 0.0;
  double vcond = 0.0;  // closed form
  double ratio = 0.0;  // vcond / (2 alpha^2) = 2 v+ v- / (v+ + v-)
  bool epr = false;    // ratio < 1 (less the boundary margin)
};

/// EPR verdicts from the closed form over the product of the two grids, v+ major.
std::vector<ThresholdRow> three_db_threshold_scan(std::span<const double> v_plus, std::span<const double> v_minus,
                                                  double alpha);

}  // namespace stokes_lab::entanglement
