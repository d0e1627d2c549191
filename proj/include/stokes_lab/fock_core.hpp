#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "stokes_lab/stokes_summary.hpp"

namespace stokes_lab {

using Complex = std::complex<double>;

enum class Mode { x, y };
enum class Ladder { create, annihilate };

/// Norm lost to truncation above which a state is no longer trusted.
inline constexpr double kLeakTolerance = 1e-8;

/// Pure state of the two polarization modes on the truncated basis |n_x, n_y>,
/// 0 <= n_x, n_y <= cutoff. Amplitudes are stored row-major in n_x:
/// index = n_x * (cutoff + 1) + n_y.
///
/// `norm_defect` accumulates the squared norm discarded by truncation. Ladder
/// actions do not renormalize, so for non-unitary pipelines the defect is a
/// bookkeeping quantity rather than 1 - <psi|psi>.
class TwoModeFockState {
 public:
  /// Zero vector. Throws InvalidArgument for cutoff < 1.
  explicit TwoModeFockState(int cutoff);

  static TwoModeFockState basis(int cutoff, int n_x, int n_y);

  int cutoff() const noexcept { return cutoff_; }
  int levels() const noexcept { return cutoff_ + 1; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }

  std::size_t index(int n_x, int n_y) const noexcept {
    return static_cast<std::size_t>(n_x) * static_cast<std::size_t>(levels()) +
           static_cast<std::size_t>(n_y);
  }

  Complex amplitude(int n_x, int n_y) const { return amplitudes_[index(n_x, n_y)]; }
  void set_amplitude(int n_x, int n_y, Complex value) { amplitudes_[index(n_x, n_y)] = value; }

  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::span<Complex> amplitudes() noexcept { return amplitudes_; }

  double norm_defect() const noexcept { return norm_defect_; }
  void add_norm_defect(double weight) noexcept { norm_defect_ += weight; }

  double squared_norm() const noexcept;

 private:
  int cutoff_;
  std::vector<Complex> amplitudes_;
  double norm_defect_ = 0.0;
};

TwoModeFockState vacuum(int cutoff);

/// Copy `state` onto a grid with a different cutoff. Amplitude that does not fit
/// is dropped into norm_defect.
TwoModeFockState resize(const TwoModeFockState& state, int cutoff);

/// <a|b>, with both vectors viewed in the larger of the two grids.
Complex inner_product(const TwoModeFockState& a, const TwoModeFockState& b);

/// Single creation or annihilation operator. Creation out of level N is discarded
/// and the squared magnitude of the source amplitude is added to norm_defect.
TwoModeFockState apply_ladder(const TwoModeFockState& state, Mode mode, Ladder kind);

// ---------------------------------------------------------------------------
// Generators

struct LadderOp {
  Mode mode;
  Ladder kind;
  friend bool operator==(const LadderOp&, const LadderOp&) = default;
};

/// coefficient * ops[0] * ops[1] * ... (the last operator acts first).
struct GeneratorTerm {
  Complex coefficient;
  std::vector<LadderOp> ops;
};

/// Polynomial in the ladder operators, used as the exponent of a unitary.
class Generator {
 public:
  Generator() = default;

  Generator& add(Complex coefficient, std::vector<LadderOp> ops);
  Generator& operator+=(const Generator& other);
  Generator operator-() const;
  Generator scaled(double factor) const;

  /// alpha a^dagger - alpha^* a
  static Generator displacement(Mode mode, Complex alpha);
  /// (zeta^* a^2 - zeta a^dagger^2) / 2
  static Generator single_mode_squeeze(Mode mode, Complex zeta);
  /// zeta^* a_x a_y - zeta a_x^dagger a_y^dagger
  static Generator two_mode_squeeze(Complex zeta);
  /// sum_jk h(j,k) a_j^dagger a_k, mode 0 = x, mode 1 = y.
  static Generator passive(const Eigen::Matrix2cd& h);

  const std::vector<GeneratorTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// Upper bound on the operator norm of the generator restricted to levels <= cutoff.
  double norm_bound(int cutoff) const;

  /// Largest coefficient mismatch between G and -G^dagger after canonical
  /// ordering; zero for an anti-Hermitian generator.
  double anti_hermiticity_residual() const;

 private:
  std::vector<GeneratorTerm> terms_;
};

/// G|psi>, with components pushed above the cutoff discarded (the generator is
/// applied in its projected form).
TwoModeFockState apply_generator(const TwoModeFockState& state, const Generator& generator);

struct ExponentialOptions {
  double piece_norm = 0.5;       // split until each piece's norm bound is below this
  double increment_tol = 1e-14;  // Taylor stopping criterion on the increment norm
  int max_order = 64;
};

/// exp(G)|psi> by splitting G into 2^k pieces and summing a Taylor series per
/// piece. The projected generator is anti-Hermitian, so the result is exactly
/// unitary on the truncated space. Throws InvalidArgument when G is not
/// anti-Hermitian, NumericalFailure when a piece does not converge.
TwoModeFockState apply_generator_exponential(const TwoModeFockState& state,
                                             const Generator& generator,
                                             const ExponentialOptions& options = {});

// ---------------------------------------------------------------------------
// Stokes statistics

/// S_j |psi> for j in 0..3, evaluated on a grid one level larger so that no
/// component of the result is lost.
TwoModeFockState apply_stokes(const TwoModeFockState& state, int j);

/// Means, second moments and variances of S0..S3. Throws TruncationLeak when
/// norm_defect >= kLeakTolerance.
StokesSummary stokes_summary(const TwoModeFockState& state);

/// <S1^2 + S2^2 + S3^2> - <S0^2 + 2 S0>.
double poincare_residual(const TwoModeFockState& state);

double mean_photon_number(const TwoModeFockState& state, Mode mode);

/// Mean and variance of n_x + sign * n_y from the photon-number distribution.
struct CountingStatistics {
  double mean = 0.0;
  double variance = 0.0;
};
CountingStatistics photon_counting(const TwoModeFockState& state, int sign);

/// Quadratures X+ = a + a^dagger and X- = i(a^dagger - a) of one mode.
struct QuadratureMoments {
  double mean_plus = 0.0;
  double mean_minus = 0.0;
  double variance_plus = 0.0;
  double variance_minus = 0.0;
};
QuadratureMoments quadrature_moments(const TwoModeFockState& state, Mode mode);

enum class StokesIdentity {
  s2_s3,  // [S2, S3] = 2i S1
  s3_s1,  // [S3, S1] = 2i S2
  s1_s2,  // [S1, S2] = 2i S3
  s0_s1,  // [S0, S1] = 0
  s0_s2,
  s0_s3,
};

/// Max-norm of ([A, B] - expected) |basis> over all basis states with
/// n_x + n_y <= cutoff - guard, operators applied in the truncated space.
/// Throws InvalidArgument for guard < 2 or guard > cutoff.
double commutator_residual(int cutoff, int guard, StokesIdentity identity);

// ---------------------------------------------------------------------------
// Schwinger numbers

/// n / 2 stored exactly.
struct HalfInteger {
  int twice = 0;
  double value() const noexcept { return 0.5 * twice; }
  friend bool operator==(const HalfInteger&, const HalfInteger&) = default;
};

struct SchwingerNumbers {
  HalfInteger l;
  HalfInteger m;
};

/// l = (n_x + n_y)/2, m = (n_x - n_y)/2.
SchwingerNumbers schwinger_lm(int n_x, int n_y);

// ---------------------------------------------------------------------------
// Passive mode maps

/// Unitary 2x2 map on (a_x, a_y): a' = U a.
class ModeMap {
 public:
  /// Throws InvalidArgument when the unitarity residual exceeds 1e-12.
  explicit ModeMap(const Eigen::Matrix2cd& matrix);

  static ModeMap identity();
  static ModeMap rotation45();
  static ModeMap s3_analyzer();

  const Eigen::Matrix2cd& matrix() const noexcept { return matrix_; }
  double unitarity_residual() const noexcept { return residual_; }

  /// Anti-Hermitian H with exp(H) = U (principal logarithm).
  Eigen::Matrix2cd logarithm() const;

 private:
  Eigen::Matrix2cd matrix_;
  double residual_;
};

/// Keeps the components with n_x + n_y <= cutoff; the rest goes into norm_defect.
TwoModeFockState confine_total(const TwoModeFockState& state);

/// Re-expresses the state in the primed mode basis: the returned amplitudes are
/// coefficients of |n_x', n_y'>. Only the subspace n_x + n_y <= cutoff is closed
/// under the map; amplitude outside it is discarded into norm_defect first.
TwoModeFockState apply_mode_map(const TwoModeFockState& state, const ModeMap& map);

}  // namespace stokes_lab
