#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stokes_lab/stokes_summary.hpp"

namespace stokes_lab::gaussian {

using Complex = std::complex<double>;

/// Optical mode: a beam identifier and a polarization label ("x", "y", "x'", ...).
struct ModeLabel {
  std::string beam;
  std::string polarization;

  std::string str() const { return beam + "." + polarization; }
  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

/// Bright-beam state: one classical amplitude per mode plus the symmetrized
/// covariance of the quadrature fluctuations, ordered (X+_1, X-_1, X+_2, X-_2, ...)
/// and normalized so that vacuum is the identity.
///
/// The set also keeps the covariance of the modes as they were added and the
/// accumulated quadrature transfer matrix T, with covariance() = T C_in T^T.
/// Variances of linear forms are evaluated in input coordinates, which keeps
/// strongly squeezed and anti-squeezed contributions from mixing rounding errors.
class GaussianBeamSet {
 public:
  GaussianBeamSet() = default;

  /// Appends a mode uncorrelated with the existing ones. Throws InvalidArgument
  /// for duplicate labels or a covariance that is not a valid single-mode covariance.
  void add_mode(const ModeLabel& label, Complex amplitude,
                const Eigen::Matrix2d& covariance = Eigen::Matrix2d::Identity());

  std::size_t mode_count() const noexcept { return labels_.size(); }
  const std::vector<ModeLabel>& modes() const noexcept { return labels_; }
  std::optional<std::size_t> find(const ModeLabel& label) const;
  /// Throws InvalidArgument for unknown labels.
  std::size_t index_of(const ModeLabel& label) const;

  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  const Eigen::MatrixXd& covariance() const noexcept { return covariance_; }
  const Eigen::MatrixXd& input_covariance() const noexcept { return input_covariance_; }
  const Eigen::MatrixXd& transfer() const noexcept { return transfer_; }

  Complex amplitude(const ModeLabel& label) const { return amplitudes_(static_cast<Eigen::Index>(index_of(label))); }
  Eigen::Matrix2d mode_covariance(const ModeLabel& label) const;
  /// Covariance block of the listed modes, in the listed order.
  Eigen::MatrixXd covariance_of(std::span<const ModeLabel> labels) const;

  /// Sum of |amplitude|^2 over all modes.
  double classical_flux() const { return amplitudes_.squaredNorm(); }

  /// Checks symmetry (1e-12) and positive semidefiniteness (1e-12) of the covariance.
  void validate() const;

  // Used by apply_element: new labels and amplitudes, and `step` composed onto the transfer matrix.
  void transform(std::vector<ModeLabel> labels, Eigen::VectorXcd amplitudes, const Eigen::MatrixXd& step);

 private:
  std::vector<ModeLabel> labels_;
  Eigen::VectorXcd amplitudes_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd input_covariance_;
  Eigen::MatrixXd transfer_;
};

/// Primary beam `beam` with modes (beam.x, beam.y), both of real amplitude alpha
/// and diagonal quadrature variances (v_plus, v_minus), no cross-correlations.
/// Throws InvalidArgument for alpha <= 0, nonpositive variances, or v_plus v_minus < 1.
GaussianBeamSet from_squeezed_beam(double alpha, double v_plus, double v_minus, const std::string& beam = "a");

/// A passive linear optical element given by its mode matrix.
class LinearElement {
 public:
  enum class Kind { identity, rotation, quarter_wave_plate, s3_analyzer, pbs, beam_splitter };

  static LinearElement identity(int arity);
  static LinearElement rotation(double angle);
  static LinearElement rotation45();
  static LinearElement quarter_wave_plate();
  static LinearElement s3_analyzer();
  static LinearElement polarizing_beam_splitter();
  static LinearElement beam_splitter(double transmittance, double phase);
  static LinearElement epr_beam_splitter();

  Kind kind() const noexcept { return kind_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  int arity() const noexcept { return static_cast<int>(matrix_.rows()); }
  /// Beam splitters may have unused input ports; those are filled with vacuum.
  bool accepts_vacuum_ports() const noexcept { return kind_ == Kind::pbs || kind_ == Kind::beam_splitter; }

 private:
  LinearElement(Kind kind, Eigen::MatrixXcd matrix);
  Kind kind_;
  Eigen::MatrixXcd matrix_;
};

/// Real 2n x 2n action on (X+, X-) pairs induced by a mode matrix U = A + iB:
/// blocks [[A, -B], [B, A]].
Eigen::MatrixXd quadrature_action(const Eigen::MatrixXcd& mode_matrix);

/// Applies `element` to `targets` (in order). The transformed modes are renamed
/// to `outputs` when given. Missing targets are added as vacuum for beam
/// splitters; otherwise an unknown mode throws InvalidArgument.
GaussianBeamSet apply_element(const GaussianBeamSet& beams, const LinearElement& element,
                              std::span<const ModeLabel> targets, std::span<const ModeLabel> outputs = {});

/// First-order expansion of an observable sum_jk K_jk a_j^dagger a_k:
/// mean = alpha^dagger K alpha, fluctuation = gradient . (quadrature fluctuations).
struct LinearForm {
  double mean = 0.0;
  Eigen::VectorXd gradient;  // over all quadratures of the beam set
};

/// Linearizes the bilinear observable with Hermitian kernel K on the listed modes.
LinearForm linearize(const GaussianBeamSet& beams, std::span<const ModeLabel> modes, const Eigen::MatrixXcd& kernel);

/// Linearized S_j (j = 0..3) of the polarization pair (x, y).
LinearForm linearized_stokes(const GaussianBeamSet& beams, const ModeLabel& x, const ModeLabel& y, int j);

double variance(const GaussianBeamSet& beams, const LinearForm& f);
double covariance(const GaussianBeamSet& beams, const LinearForm& f, const LinearForm& g);

/// Stokes statistics of a beam whose two polarization modes carry equal real
/// amplitudes; variances include any cross-mode correlations. The Poincare fields
/// are first-order quantities and do not satisfy the exact identity. Throws
/// UnsupportedFrame otherwise.
StokesSummary stokes_linearized(const GaussianBeamSet& beams, const ModeLabel& x, const ModeLabel& y);
StokesSummary stokes_linearized(const GaussianBeamSet& beams, const std::string& beam);

struct DetectionStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Linearized photocount difference n_bright - n_dark. Dark modes contribute nothing at first order.
DetectionStats detect_difference(const GaussianBeamSet& beams, const ModeLabel& bright, const ModeLabel& dark);
/// Linearized photocount sum n_first + n_second.
DetectionStats detect_sum(const GaussianBeamSet& beams, const ModeLabel& first, const ModeLabel& second);

/// sinh(s) / alpha; the linearization is trustworthy when this is small.
double linearization_validity(double alpha, double s);

}  // namespace stokes_lab::gaussian
