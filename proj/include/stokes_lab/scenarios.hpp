#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stokes_lab/entanglement.hpp"
#include "stokes_lab/linearized_optics.hpp"
#include "stokes_lab/scenario_config.hpp"
#include "stokes_lab/states.hpp"

namespace stokes_lab::scenarios {

// ---------------------------------------------------------------------------
// Measurement networks

/// Network readout next to the beam's own Stokes statistics for one observable.
struct ObservableComparison {
  int stokes_index = 0;
  double network_mean = 0.0;
  double network_variance = 0.0;
  double direct_mean = 0.0;
  double direct_variance = 0.0;

  /// max |network - direct| over mean and variance, relative to max(1, |direct|).
  double identity_deviation() const;
};

struct S0S1Readout {
  ObservableComparison s0;  // sum of the two detector counts
  ObservableComparison s1;  // difference
};

/// Direct detection of the x and y modes.
S0S1Readout run_s0_s1(const TwoModeFockState& state);
S0S1Readout run_s0_s1(const gaussian::GaussianBeamSet& beams, const std::string& beam = "a");

/// Rotation by 45 degrees (S2) or the quarter-wave-plate analyzer (S3), then the
/// polarizing beam splitter and difference detection of d_x' and c_y'. The Fock
/// state must fit the total-photon budget of its cutoff; its direct statistics
/// are taken on the part with n_x + n_y <= N, which is what the network maps.
ObservableComparison run_s2(const TwoModeFockState& state);
ObservableComparison run_s3(const TwoModeFockState& state);

/// Gaussian network on primary beam `beam`. Unused splitter ports are vacuum
/// unless the beam set already holds modes b.x', b.y'.
ObservableComparison run_s2(const gaussian::GaussianBeamSet& beams, const std::string& beam = "a");
ObservableComparison run_s3(const gaussian::GaussianBeamSet& beams, const std::string& beam = "a");

/// Beam set after the analyzer and the polarizing beam splitter of the S2 (j = 2)
/// or S3 (j = 3) network: modes c.x', c.y', d.x', d.y'.
gaussian::GaussianBeamSet analyzer_outputs(const gaussian::GaussianBeamSet& beams, int j, const std::string& beam = "a");

/// Primary beam "a" with the given amplitude and noise.
gaussian::GaussianBeamSet primary_beam(const BeamParams& params);

// ---------------------------------------------------------------------------
// Joint squeezing through the S3 analyzer

struct JointSqueezeRecord {
  double mean_n_x = 0.0;  // per output mode: d_x' and c_y'
  double mean_n_y = 0.0;
  double expected_n = 0.0;           // sinh^2 s
  double stokes_deviation = 0.0;     // fock: max |stats - two-mode squeezed oracle|
  double infidelity = 0.0;           // fock: 1 - |<TMSV|psi'>|^2
  double covariance_deviation = 0.0;  // gaussian: max |cov - two-mode squeezed pattern|
  int cutoff = 0;                     // fock only
};

/// Fock engine, alpha = 0: both polarization modes squeezed by s, mapped by the
/// S3 analyzer and compared with the two-mode squeezed vacuum of phase pi.
JointSqueezeRecord run_joint_squeeze_factorization(double s, std::optional<int> cutoff = std::nullopt);

/// Gaussian engine: output covariance of (d_x', c_y') against
/// [[c I, s Z], [s Z, c I]], c = cosh 2s, s = sinh 2s, Z = diag(1, -1).
JointSqueezeRecord run_joint_squeeze_factorization_gaussian(double s, double alpha);

// ---------------------------------------------------------------------------
// Two-beam interference

/// Two primary beams a and b of real amplitude alpha, a phase pi/2 on b, and the
/// 50/50 splitter into c and d.
gaussian::GaussianBeamSet epr_outputs(double alpha, const BeamVariances& a, const BeamVariances& b);

entanglement::StokesFluctuationStats epr_stats(const gaussian::GaussianBeamSet& outputs);

entanglement::EntanglementReport run_epr_experiment(double alpha, const BeamVariances& a, const BeamVariances& b);
entanglement::EntanglementReport run_epr_experiment(double v_plus, double v_minus, double alpha);

// ---------------------------------------------------------------------------
// Scenario runner

using Cell = std::variant<std::string, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct CheckOutcome {
  Expectation expectation;
  std::optional<double> actual;  // empty when the quantity does not exist
  bool passed = false;
};

struct ScenarioResult {
  std::string name;
  std::string kind;
  std::string engine;
  Table table;
  std::vector<std::pair<std::string, double>> quantities;  // in production order
  std::vector<CheckOutcome> checks;

  std::optional<double> quantity(const std::string& key) const;
  bool passed() const;
};

struct RunOptions {
  std::optional<int> fock_cutoff;    // replaces the truncation rule
  std::optional<double> tolerance;   // replaces the tol of value checks
};

/// Runs one scenario deterministically and evaluates its expectations.
ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

CheckOutcome evaluate(const Expectation& expectation, const ScenarioResult& result,
                      std::optional<double> tolerance_override = std::nullopt);

}  // namespace stokes_lab::scenarios
