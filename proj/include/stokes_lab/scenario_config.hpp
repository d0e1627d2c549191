#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stokes_lab/states.hpp"

namespace stokes_lab::scenarios {

enum class Engine { fock, gaussian, both };

/// Quadrature variances of one polarization mode pair (x and y share them).
struct BeamVariances {
  double v_plus = 1.0;
  double v_minus = 1.0;
};

/// Bright primary beam: real amplitude alpha on x and y, independent quadrature noise.
struct BeamParams {
  double alpha = 0.0;
  BeamVariances noise;
};

struct LabeledState {
  std::string label;
  states::StateSpec state;
};

struct Expectation {
  enum class Kind { value, less_than, greater_than };
  std::string quantity;
  Kind kind = Kind::value;
  double value = 0.0;
  double tol = 0.0;
};

struct StateTableParams {
  std::vector<LabeledState> states;
};

struct AlgebraParams {
  int cutoff = 8;
  int guard = 2;
  std::vector<LabeledState> states;
};

enum class Network { s0_s1, s2, s3 };

struct MeasurementCase {
  std::string label;
  Engine engine = Engine::fock;
  std::optional<states::StateSpec> state;  // fock
  std::optional<BeamParams> beam;          // gaussian
};

struct MeasurementParams {
  Network network = Network::s0_s1;
  std::vector<MeasurementCase> cases;
  BeamVariances port_probe{4.0, 0.25};  // noise injected on the unused ports
};

struct JointSqueezeCase {
  std::string label;
  Engine engine = Engine::fock;
  double s = 0.0;
  double alpha = 0.0;
};

struct JointSqueezeParams {
  std::vector<JointSqueezeCase> cases;
};

struct CrossEngineCase {
  std::string label;
  double alpha = 0.0;
  double s = 0.0;
};

struct CrossEngineParams {
  double bound_factor = 3.0;
  std::vector<CrossEngineCase> cases;
};

struct EprCase {
  std::string label;
  double alpha = 1.0;
  BeamVariances a;
  BeamVariances b;
};

/// Equal squeezing on all four input modes over a grid of (v+, v-). Pairs with
/// v+ v- < 1 are skipped.
struct EprGrid {
  double alpha = 1.0;
  std::vector<double> v_plus;
  std::vector<double> v_minus;
};

struct EprParams {
  std::vector<EprCase> cases;
  std::optional<EprGrid> grid;
};

struct ThresholdGrid {
  std::vector<double> v_plus;
  std::vector<double> v_minus;
  bool minimum_uncertainty = false;  // also test v- = 1/v+ for every v+
};

struct ThresholdPoint {
  std::string label;
  double v_plus = 1.0;
  double v_minus = 1.0;  // 1 / v_plus when omitted
};

struct ThresholdParams {
  double alpha = 1.0;
  std::vector<ThresholdGrid> grids;
  std::vector<ThresholdPoint> points;
};

using ScenarioParams = std::variant<StateTableParams, AlgebraParams, MeasurementParams, JointSqueezeParams,
                                    CrossEngineParams, EprParams, ThresholdParams>;

struct ScenarioConfig {
  std::string name;
  std::string description;
  Engine engine = Engine::fock;
  ScenarioParams params;
  std::vector<Expectation> expect;
};

/// Parses a scenario document. Throws ConfigError naming the offending key.
ScenarioConfig parse_scenario(const std::string& text, const std::string& source = "<string>");

/// Reads and parses a scenario file; an unreadable file is a ConfigError.
ScenarioConfig load_scenario_file(const std::string& path);

/// Looks `name_or_path` up in the bundled catalog, otherwise reads it as a file.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

std::string kind_name(const ScenarioParams& params);
std::string engine_name(Engine engine);

}  // namespace stokes_lab::scenarios
