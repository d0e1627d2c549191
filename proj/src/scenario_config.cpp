#include "stokes_lab/scenario_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "stokes_lab/catalog.hpp"
#include "stokes_lab/errors.hpp"

namespace stokes_lab::scenarios {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) throw ConfigError(path, "expected a mapping");
}

void check_keys(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> allowed) {
  require_map(node, path);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(join(path, key), "unknown key");
    }
  }
}

YAML::Node required(const YAML::Node& node, const std::string& key, const std::string& path) {
  const YAML::Node child = node[key];
  if (!child) throw ConfigError(join(path, key), "missing required key");
  return child;
}

double as_double(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected a number");
  try {
    const double v = node.as<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
    return v;
  } catch (const YAML::BadConversion&) {
    throw ConfigError(path, "expected a number, got '" + node.Scalar() + "'");
  }
}

int as_int(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected an integer");
  try {
    return node.as<int>();
  } catch (const YAML::BadConversion&) {
    throw ConfigError(path, "expected an integer, got '" + node.Scalar() + "'");
  }
}

bool as_bool(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected true or false");
  try {
    return node.as<bool>();
  } catch (const YAML::BadConversion&) {
    throw ConfigError(path, "expected true or false, got '" + node.Scalar() + "'");
  }
}

std::string as_string(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected a string");
  return node.Scalar();
}

double number(const YAML::Node& node, const std::string& key, const std::string& path) {
  return as_double(required(node, key, path), join(path, key));
}

double number_or(const YAML::Node& node, const std::string& key, const std::string& path, double fallback) {
  return node[key] ? as_double(node[key], join(path, key)) : fallback;
}

std::string string_or(const YAML::Node& node, const std::string& key, const std::string& path,
                      const std::string& fallback) {
  return node[key] ? as_string(node[key], join(path, key)) : fallback;
}

std::vector<double> number_list(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence() || node.size() == 0) throw ConfigError(path, "expected a non-empty list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(as_double(node[i], item(path, i)));
  return out;
}

template <class F>
auto each(const YAML::Node& node, const std::string& path, F&& parse) {
  if (!node.IsSequence() || node.size() == 0) throw ConfigError(path, "expected a non-empty list");
  std::vector<decltype(parse(node[0], path))> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(parse(node[i], item(path, i)));
  return out;
}

Complex complex_value(const YAML::Node& node, const std::string& path) {
  if (node.IsSequence()) {
    if (node.size() != 2) throw ConfigError(path, "complex values are [re, im]");
    return {as_double(node[0], item(path, 0)), as_double(node[1], item(path, 1))};
  }
  return as_double(node, path);
}

void positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw ConfigError(path, "must be positive");
}

Engine parse_engine(const YAML::Node& node, const std::string& path) {
  const auto s = as_string(node, path);
  if (s == "fock") return Engine::fock;
  if (s == "gaussian") return Engine::gaussian;
  if (s == "both") return Engine::both;
  throw ConfigError(path, "engine must be fock, gaussian or both");
}

states::StateSpec parse_state(const YAML::Node& node, const std::string& path, bool allow_label) {
  require_map(node, path);
  const auto family = as_string(required(node, "family", path), join(path, "family"));
  states::StateSpec spec;
  if (family == "number") {
    check_keys(node, path, {"label", "family", "n"});
    spec = states::NumberState{as_int(required(node, "n", path), join(path, "n"))};
  } else if (family == "coherent") {
    check_keys(node, path, {"label", "family", "alpha_x", "alpha_y"});
    spec = states::CoherentState{complex_value(required(node, "alpha_x", path), join(path, "alpha_x")),
                                 complex_value(required(node, "alpha_y", path), join(path, "alpha_y"))};
  } else if (family == "entangled_photon") {
    check_keys(node, path, {"label", "family"});
    spec = states::EntangledPhoton{};
  } else if (family == "two_mode_squeezed_vacuum") {
    check_keys(node, path, {"label", "family", "s", "theta"});
    spec = states::TwoModeSqueezedVacuum{number(node, "s", path), number_or(node, "theta", path, 0.0)};
  } else if (family == "amplitude_squeezed_coherent") {
    check_keys(node, path, {"label", "family", "alpha", "s"});
    spec = states::AmplitudeSqueezedCoherent{number(node, "alpha", path), number(node, "s", path)};
  } else {
    throw ConfigError(join(path, "family"), "unknown state family '" + family + "'");
  }
  if (!allow_label && node["label"]) throw ConfigError(join(path, "label"), "unknown key");
  try {
    states::validate(spec);
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
  return spec;
}

LabeledState parse_labeled_state(const YAML::Node& node, const std::string& path) {
  auto spec = parse_state(node, path, true);
  return {string_or(node, "label", path, states::describe(spec)), spec};
}

// Either `s` (minimum uncertainty, v+ = e^{-2s}) or `v_plus` with optional
// `v_minus` (defaults to 1 / v_plus).
BeamVariances parse_noise(const YAML::Node& node, const std::string& path,
                          std::initializer_list<const char*> extra_keys = {}) {
  require_map(node, path);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    const bool known = key == "s" || key == "v_plus" || key == "v_minus" ||
                       std::any_of(extra_keys.begin(), extra_keys.end(), [&](const char* k) { return key == k; });
    if (!known) throw ConfigError(join(path, key), "unknown key");
  }
  BeamVariances v;
  if (node["s"]) {
    if (node["v_plus"] || node["v_minus"]) throw ConfigError(join(path, "s"), "give either s or v_plus/v_minus");
    const double s = number(node, "s", path);
    v = {std::exp(-2.0 * s), std::exp(2.0 * s)};
  } else {
    v.v_plus = number(node, "v_plus", path);
    positive(v.v_plus, join(path, "v_plus"));
    v.v_minus = number_or(node, "v_minus", path, 1.0 / v.v_plus);
    positive(v.v_minus, join(path, "v_minus"));
  }
  if (v.v_plus * v.v_minus < 1.0 - 1e-9) throw ConfigError(path, "quadrature variances violate v_plus * v_minus >= 1");
  return v;
}

BeamParams parse_beam(const YAML::Node& node, const std::string& path) {
  BeamParams b;
  b.noise = parse_noise(node, path, {"alpha"});
  b.alpha = number(node, "alpha", path);
  positive(b.alpha, join(path, "alpha"));
  return b;
}

Expectation parse_expectation(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"quantity", "value", "tol", "less_than", "greater_than"});
  Expectation e;
  e.quantity = as_string(required(node, "quantity", path), join(path, "quantity"));
  const int forms = (node["value"] ? 1 : 0) + (node["less_than"] ? 1 : 0) + (node["greater_than"] ? 1 : 0);
  if (forms != 1) throw ConfigError(path, "give exactly one of value, less_than, greater_than");
  if (node["value"]) {
    e.kind = Expectation::Kind::value;
    e.value = number(node, "value", path);
    e.tol = number(node, "tol", path);
    if (e.tol < 0.0) throw ConfigError(join(path, "tol"), "must be nonnegative");
  } else {
    if (node["tol"]) throw ConfigError(join(path, "tol"), "only used with value");
    e.kind = node["less_than"] ? Expectation::Kind::less_than : Expectation::Kind::greater_than;
    e.value = number(node, node["less_than"] ? "less_than" : "greater_than", path);
  }
  return e;
}

std::vector<LabeledState> parse_states(const YAML::Node& root) {
  auto out = each(required(root, "states", ""), "states", parse_labeled_state);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (out[i].label == out[j].label) throw ConfigError(item("states", i) + ".label", "duplicate label");
    }
  }
  return out;
}

template <class T>
void unique_labels(const std::vector<T>& items, const std::string& path) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (items[i].label == items[j].label) throw ConfigError(item(path, i) + ".label", "duplicate label");
    }
  }
}

ScenarioParams parse_state_table(const YAML::Node& root) {
  check_keys(root, "", {"name", "kind", "engine", "description", "expect", "states"});
  return StateTableParams{parse_states(root)};
}

ScenarioParams parse_algebra(const YAML::Node& root) {
  check_keys(root, "", {"name", "kind", "engine", "description", "expect", "cutoff", "guard", "states"});
  AlgebraParams p;
  p.cutoff = as_int(required(root, "cutoff", ""), "cutoff");
  p.guard = root["guard"] ? as_int(root["guard"], "guard") : 2;
  if (p.cutoff < 2) throw ConfigError("cutoff", "must be >= 2");
  if (p.guard < 2 || p.guard > p.cutoff) throw ConfigError("guard", "must lie in [2, cutoff]");
  p.states = parse_states(root);
  return p;
}

ScenarioParams parse_measurement(const YAML::Node& root) {
  check_keys(root, "", {"name", "kind", "engine", "description", "expect", "network", "cases", "port_probe"});
  MeasurementParams p;
  const auto network = as_string(required(root, "network", ""), "network");
  if (network == "s0_s1") {
    p.network = Network::s0_s1;
  } else if (network == "s2") {
    p.network = Network::s2;
  } else if (network == "s3") {
    p.network = Network::s3;
  } else {
    throw ConfigError("network", "must be s0_s1, s2 or s3");
  }
  if (root["port_probe"]) p.port_probe = parse_noise(root["port_probe"], "port_probe");
  p.cases = each(required(root, "cases", ""), "cases", [](const YAML::Node& n, const std::string& path) {
    check_keys(n, path, {"label", "engine", "state", "beam"});
    MeasurementCase c;
    c.label = as_string(required(n, "label", path), join(path, "label"));
    c.engine = parse_engine(required(n, "engine", path), join(path, "engine"));
    if (c.engine == Engine::fock) {
      if (n["beam"]) throw ConfigError(join(path, "beam"), "fock cases take a state");
      c.state = parse_state(required(n, "state", path), join(path, "state"), false);
    } else if (c.engine == Engine::gaussian) {
      if (n["state"]) throw ConfigError(join(path, "state"), "gaussian cases take a beam");
      c.beam = parse_beam(required(n, "beam", path), join(path, "beam"));
    } else {
      throw ConfigError(join(path, "engine"), "each case runs on one engine");
    }
    return c;
  });
  unique_labels(p.cases, "cases");
  return p;
}

ScenarioParams parse_joint_squeeze(const YAML::Node& root) {
  check_keys(root, "", {"name", "kind", "engine", "description", "expect", "cases"});
  JointSqueezeParams p;
  p.cases = each(required(root, "cases", ""), "cases", [](const YAML::Node& n, const std::string& path) {
    check_keys(n, path, {"label", "engine", "s", "alpha"});
    JointSqueezeCase c;
    c.label = as_string(required(n, "label", path), join(path, "label"));
    c.engine = parse_engine(required(n, "engine", path), join(path, "engine"));
    if (c.engine == Engine::both) throw ConfigError(join(path, "engine"), "each case runs on one engine");
    c.s = number(n, "s", path);
    if (c.s < 0.0) throw ConfigError(join(path, "s"), "must be >= 0");
    c.alpha = number_or(n, "alpha", path, 0.0);
    if (c.engine == Engine::fock && c.alpha != 0.0) {
      throw ConfigError(join(path, "alpha"), "the fock factorization check runs at alpha = 0");
    }
    if (c.engine == Engine::gaussian) positive(c.alpha, join(path, "alpha"));
    return c;
  });
  unique_labels(p.cases, "cases");
  return p;
}

ScenarioParams parse_cross_engine(const YAML::Node& root) {
  check_keys(root, "", {"name", "kind", "engine", "description", "expect", "bound_factor", "cases"});
  CrossEngineParams p;
  p.bound_factor = number_or(root, "bound_factor", "", 3.0);
  positive(p.bound_factor, "bound_factor");
  p.cases = each(required(root, "cases", ""), "cases", [](const YAML::Node& n, const std::string& path) {
    check_keys(n, path, {"label", "alpha", "s"});
    CrossEngineCase c{as_string(required(n, "label", path), join(path, "label")), number(n, "alpha", path),
                      number(n, "s", path)};
    positive(c.alpha, join(path, "alpha"));
    positive(c.s, join(path, "s"));
    return c;
  });
  unique_labels(p.cases, "cases");
  return p;
}

ScenarioParams parse_epr(const YAML::Node& root) {
  check_keys(root, "", {"name", "kind", "engine", "description", "expect", "cases", "grid"});
  EprParams p;
  if (root["cases"]) {
    p.cases = each(root["cases"], "cases", [](const YAML::Node& n, const std::string& path) {
      check_keys(n, path, {"label", "alpha", "a", "b"});
      EprCase c;
      c.label = as_string(required(n, "label", path), join(path, "label"));
      c.alpha = number(n, "alpha", path);
      positive(c.alpha, join(path, "alpha"));
      c.a = parse_noise(required(n, "a", path), join(path, "a"));
      c.b = parse_noise(required(n, "b", path), join(path, "b"));
      return c;
    });
    unique_labels(p.cases, "cases");
  }
  if (root["grid"]) {
    const auto g = root["grid"];
    check_keys(g, "grid", {"alpha", "v_plus", "v_minus"});
    EprGrid grid;
    grid.alpha = number(g, "alpha", "grid");
    positive(grid.alpha, "grid.alpha");
    grid.v_plus = number_list(required(g, "v_plus", "grid"), "grid.v_plus");
    grid.v_minus = number_list(required(g, "v_minus", "grid"), "grid.v_minus");
    for (std::size_t i = 0; i < grid.v_plus.size(); ++i) positive(grid.v_plus[i], item("grid.v_plus", i));
    for (std::size_t i = 0; i < grid.v_minus.size(); ++i) positive(grid.v_minus[i], item("grid.v_minus", i));
    p.grid = grid;
  }
  if (p.cases.empty() && !p.grid) throw ConfigError("cases", "an epr_experiment needs cases or a grid");
  return p;
}

ScenarioParams parse_threshold(const YAML::Node& root) {
  check_keys(root, "", {"name", "kind", "engine", "description", "expect", "alpha", "grids", "points"});
  ThresholdParams p;
  p.alpha = number(root, "alpha", "");
  positive(p.alpha, "alpha");
  p.grids = each(required(root, "grids", ""), "grids", [](const YAML::Node& n, const std::string& path) {
    check_keys(n, path, {"v_plus", "v_minus", "minimum_uncertainty"});
    ThresholdGrid g;
    g.v_plus = number_list(required(n, "v_plus", path), join(path, "v_plus"));
    if (n["v_minus"]) g.v_minus = number_list(n["v_minus"], join(path, "v_minus"));
    g.minimum_uncertainty = n["minimum_uncertainty"] ? as_bool(n["minimum_uncertainty"], join(path, "minimum_uncertainty"))
                                                     : false;
    if (g.v_minus.empty() && !g.minimum_uncertainty) {
      throw ConfigError(join(path, "v_minus"), "missing required key");
    }
    for (std::size_t i = 0; i < g.v_plus.size(); ++i) positive(g.v_plus[i], item(join(path, "v_plus"), i));
    for (std::size_t i = 0; i < g.v_minus.size(); ++i) positive(g.v_minus[i], item(join(path, "v_minus"), i));
    return g;
  });
  if (root["points"]) {
    p.points = each(root["points"], "points", [](const YAML::Node& n, const std::string& path) {
      check_keys(n, path, {"label", "v_plus", "v_minus"});
      ThresholdPoint pt;
      pt.label = as_string(required(n, "label", path), join(path, "label"));
      pt.v_plus = number(n, "v_plus", path);
      positive(pt.v_plus, join(path, "v_plus"));
      pt.v_minus = number_or(n, "v_minus", path, 1.0 / pt.v_plus);
      positive(pt.v_minus, join(path, "v_minus"));
      return pt;
    });
    unique_labels(p.points, "points");
  }
  return p;
}

struct KindInfo {
  const char* name;
  ScenarioParams (*parse)(const YAML::Node&);
  Engine engine;
};

constexpr KindInfo kKinds[] = {
    {"state_table", parse_state_table, Engine::fock},
    {"algebra", parse_algebra, Engine::fock},
    {"measurement", parse_measurement, Engine::both},
    {"joint_squeeze", parse_joint_squeeze, Engine::both},
    {"cross_engine", parse_cross_engine, Engine::both},
    {"epr_experiment", parse_epr, Engine::gaussian},
    {"threshold_scan", parse_threshold, Engine::gaussian},
};

template <class Cases>
Engine engine_of_cases(const Cases& cases) {
  bool fock = false, gauss = false;
  for (const auto& c : cases) (c.engine == Engine::fock ? fock : gauss) = true;
  return fock && gauss ? Engine::both : (fock ? Engine::fock : Engine::gaussian);
}

Engine natural_engine(const ScenarioParams& params, Engine fallback) {
  if (const auto* m = std::get_if<MeasurementParams>(&params)) return engine_of_cases(m->cases);
  if (const auto* j = std::get_if<JointSqueezeParams>(&params)) return engine_of_cases(j->cases);
  return fallback;
}

}  // namespace

std::string engine_name(Engine engine) {
  switch (engine) {
    case Engine::fock: return "fock";
    case Engine::gaussian: return "gaussian";
    case Engine::both: return "both";
  }
  return "?";
}

std::string kind_name(const ScenarioParams& params) { return kKinds[params.index()].name; }

ScenarioConfig parse_scenario(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    std::ostringstream msg;
    msg << source << ": YAML syntax error at line " << e.mark.line + 1 << ": " << e.msg;
    throw ConfigError("", msg.str());
  }
  if (!root.IsMap()) throw ConfigError("", source + ": scenario must be a mapping");

  ScenarioConfig cfg;
  cfg.name = as_string(required(root, "name", ""), "name");
  cfg.description = string_or(root, "description", "", "");
  const auto kind = as_string(required(root, "kind", ""), "kind");
  const auto info = std::find_if(std::begin(kKinds), std::end(kKinds), [&](const KindInfo& k) { return kind == k.name; });
  if (info == std::end(kKinds)) throw ConfigError("kind", "unknown scenario kind '" + kind + "'");
  cfg.params = info->parse(root);

  const Engine natural = natural_engine(cfg.params, info->engine);
  cfg.engine = natural;
  if (root["engine"]) {
    cfg.engine = parse_engine(root["engine"], "engine");
    if (cfg.engine != natural) {
      throw ConfigError("engine", "scenario runs on '" + engine_name(natural) + "', not '" + engine_name(cfg.engine) + "'");
    }
  }
  if (root["expect"]) cfg.expect = each(root["expect"], "expect", parse_expectation);
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  if (const auto entry = find_catalog_entry(name_or_path)) return parse_scenario(entry->body, entry->name);
  return load_scenario_file(name_or_path);
}

std::optional<CatalogEntry> find_catalog_entry(std::string_view name) {
  for (const auto& e : bundled_catalog()) {
    if (name == e.name) return e;
  }
  return std::nullopt;
}

}  // namespace stokes_lab::scenarios
