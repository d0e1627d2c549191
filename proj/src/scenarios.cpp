#include "stokes_lab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "stokes_lab/errors.hpp"

namespace stokes_lab::scenarios {

using gaussian::GaussianBeamSet;
using gaussian::LinearElement;
using gaussian::ModeLabel;

namespace {

const std::string kPrimeX = "x'";
const std::string kPrimeY = "y'";

double relative_gap(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

ObservableComparison compare(int j, double net_mean, double net_var, const StokesSummary& direct) {
  return {j, net_mean, net_var, direct.mean[static_cast<std::size_t>(j)],
          direct.variance[static_cast<std::size_t>(j)]};
}

void require_closed(const TwoModeFockState& mapped) {
  if (!(mapped.norm_defect() < kLeakTolerance)) {
    std::ostringstream msg;
    msg << "mode map lost norm " << mapped.norm_defect() << " at cutoff " << mapped.cutoff()
        << "; build the state with the total photon-number budget";
    throw TruncationLeak(msg.str(), mapped.norm_defect());
  }
}

// The network acts on the photon-number triangle n_x + n_y <= N, so the direct
// statistics are taken on the same confined state.
ObservableComparison run_fock_network(const TwoModeFockState& state, const ModeMap& map, int j) {
  const TwoModeFockState confined = confine_total(state);
  const StokesSummary direct = stokes_summary(confined);
  const TwoModeFockState mapped = apply_mode_map(confined, map);
  require_closed(mapped);
  // x' is the mode reaching detector d_x', y' the one reaching c_y'.
  const CountingStatistics counts = photon_counting(mapped, -1);
  return compare(j, counts.mean, counts.variance, direct);
}

ObservableComparison run_gaussian_network(const GaussianBeamSet& beams, int j, const std::string& beam) {
  const StokesSummary direct = gaussian::stokes_linearized(beams, beam);
  const GaussianBeamSet out = analyzer_outputs(beams, j, beam);
  const auto counts = gaussian::detect_difference(out, {"d", kPrimeX}, {"c", kPrimeY});
  return compare(j, counts.mean, counts.variance, direct);
}

Eigen::Matrix2d noise_matrix(const BeamVariances& v) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = v.v_plus;
  m(1, 1) = v.v_minus;
  return m;
}

// ---------------------------------------------------------------------------
// Result assembly

class Builder {
 public:
  explicit Builder(ScenarioResult& r) : r_(r) {}

  void columns(std::vector<std::string> cols) { r_.table.columns = std::move(cols); }
  void row(std::vector<Cell> cells) { r_.table.rows.push_back(std::move(cells)); }
  void put(const std::string& key, double value) { r_.quantities.emplace_back(key, value); }
  void put(const std::string& key, bool value) { put(key, value ? 1.0 : 0.0); }

 private:
  ScenarioResult& r_;
};

Cell flag(bool b) { return std::string(b ? "true" : "false"); }

std::string stokes_name(int j) { return "S" + std::to_string(j); }

int fock_cutoff(const states::StateSpec& spec, states::TruncationBudget budget, const RunOptions& options) {
  return options.fock_cutoff ? *options.fock_cutoff : states::required_cutoff(spec, budget);
}

std::string squeezed_list(const std::set<int>& js) {
  if (js.empty()) return "-";
  std::string out;
  for (int j : js) out += (out.empty() ? "" : " ") + stokes_name(j);
  return out;
}

void run_state_table(const StateTableParams& p, const RunOptions& opt, Builder& b) {
  b.columns({"state", "mean_S0", "mean_S1", "mean_S2", "mean_S3", "var_S0", "var_S1", "var_S2", "var_S3", "cutoff",
             "oracle_dev", "squeezed"});
  for (const auto& ls : p.states) {
    const int cutoff = fock_cutoff(ls.state, states::TruncationBudget::per_mode, opt);
    const StokesSummary s = stokes_summary(states::build(ls.state, cutoff));
    const StokesSummary o = states::oracle_summary(ls.state);
    double dev = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      dev = std::max({dev, std::abs(s.mean[j] - o.mean[j]), std::abs(s.variance[j] - o.variance[j])});
    }
    const auto squeezed = states::is_polarization_squeezed(s, 1e-9 * std::max(1.0, s.mean[0]));
    std::vector<Cell> row{ls.label};
    for (int j = 0; j < 4; ++j) {
      row.emplace_back(s.mean[static_cast<std::size_t>(j)]);
      b.put(ls.label + ".mean_" + stokes_name(j), s.mean[static_cast<std::size_t>(j)]);
    }
    for (int j = 0; j < 4; ++j) {
      row.emplace_back(s.variance[static_cast<std::size_t>(j)]);
      b.put(ls.label + ".var_" + stokes_name(j), s.variance[static_cast<std::size_t>(j)]);
    }
    row.emplace_back(static_cast<double>(cutoff));
    row.emplace_back(dev);
    row.emplace_back(squeezed_list(squeezed));
    b.row(std::move(row));
    b.put(ls.label + ".cutoff", static_cast<double>(cutoff));
    b.put(ls.label + ".oracle_dev", dev);
    for (int j = 1; j <= 3; ++j) b.put(ls.label + ".squeezed_" + stokes_name(j), squeezed.count(j) > 0);
  }
}

void run_algebra(const AlgebraParams& p, const RunOptions& opt, Builder& b) {
  b.columns({"item", "cutoff", "poincare_lhs", "poincare_rhs", "poincare_residual", "slack_1", "slack_2", "slack_3"});

  constexpr std::pair<StokesIdentity, const char*> identities[] = {
      {StokesIdentity::s2_s3, "s2_s3"}, {StokesIdentity::s3_s1, "s3_s1"}, {StokesIdentity::s1_s2, "s1_s2"},
      {StokesIdentity::s0_s1, "s0_s1"}, {StokesIdentity::s0_s2, "s0_s2"}, {StokesIdentity::s0_s3, "s0_s3"},
  };
  double worst = 0.0;
  for (const auto& [id, name] : identities) {
    const double r = commutator_residual(p.cutoff, p.guard, id);
    worst = std::max(worst, r);
    b.put(std::string("commutator.") + name, r);
    b.row({std::string("commutator ") + name, static_cast<double>(p.cutoff), std::string("-"), std::string("-"), r,
           std::string("-"), std::string("-"), std::string("-")});
  }
  b.put("commutator.max", worst);

  // l = S0/2 and m = S1/2 on number states, and <S1^2 + S2^2 + S3^2>/4 = l(l + 1).
  double schwinger = 0.0;
  for (int nx = 0; nx <= p.cutoff - 1; ++nx) {
    for (int ny = 0; nx + ny <= p.cutoff - 1; ++ny) {
      const auto lm = schwinger_lm(nx, ny);
      const StokesSummary s = stokes_summary(TwoModeFockState::basis(p.cutoff, nx, ny));
      const double l = lm.l.value();
      const double casimir = (s.second_moment[0] + s.second_moment[1] + s.second_moment[2]) / 4.0;
      schwinger = std::max({schwinger, std::abs(s.mean[0] / 2.0 - l), std::abs(s.mean[1] / 2.0 - lm.m.value()),
                            std::abs(casimir - l * (l + 1.0))});
    }
  }
  b.put("schwinger.max_dev", schwinger);

  double worst_poincare = 0.0;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (const auto& ls : p.states) {
    const int cutoff = fock_cutoff(ls.state, states::TruncationBudget::per_mode, opt);
    const StokesSummary s = stokes_summary(states::build(ls.state, cutoff));
    const double scale = std::max(1.0, s.poincare_rhs);
    const double residual = std::abs(s.poincare_residual()) / scale;
    const auto slack = s.uncertainty_slack();
    const double slack_scale = std::max(1.0, s.mean[0] * s.mean[0]);
    const double min_slack = *std::min_element(slack.begin(), slack.end()) / slack_scale;
    worst_poincare = std::max(worst_poincare, residual);
    worst_slack = std::min(worst_slack, min_slack);
    b.put(ls.label + ".poincare_residual", residual);
    b.put(ls.label + ".uncertainty_slack_min", min_slack);
    b.row({ls.label, static_cast<double>(cutoff), s.poincare_lhs, s.poincare_rhs, residual, slack[0], slack[1],
           slack[2]});
  }
  if (!p.states.empty()) {
    b.put("poincare.max_residual", worst_poincare);
    b.put("uncertainty.min_slack", worst_slack);
  }
}

void run_measurement(const MeasurementParams& p, const RunOptions& opt, Builder& b) {
  b.columns({"case", "engine", "observable", "network_mean", "network_var", "direct_mean", "direct_var",
             "identity_dev", "port_dev", "cutoff"});
  for (const auto& c : p.cases) {
    std::vector<ObservableComparison> results;
    std::vector<std::optional<double>> port_devs;
    std::optional<int> cutoff;
    if (c.engine == Engine::fock) {
      const auto budget =
          p.network == Network::s0_s1 ? states::TruncationBudget::per_mode : states::TruncationBudget::total;
      cutoff = fock_cutoff(*c.state, budget, opt);
      const TwoModeFockState state = states::build(*c.state, *cutoff);
      if (p.network == Network::s0_s1) {
        const auto r = run_s0_s1(state);
        results = {r.s0, r.s1};
      } else {
        results = {p.network == Network::s2 ? run_s2(state) : run_s3(state)};
      }
      port_devs.assign(results.size(), std::nullopt);
    } else {
      const GaussianBeamSet beams = primary_beam(*c.beam);
      if (p.network == Network::s0_s1) {
        const auto r = run_s0_s1(beams);
        results = {r.s0, r.s1};
        port_devs.assign(results.size(), std::nullopt);
      } else {
        const auto base = p.network == Network::s2 ? run_s2(beams) : run_s3(beams);
        GaussianBeamSet probed = beams;
        probed.add_mode({"b", kPrimeX}, 0.0, noise_matrix(p.port_probe));
        probed.add_mode({"b", kPrimeY}, 0.0, noise_matrix(p.port_probe));
        const auto perturbed = p.network == Network::s2 ? run_s2(probed) : run_s3(probed);
        results = {base};
        port_devs = {std::max(relative_gap(perturbed.network_mean, base.network_mean),
                              relative_gap(perturbed.network_variance, base.network_variance))};
      }
    }
    for (std::size_t k = 0; k < results.size(); ++k) {
      const auto& r = results[k];
      const std::string prefix = c.label + "." + stokes_name(r.stokes_index);
      b.put(prefix + ".mean", r.network_mean);
      b.put(prefix + ".var", r.network_variance);
      b.put(prefix + ".direct_mean", r.direct_mean);
      b.put(prefix + ".direct_var", r.direct_variance);
      b.put(prefix + ".identity_dev", r.identity_deviation());
      if (port_devs[k]) b.put(prefix + ".port_dev", *port_devs[k]);
      b.row({c.label, engine_name(c.engine), stokes_name(r.stokes_index), r.network_mean, r.network_variance,
             r.direct_mean, r.direct_variance, r.identity_deviation(),
             port_devs[k] ? Cell{*port_devs[k]} : Cell{std::string("-")},
             cutoff ? Cell{static_cast<double>(*cutoff)} : Cell{std::string("-")}});
    }
    if (cutoff) b.put(c.label + ".cutoff", static_cast<double>(*cutoff));
  }
}

void run_joint_squeeze(const JointSqueezeParams& p, const RunOptions& opt, Builder& b) {
  b.columns({"case", "engine", "s", "alpha", "mean_n_x", "mean_n_y", "expected_n", "pattern_dev", "infidelity",
             "cutoff"});
  for (const auto& c : p.cases) {
    const bool fock = c.engine == Engine::fock;
    const JointSqueezeRecord r =
        fock ? run_joint_squeeze_factorization(c.s, opt.fock_cutoff) : run_joint_squeeze_factorization_gaussian(c.s, c.alpha);
    const double pattern = fock ? r.stokes_deviation : r.covariance_deviation;
    b.put(c.label + ".mean_n_x", r.mean_n_x);
    b.put(c.label + ".mean_n_y", r.mean_n_y);
    b.put(c.label + ".expected_n", r.expected_n);
    b.put(c.label + ".n_dev", std::max(std::abs(r.mean_n_x - r.expected_n), std::abs(r.mean_n_y - r.expected_n)));
    b.put(c.label + ".pattern_dev", pattern);
    if (fock) {
      b.put(c.label + ".infidelity", r.infidelity);
      b.put(c.label + ".cutoff", static_cast<double>(r.cutoff));
    }
    b.row({c.label, engine_name(c.engine), c.s, c.alpha, r.mean_n_x, r.mean_n_y, r.expected_n, pattern,
           fock ? Cell{r.infidelity} : Cell{std::string("-")},
           fock ? Cell{static_cast<double>(r.cutoff)} : Cell{std::string("-")}});
  }
}

void run_cross_engine(const CrossEngineParams& p, const RunOptions& opt, Builder& b) {
  b.columns({"case", "alpha", "s", "observable", "fock_var", "gaussian_var", "rel_dev", "bound"});
  for (const auto& c : p.cases) {
    const states::StateSpec spec = states::AmplitudeSqueezedCoherent{c.alpha, c.s};
    const int cutoff = fock_cutoff(spec, states::TruncationBudget::per_mode, opt);
    const StokesSummary f = stokes_summary(states::build(spec, cutoff));
    const StokesSummary g = gaussian::stokes_linearized(
        gaussian::from_squeezed_beam(c.alpha, std::exp(-2.0 * c.s), std::exp(2.0 * c.s)), "a");
    const double bound = p.bound_factor * gaussian::linearization_validity(c.alpha, c.s);
    double worst = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      const double rel = std::abs(f.variance[j] - g.variance[j]) / std::abs(f.variance[j]);
      worst = std::max(worst, rel);
      b.row({c.label, c.alpha, c.s, stokes_name(static_cast<int>(j)), f.variance[j], g.variance[j], rel, bound});
      b.put(c.label + ".fock_var_" + stokes_name(static_cast<int>(j)), f.variance[j]);
      b.put(c.label + ".gaussian_var_" + stokes_name(static_cast<int>(j)), g.variance[j]);
    }
    b.put(c.label + ".max_rel_dev", worst);
    b.put(c.label + ".bound", bound);
    b.put(c.label + ".dev_over_bound", worst / bound);
    b.put(c.label + ".cutoff", static_cast<double>(cutoff));
  }
}

void epr_row(Builder& b, const std::string& label, double alpha, const BeamVariances& a, const BeamVariances& bv,
             const entanglement::EntanglementReport& r) {
  b.row({label, alpha, a.v_plus, a.v_minus, bv.v_plus, bv.v_minus, r.vcond_1, r.vcond_3, r.epr_product, r.epr_bound,
         r.duan_sum, r.v_s1, r.v_s3, flag(r.epr), flag(r.duan_nonseparable), flag(r.squeezed_state_entangled),
         static_cast<double>(r.sign_s1), static_cast<double>(r.sign_s3)});
}

void run_epr(const EprParams& p, Builder& b) {
  b.columns({"case", "alpha", "v_plus_a", "v_minus_a", "v_plus_b", "v_minus_b", "vcond_1", "vcond_3", "epr_product",
             "epr_bound", "duan_sum", "v_s1", "v_s3", "epr", "duan_nonseparable", "squeezed_state_entangled",
             "sign_s1", "sign_s3"});
  for (const auto& c : p.cases) {
    const auto stats = epr_stats(epr_outputs(c.alpha, c.a, c.b));
    const auto r = entanglement::evaluate(stats);
    const std::string& l = c.label;
    b.put(l + ".var_c_S1", stats.var_c[0]);
    b.put(l + ".var_d_S1", stats.var_d[0]);
    b.put(l + ".var_c_S3", stats.var_c[2]);
    b.put(l + ".var_d_S3", stats.var_d[2]);
    b.put(l + ".cross_S1", stats.cross[0]);
    b.put(l + ".cross_S3", stats.cross[2]);
    b.put(l + ".mean_S2C", stats.mean_c[1]);
    b.put(l + ".coherent_norm_S1", stats.coherent_norm[0]);
    b.put(l + ".vcond_1", r.vcond_1);
    b.put(l + ".vcond_3", r.vcond_3);
    b.put(l + ".epr_product", r.epr_product);
    b.put(l + ".epr_bound", r.epr_bound);
    b.put(l + ".duan_sum", r.duan_sum);
    b.put(l + ".v_s1", r.v_s1);
    b.put(l + ".v_s3", r.v_s3);
    b.put(l + ".epr", r.epr);
    b.put(l + ".duan_nonseparable", r.duan_nonseparable);
    b.put(l + ".squeezed_state_entangled", r.squeezed_state_entangled);
    b.put(l + ".antisymmetry_dev", std::abs(stats.cross[0] + stats.cross[2]));
    epr_row(b, l, c.alpha, c.a, c.b, r);
  }
  if (p.grid) {
    const auto& g = *p.grid;
    double closed_dev = 0.0, antisym = 0.0, spread = 0.0, duan_dev = 0.0;
    int epr_count = 0, points = 0;
    for (double vp : g.v_plus) {
      for (double vm : g.v_minus) {
        if (vp * vm < 1.0 - 1e-9) continue;
        const BeamVariances v{vp, vm};
        const auto stats = epr_stats(epr_outputs(g.alpha, v, v));
        const auto r = entanglement::evaluate(stats);
        const double closed = entanglement::equal_squeezing_conditional_variance(vp, vm, g.alpha);
        closed_dev = std::max({closed_dev, std::abs(r.vcond_1 - closed), std::abs(r.vcond_3 - closed)});
        antisym = std::max(antisym, std::abs(stats.cross[0] + stats.cross[2]));
        const auto [lo, hi] = std::minmax({stats.var_c[0], stats.var_c[2], stats.var_d[0], stats.var_d[2]});
        spread = std::max(spread, hi - lo);
        duan_dev = std::max({duan_dev, std::abs(r.v_s1 - std::min(vp, vm)), std::abs(r.v_s3 - std::min(vp, vm))});
        epr_count += r.epr ? 1 : 0;
        ++points;
        std::ostringstream label;
        label << "grid(" << vp << "," << vm << ")";
        epr_row(b, label.str(), g.alpha, v, v, r);
      }
    }
    b.put("grid.points", static_cast<double>(points));
    b.put("grid.epr_count", static_cast<double>(epr_count));
    b.put("grid.max_closed_form_dev", closed_dev);
    b.put("grid.max_antisymmetry_dev", antisym);
    b.put("grid.max_variance_spread", spread);
    b.put("grid.max_normalized_variance_dev", duan_dev);
  }
}

void run_threshold(const ThresholdParams& p, Builder& b) {
  b.columns({"set", "v_plus", "v_minus", "vcond", "ratio", "epr", "engine_vcond"});
  double engine_dev = 0.0;
  for (std::size_t i = 0; i < p.grids.size(); ++i) {
    const auto& g = p.grids[i];
    std::vector<entanglement::ThresholdRow> rows = entanglement::three_db_threshold_scan(g.v_plus, g.v_minus, p.alpha);
    if (g.minimum_uncertainty) {
      for (double vp : g.v_plus) {
        const double vm = 1.0 / vp;
        const auto extra = entanglement::three_db_threshold_scan(std::span(&vp, 1), std::span(&vm, 1), p.alpha);
        rows.push_back(extra.front());
      }
    }
    const std::string set = "grid" + std::to_string(i);
    int count = 0;
    for (const auto& row : rows) {
      count += row.epr ? 1 : 0;
      Cell engine = std::string("-");
      if (row.v_plus * row.v_minus >= 1.0 - 1e-9) {
        const auto r = run_epr_experiment(row.v_plus, row.v_minus, p.alpha);
        engine_dev = std::max({engine_dev, relative_gap(r.vcond_1, row.vcond), relative_gap(r.vcond_3, row.vcond)});
        engine = r.vcond_1;
      }
      b.row({set, row.v_plus, row.v_minus, row.vcond, row.ratio, flag(row.epr), engine});
    }
    b.put(set + ".rows", static_cast<double>(rows.size()));
    b.put(set + ".epr_count", static_cast<double>(count));
    b.put(set + ".all_epr", count == static_cast<int>(rows.size()));
  }
  for (const auto& pt : p.points) {
    const auto row = entanglement::three_db_threshold_scan(std::span(&pt.v_plus, 1), std::span(&pt.v_minus, 1), p.alpha)
                         .front();
    b.put(pt.label + ".ratio", row.ratio);
    b.put(pt.label + ".vcond", row.vcond);
    b.put(pt.label + ".epr", row.epr);
    b.row({pt.label, row.v_plus, row.v_minus, row.vcond, row.ratio, flag(row.epr), std::string("-")});
  }
  b.put("engine.max_rel_dev", engine_dev);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

// ---------------------------------------------------------------------------

double ObservableComparison::identity_deviation() const {
  return std::max(relative_gap(network_mean, direct_mean), relative_gap(network_variance, direct_variance));
}

S0S1Readout run_s0_s1(const TwoModeFockState& state) {
  const StokesSummary direct = stokes_summary(state);
  const auto sum = photon_counting(state, 1);
  const auto diff = photon_counting(state, -1);
  return {compare(0, sum.mean, sum.variance, direct), compare(1, diff.mean, diff.variance, direct)};
}

S0S1Readout run_s0_s1(const GaussianBeamSet& beams, const std::string& beam) {
  const StokesSummary direct = gaussian::stokes_linearized(beams, beam);
  const auto sum = gaussian::detect_sum(beams, {beam, "x"}, {beam, "y"});
  const auto diff = gaussian::detect_difference(beams, {beam, "x"}, {beam, "y"});
  return {compare(0, sum.mean, sum.variance, direct), compare(1, diff.mean, diff.variance, direct)};
}

ObservableComparison run_s2(const TwoModeFockState& state) { return run_fock_network(state, ModeMap::rotation45(), 2); }
ObservableComparison run_s3(const TwoModeFockState& state) { return run_fock_network(state, ModeMap::s3_analyzer(), 3); }

ObservableComparison run_s2(const GaussianBeamSet& beams, const std::string& beam) {
  return run_gaussian_network(beams, 2, beam);
}
ObservableComparison run_s3(const GaussianBeamSet& beams, const std::string& beam) {
  return run_gaussian_network(beams, 3, beam);
}

GaussianBeamSet analyzer_outputs(const GaussianBeamSet& beams, int j, const std::string& beam) {
  if (j != 2 && j != 3) throw InvalidArgument("analyzer networks exist for S2 and S3 only");
  if (beam == "b" || beam == "c" || beam == "d") throw InvalidArgument("beams b, c, d are reserved for the splitter ports");
  const ModeLabel in[] = {{beam, "x"}, {beam, "y"}};
  const ModeLabel primed[] = {{beam, kPrimeX}, {beam, kPrimeY}};
  const LinearElement analyzer = j == 2 ? LinearElement::rotation45() : LinearElement::s3_analyzer();
  const GaussianBeamSet rotated = gaussian::apply_element(beams, analyzer, in, primed);
  const ModeLabel ports[] = {{beam, kPrimeX}, {beam, kPrimeY}, {"b", kPrimeX}, {"b", kPrimeY}};
  const ModeLabel outs[] = {{"c", kPrimeX}, {"c", kPrimeY}, {"d", kPrimeX}, {"d", kPrimeY}};
  return gaussian::apply_element(rotated, LinearElement::polarizing_beam_splitter(), ports, outs);
}

GaussianBeamSet primary_beam(const BeamParams& params) {
  return gaussian::from_squeezed_beam(params.alpha, params.noise.v_plus, params.noise.v_minus, "a");
}

JointSqueezeRecord run_joint_squeeze_factorization(double s, std::optional<int> cutoff) {
  if (!(s >= 0.0)) throw InvalidArgument("squeeze parameter s must be >= 0");
  const states::StateSpec spec = states::AmplitudeSqueezedCoherent{0.0, s};
  const int n = cutoff ? *cutoff : states::required_cutoff(spec, states::TruncationBudget::total);
  const TwoModeFockState mapped = apply_mode_map(states::build(spec, n), ModeMap::s3_analyzer());
  require_closed(mapped);

  const states::StateSpec reference_spec = states::TwoModeSqueezedVacuum{s, std::numbers::pi};
  const TwoModeFockState reference = states::build(reference_spec, n);
  const StokesSummary got = stokes_summary(mapped);
  const StokesSummary want = states::oracle_summary(reference_spec);

  JointSqueezeRecord r;
  r.cutoff = n;
  r.mean_n_x = mean_photon_number(mapped, Mode::x);
  r.mean_n_y = mean_photon_number(mapped, Mode::y);
  r.expected_n = std::sinh(s) * std::sinh(s);
  for (std::size_t j = 0; j < 4; ++j) {
    r.stokes_deviation =
        std::max({r.stokes_deviation, std::abs(got.mean[j] - want.mean[j]), std::abs(got.variance[j] - want.variance[j])});
  }
  r.infidelity = 1.0 - std::norm(inner_product(reference, mapped)) / (reference.squared_norm() * mapped.squared_norm());
  return r;
}

JointSqueezeRecord run_joint_squeeze_factorization_gaussian(double s, double alpha) {
  if (!(s >= 0.0)) throw InvalidArgument("squeeze parameter s must be >= 0");
  const GaussianBeamSet out =
      analyzer_outputs(gaussian::from_squeezed_beam(alpha, std::exp(-2.0 * s), std::exp(2.0 * s)), 3);
  const ModeLabel pair[] = {{"d", kPrimeX}, {"c", kPrimeY}};
  const Eigen::MatrixXd cov = out.covariance_of(pair);

  const double ch = std::cosh(2.0 * s);
  const double sh = std::sinh(2.0 * s);
  Eigen::Matrix4d expected;
  expected << ch, 0, sh, 0,
              0, ch, 0, -sh,
              sh, 0, ch, 0,
              0, -sh, 0, ch;

  JointSqueezeRecord r;
  r.mean_n_x = (cov(0, 0) + cov(1, 1) - 2.0) / 4.0;
  r.mean_n_y = (cov(2, 2) + cov(3, 3) - 2.0) / 4.0;
  r.expected_n = std::sinh(s) * std::sinh(s);
  r.covariance_deviation = (cov - expected).cwiseAbs().maxCoeff();
  return r;
}

GaussianBeamSet epr_outputs(double alpha, const BeamVariances& a, const BeamVariances& b) {
  GaussianBeamSet beams = gaussian::from_squeezed_beam(alpha, a.v_plus, a.v_minus, "a");
  beams.add_mode({"b", "x"}, alpha, noise_matrix(b));
  beams.add_mode({"b", "y"}, alpha, noise_matrix(b));
  const LinearElement splitter = LinearElement::epr_beam_splitter();
  for (const char* pol : {"x", "y"}) {
    const ModeLabel in[] = {{"a", pol}, {"b", pol}};
    const ModeLabel out[] = {{"c", pol}, {"d", pol}};
    beams = gaussian::apply_element(beams, splitter, in, out);
  }
  return beams;
}

entanglement::StokesFluctuationStats epr_stats(const GaussianBeamSet& outputs) {
  return entanglement::fluctuation_stats(outputs, {{"c", "x"}, {"c", "y"}}, {{"d", "x"}, {"d", "y"}});
}

entanglement::EntanglementReport run_epr_experiment(double alpha, const BeamVariances& a, const BeamVariances& b) {
  return entanglement::evaluate(epr_stats(epr_outputs(alpha, a, b)));
}

entanglement::EntanglementReport run_epr_experiment(double v_plus, double v_minus, double alpha) {
  const BeamVariances v{v_plus, v_minus};
  return run_epr_experiment(alpha, v, v);
}

// ---------------------------------------------------------------------------

std::optional<double> ScenarioResult::quantity(const std::string& key) const {
  for (const auto& [k, v] : quantities) {
    if (k == key) return v;
  }
  return std::nullopt;
}

bool ScenarioResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed; });
}

CheckOutcome evaluate(const Expectation& e, const ScenarioResult& result, std::optional<double> tolerance_override) {
  CheckOutcome out;
  out.expectation = e;
  if (e.kind == Expectation::Kind::value && tolerance_override) out.expectation.tol = *tolerance_override;
  out.actual = result.quantity(e.quantity);
  if (!out.actual) return out;
  const double a = *out.actual;
  switch (e.kind) {
    case Expectation::Kind::value: out.passed = std::abs(a - e.value) <= out.expectation.tol; break;
    case Expectation::Kind::less_than: out.passed = a < e.value; break;
    case Expectation::Kind::greater_than: out.passed = a > e.value; break;
  }
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  if (options.fock_cutoff && *options.fock_cutoff < 1) throw InvalidArgument("fock cutoff override must be >= 1");
  ScenarioResult result;
  result.name = config.name;
  result.kind = kind_name(config.params);
  result.engine = engine_name(config.engine);
  Builder b(result);
  std::visit(overloaded{
                 [&](const StateTableParams& p) { run_state_table(p, options, b); },
                 [&](const AlgebraParams& p) { run_algebra(p, options, b); },
                 [&](const MeasurementParams& p) { run_measurement(p, options, b); },
                 [&](const JointSqueezeParams& p) { run_joint_squeeze(p, options, b); },
                 [&](const CrossEngineParams& p) { run_cross_engine(p, options, b); },
                 [&](const EprParams& p) { run_epr(p, b); },
                 [&](const ThresholdParams& p) { run_threshold(p, b); },
             },
             config.params);
  for (const auto& e : config.expect) result.checks.push_back(evaluate(e, result, options.tolerance));
  return result;
}

}  // namespace stokes_lab::scenarios
