// Acceptance suite: one PASS/FAIL line per criterion AC1..AC8.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "stokes_lab/entanglement.hpp"
#include "stokes_lab/fock_core.hpp"
#include "stokes_lab/linearized_optics.hpp"
#include "stokes_lab/report.hpp"
#include "stokes_lab/scenarios.hpp"
#include "stokes_lab/states.hpp"

using namespace stokes_lab;
namespace st = stokes_lab::states;
namespace sc = stokes_lab::scenarios;
namespace en = stokes_lab::entanglement;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& text) {
    if (pass) detail += (detail.empty() ? "" : "; ") + text;
  }
};

std::string num(double v) { return report::format_number(v); }

double gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<st::StateSpec> corpus() {
  std::vector<st::StateSpec> out;
  for (int n : {0, 1, 3, 5}) out.push_back(st::NumberState{n});
  out.push_back(st::EntangledPhoton{});
  const Complex i{0.0, 1.0};
  const Complex diag = Complex{1.0, 1.0} / std::sqrt(2.0);
  for (Complex ax : {Complex{0.0}, Complex{1.0}, Complex{2.0}, i, diag}) {
    for (Complex ay : {Complex{0.0}, Complex{1.0}, Complex{2.0}, diag}) out.push_back(st::CoherentState{ax, ay});
  }
  for (double s : {0.0, 0.2, 0.5, 0.8}) {
    for (double theta : {0.0, M_PI / 3.0}) out.push_back(st::TwoModeSqueezedVacuum{s, theta});
  }
  for (double a : {0.0, 1.0, 2.0, 3.0}) {
    for (double s : {0.0, 0.2, 0.3, 0.5}) out.push_back(st::AmplitudeSqueezedCoherent{a, s});
  }
  return out;
}

bool exact_family(const st::StateSpec& s) {
  return std::holds_alternative<st::NumberState>(s) || std::holds_alternative<st::EntangledPhoton>(s);
}

Verdict ac1() {
  Verdict v;
  double worst_exact = 0.0, worst_trunc = 0.0;
  for (const auto& spec : corpus()) {
    const auto e = stokes_summary(st::build(spec));
    const auto o = st::oracle_summary(spec);
    double d = 0.0;
    for (int j = 0; j < 4; ++j) d = std::max({d, std::abs(e.mean[j] - o.mean[j]), std::abs(e.variance[j] - o.variance[j])});
    if (exact_family(spec)) {
      worst_exact = std::max(worst_exact, d);
      v.require(d <= 1e-10, st::describe(spec) + " dev " + num(d));
    } else {
      worst_trunc = std::max(worst_trunc, d);
      v.require(d <= 1e-6, st::describe(spec) + " dev " + num(d));
    }
  }
  const auto t = stokes_summary(st::build(st::TwoModeSqueezedVacuum{0.5, 0.0}));
  for (int j : {0, 2, 3}) v.require(std::abs(t.variance[j] - 1.3810978455) <= 1e-6, "tmsv V" + std::to_string(j));
  v.require(std::abs(t.variance[1]) <= 1e-6, "tmsv V1");
  // Closed forms evaluated independently: 2 alpha^2 e^{-2s} + sinh^2 2s and 2 alpha^2 e^{2s}.
  const auto a = stokes_summary(st::build(st::AmplitudeSqueezedCoherent{3.0, 0.3}));
  const double v012 = 18.0 * std::exp(-0.6) + std::pow(std::sinh(0.6), 2);
  const double v3 = 18.0 * std::exp(0.6);
  for (int j : {0, 1, 2}) v.require(std::abs(a.variance[j] - v012) <= 1e-6, "asq V" + std::to_string(j));
  v.require(std::abs(a.variance[3] - v3) <= 1e-6, "asq V3");
  v.note("exact dev " + num(worst_exact) + ", truncated dev " + num(worst_trunc) + ", tmsv(0.5) V2 " +
         num(t.variance[2]) + ", asq(3,0.3) V0 " + num(a.variance[0]) + " V3 " + num(a.variance[3]));
  return v;
}

Verdict ac2() {
  Verdict v;
  double worst_p = 0.0, worst_slack = 0.0;
  for (const auto& spec : corpus()) {
    const auto s = stokes_summary(st::build(spec));
    const double p = std::abs(s.poincare_residual()) / std::max(1.0, s.poincare_rhs);
    worst_p = std::max(worst_p, p);
    v.require(p <= 1e-9, st::describe(spec) + " poincare " + num(p));
    for (double slack : s.uncertainty_slack()) {
      const double rel = slack / std::max(1.0, s.mean[0] * s.mean[0]);
      worst_slack = std::min(worst_slack, rel);
      v.require(rel >= -1e-9, st::describe(spec) + " slack " + num(rel));
    }
  }
  double worst_c = 0.0;
  for (int cutoff = 4; cutoff <= 10; ++cutoff) {
    for (auto id : {StokesIdentity::s2_s3, StokesIdentity::s3_s1, StokesIdentity::s1_s2, StokesIdentity::s0_s1,
                    StokesIdentity::s0_s2, StokesIdentity::s0_s3}) {
      worst_c = std::max(worst_c, commutator_residual(cutoff, 2, id));
    }
  }
  v.require(worst_c < 1e-12, "commutator " + num(worst_c));
  v.note("poincare " + num(worst_p) + ", commutators " + num(worst_c) + ", min slack " + num(worst_slack));
  return v;
}

Verdict ac3() {
  Verdict v;
  double worst_f = 0.0, worst_g = 0.0, worst_port = 0.0;
  const std::vector<st::StateSpec> fock = {st::NumberState{3}, st::EntangledPhoton{},
                                            st::CoherentState{2.0, 1.0}, st::CoherentState{Complex{1.0, 1.0}, 0.5},
                                            st::TwoModeSqueezedVacuum{0.5, 0.0},
                                            st::AmplitudeSqueezedCoherent{2.0, 0.3}};
  for (const auto& spec : fock) {
    const auto psi = st::build(spec, st::TruncationBudget::total);
    for (const auto& r : {sc::run_s2(psi), sc::run_s3(psi)}) {
      worst_f = std::max(worst_f, r.identity_deviation());
      v.require(r.identity_deviation() <= 1e-10, st::describe(spec) + " S" + std::to_string(r.stokes_index));
    }
  }
  Eigen::Matrix2d probe = Eigen::Vector2d(4.0, 0.25).asDiagonal();
  for (const sc::BeamParams& p : {sc::BeamParams{5.0, {std::exp(-0.4), std::exp(0.4)}}, sc::BeamParams{5.0, {1.0, 1.0}},
                                  sc::BeamParams{3.0, {0.5, 10.0}}}) {
    const auto beams = sc::primary_beam(p);
    auto probed = beams;
    probed.add_mode({"b", "x'"}, 0.0, probe);
    probed.add_mode({"b", "y'"}, 0.0, probe);
    for (int j : {2, 3}) {
      const auto r = j == 2 ? sc::run_s2(beams) : sc::run_s3(beams);
      const auto q = j == 2 ? sc::run_s2(probed) : sc::run_s3(probed);
      worst_g = std::max(worst_g, r.identity_deviation());
      v.require(r.identity_deviation() <= 1e-10, "gaussian S" + std::to_string(j));
      const double port = std::max(gap(q.network_mean, r.network_mean), gap(q.network_variance, r.network_variance));
      worst_port = std::max(worst_port, port);
      v.require(port <= 1e-12, "port S" + std::to_string(j) + " " + num(port));
    }
  }
  const auto bright = sc::primary_beam({5.0, {std::exp(-0.4), std::exp(0.4)}});
  v.require(std::abs(sc::run_s2(bright).network_variance - 33.5160023018) <= 1e-9, "V2 value");
  v.require(std::abs(sc::run_s3(bright).network_variance - 74.5912348821) <= 1e-9, "V3 value");
  v.note("fock identity " + num(worst_f) + ", gaussian identity " + num(worst_g) + ", port " + num(worst_port));
  return v;
}

Verdict ac4() {
  Verdict v;
  const double n = std::pow(std::sinh(0.3), 2);
  const auto f = sc::run_joint_squeeze_factorization(0.3);
  const double dn = std::max(std::abs(f.mean_n_x - n), std::abs(f.mean_n_y - n));
  v.require(dn <= 1e-8, "<n> dev " + num(dn));
  v.require(f.infidelity <= 1e-9, "infidelity " + num(f.infidelity));
  const auto g = sc::run_joint_squeeze_factorization_gaussian(0.3, 5.0);
  v.require(g.covariance_deviation <= 1e-10, "pattern dev " + num(g.covariance_deviation));
  v.note("<n> " + num(f.mean_n_x) + ", fock infidelity " + num(f.infidelity) + ", gaussian pattern dev " +
         num(g.covariance_deviation));
  return v;
}

Verdict ac5() {
  Verdict v;
  double worst = 0.0;
  for (double alpha : {3.0, 5.0}) {
    for (double s : {0.05, 0.1}) {
      const auto fock = stokes_summary(st::build(st::AmplitudeSqueezedCoherent{alpha, s}));
      const auto lin = gaussian::stokes_linearized(
          gaussian::from_squeezed_beam(alpha, std::exp(-2.0 * s), std::exp(2.0 * s)), "a");
      const double bound = 3.0 * std::sinh(s) / alpha;
      for (int j = 0; j < 4; ++j) {
        const double rel = std::abs(fock.variance[j] - lin.variance[j]) / lin.variance[j];
        worst = std::max(worst, rel / bound);
        v.require(rel < bound, "alpha " + num(alpha) + " s " + num(s) + " V" + std::to_string(j));
      }
    }
  }
  v.note("max dev / bound " + num(worst));
  return v;
}

Verdict ac6() {
  Verdict v;
  const std::vector<double> vp = {0.01, 0.1, 0.25, 0.5, 0.9, 0.99, 1.0, 2.0};
  const std::vector<double> vm = {1.0, 1.2, 2.0, 10.0, 100.0, 1e4};
  double worst = 0.0, worst_anti = 0.0;
  int points = 0;
  for (double p : vp) {
    for (double m : vm) {
      if (p * m < 1.0) continue;
      ++points;
      const auto s = sc::epr_stats(sc::epr_outputs(1.0, {p, m}, {p, m}));
      const double closed = en::equal_squeezing_conditional_variance(p, m, 1.0);
      for (int k : {0, 2}) worst = std::max(worst, std::abs(s.vcond[k] - closed));
      worst_anti = std::max(worst_anti, std::abs(s.cross[0] + s.cross[2]));
    }
  }
  v.require(worst <= 1e-12, "closed form dev " + num(worst));
  v.require(worst_anti <= 1e-12, "antisymmetry " + num(worst_anti));
  for (double p : {0.99, 0.9, 0.5, 0.25, 0.1}) {
    v.require(sc::run_epr_experiment(p, 1.0 / p, 1.0).epr, "min-uncertainty V+ " + num(p));
  }
  for (double m : {2.0, 10.0, 100.0, 1e4}) {
    v.require(sc::run_epr_experiment(0.5, m, 1.0).epr, "V+ 0.5, V- " + num(m));
    const std::vector<double> a{0.5}, b{m};
    v.require(en::three_db_threshold_scan(a, b, 1.0)[0].epr, "scan V+ 0.5, V- " + num(m));
  }
  v.require(!sc::run_epr_experiment(0.9, 1.2, 1.0).epr, "V+ 0.9, V- 1.2 entangled");
  v.require(!sc::run_epr_experiment(1.0, 1.0, 1.0).epr, "coherent entangled");
  v.note(std::to_string(points) + " grid points, closed form dev " + num(worst) + ", antisymmetry " + num(worst_anti));
  return v;
}

Verdict ac7() {
  Verdict v;
  double worst = 0.0;
  for (double p : {0.1, 0.25, 0.5, 0.8, 0.9}) {
    for (double m : {1.0 / p, 10.0, 100.0}) {
      const auto r = sc::run_epr_experiment(p, m, 1.0);
      worst = std::max({worst, std::abs(r.v_s1 - p), std::abs(r.v_s3 - p)});
    }
  }
  v.require(worst <= 1e-12, "normalized variance dev " + num(worst));
  const auto asym = sc::run_epr_experiment(1.0, {0.8, 1.25}, {1.0, 1.0});
  v.require(std::abs(asym.duan_sum - 1.8) <= 1e-12, "duan_sum " + num(asym.duan_sum));
  v.require(asym.duan_nonseparable, "asymmetric case separable");
  v.require(!sc::run_epr_experiment(1.0, 1.0, 1.0).duan_nonseparable, "coherent nonseparable");
  v.note("normalized variance dev " + num(worst) + ", asymmetric duan_sum " + num(asym.duan_sum));
  return v;
}

Verdict ac8() {
  Verdict v;
  const std::string cmd = std::string("\"") + STOKES_LAB_CLI + "\" check > /dev/null 2>&1";
  const auto start = std::chrono::steady_clock::now();
  const int status = std::system(cmd.c_str());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const int code = status == -1 ? -1 : WEXITSTATUS(status);
  v.require(code == 0, "exit code " + std::to_string(code));
  v.require(seconds < 300.0, "took " + num(seconds) + " s");
  v.note("exit 0 in " + num(seconds) + " s");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"AC1 state oracle suite", ac1},
      {"AC2 algebra suite", ac2},
      {"AC3 measurement identities", ac3},
      {"AC4 joint-squeeze factorization", ac4},
      {"AC5 cross-engine agreement", ac5},
      {"AC6 EPR suite", ac6},
      {"AC7 non-separability suite", ac7},
      {"AC8 full catalog check", ac8},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
