#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "stokes_lab/catalog.hpp"
#include "stokes_lab/errors.hpp"
#include "stokes_lab/report.hpp"
#include "stokes_lab/scenarios.hpp"
#include "stokes_lab/states.hpp"

using namespace stokes_lab;
using namespace stokes_lab::scenarios;

namespace {

const double kV = 33.5160023018;   // 2 alpha^2 e^{-2s}, alpha = 5, s = 0.2
const double kV3 = 74.5912348821;  // 2 alpha^2 e^{2s}

BeamParams bright(double alpha, double s) { return {alpha, {std::exp(-2.0 * s), std::exp(2.0 * s)}}; }

}  // namespace

TEST_CASE("s0/s1 detection") {
  const auto n3 = run_s0_s1(states::build(states::NumberState{3}));
  CHECK(n3.s1.network_mean == doctest::Approx(3.0));
  CHECK(std::abs(n3.s1.network_variance) < 1e-12);
  const auto g = run_s0_s1(primary_beam(bright(5.0, 0.2)));
  CHECK(std::abs(g.s0.network_variance - kV) < 1e-9);
  CHECK(std::abs(g.s1.network_variance - kV) < 1e-9);
  const auto coh = run_s0_s1(primary_beam({5.0, {1.0, 1.0}}));
  CHECK(coh.s0.network_variance == doctest::Approx(50.0).epsilon(1e-14));
  CHECK(coh.s1.network_variance == doctest::Approx(50.0).epsilon(1e-14));
}

TEST_CASE("s2 and s3 networks, fock engine") {
  const auto photon = states::build(states::EntangledPhoton{}, states::TruncationBudget::total);
  const auto s2 = run_s2(photon);
  CHECK(std::abs(s2.network_mean - 1.0) < 1e-12);
  CHECK(std::abs(s2.network_variance) < 1e-12);
  CHECK(s2.identity_deviation() < 1e-10);

  for (const states::StateSpec& spec : {states::StateSpec{states::CoherentState{Complex{1.0, 0.5}, 1.0}},
                                        states::StateSpec{states::AmplitudeSqueezedCoherent{1.5, 0.2}},
                                        states::StateSpec{states::TwoModeSqueezedVacuum{0.3, 0.4}}}) {
    CAPTURE(states::describe(spec));
    const auto psi = states::build(spec, states::TruncationBudget::total);
    CHECK(run_s2(psi).identity_deviation() < 1e-10);
    CHECK(run_s3(psi).identity_deviation() < 1e-10);
  }
}

TEST_CASE("property: fock network identity on random states") {
  std::mt19937 rng(53);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    const int cutoff = 4 + trial % 4;
    TwoModeFockState s(cutoff);
    double norm = 0.0;
    for (int nx = 0; nx <= cutoff; ++nx) {
      for (int ny = 0; nx + ny <= cutoff; ++ny) {
        const Complex z{g(rng), g(rng)};
        s.set_amplitude(nx, ny, z);
        norm += std::norm(z);
      }
    }
    for (auto& a : s.amplitudes()) a /= std::sqrt(norm);
    CHECK(run_s2(s).identity_deviation() < 1e-10);
    CHECK(run_s3(s).identity_deviation() < 1e-10);
  }
}

TEST_CASE("s2 and s3 networks, gaussian engine") {
  const auto beams = primary_beam(bright(5.0, 0.2));
  const auto s2 = run_s2(beams);
  CHECK(std::abs(s2.network_mean - 50.0) < 1e-10);
  CHECK(std::abs(s2.network_variance - kV) < 1e-9);
  const auto s3 = run_s3(beams);
  CHECK(std::abs(s3.network_mean) < 1e-10);
  CHECK(std::abs(s3.network_variance - kV3) < 1e-9);
  CHECK(s2.identity_deviation() < 1e-10);
  CHECK(s3.identity_deviation() < 1e-10);

  // Both d_x' and c_y' are bright in the S3 network.
  const auto out = analyzer_outputs(beams, 3);
  CHECK(std::abs(out.amplitude({"d", "x'"})) > 1.0);
  CHECK(std::abs(out.amplitude({"c", "y'"})) > 1.0);

  const auto coh = primary_beam({3.0, {1.0, 1.0}});
  CHECK(run_s2(coh).network_variance == doctest::Approx(18.0).epsilon(1e-13));
  CHECK(run_s3(coh).network_variance == doctest::Approx(18.0).epsilon(1e-13));
}

TEST_CASE("property: unused ports do not reach the detectors") {
  std::mt19937 rng(59);
  std::uniform_real_distribution<double> v(0.2, 5.0);
  const auto base = primary_beam(bright(4.0, 0.15));
  const double ref2 = run_s2(base).network_variance;
  const double ref3 = run_s3(base).network_variance;
  for (int trial = 0; trial < 10; ++trial) {
    auto probed = base;
    const double vp = v(rng);
    Eigen::Matrix2d c = Eigen::Vector2d(vp, 1.0 / vp + v(rng)).asDiagonal();
    probed.add_mode({"b", "x'"}, 0.0, c);
    probed.add_mode({"b", "y'"}, 0.0, c);
    CHECK(std::abs(run_s2(probed).network_variance - ref2) < 1e-12 * ref2);
    CHECK(std::abs(run_s3(probed).network_variance - ref3) < 1e-12 * ref3);
  }
}

TEST_CASE("joint squeeze") {
  const double n = std::pow(std::sinh(0.3), 2);
  const auto f = run_joint_squeeze_factorization(0.3);
  CHECK(std::abs(f.mean_n_x - n) < 1e-8);
  CHECK(std::abs(f.mean_n_y - n) < 1e-8);
  CHECK(f.infidelity < 1e-9);
  CHECK(f.stokes_deviation < 1e-8);
  const auto zero = run_joint_squeeze_factorization(0.0);
  CHECK(zero.mean_n_x == 0.0);
  CHECK(zero.mean_n_y == 0.0);
  const auto g = run_joint_squeeze_factorization_gaussian(0.3, 5.0);
  CHECK(g.covariance_deviation < 1e-10);
}

TEST_CASE("epr experiment") {
  const auto r = run_epr_experiment(0.5, 2.0, 1.0);
  CHECK(r.epr);
  CHECK(std::abs(r.epr_product - 2.56) < 1e-12);
  CHECK(std::abs(r.epr_bound - 4.0) < 1e-12);
  const auto coh = run_epr_experiment(1.0, 1.0, 1.0);
  CHECK(!coh.epr);
  CHECK(!coh.duan_nonseparable);
  CHECK(!coh.squeezed_state_entangled);
  const auto asym = run_epr_experiment(1.0, {0.8, 1.25}, {1.0, 1.0});
  CHECK(std::abs(asym.duan_sum - 1.8) < 1e-12);
  CHECK(asym.duan_nonseparable);
}

TEST_CASE("runner evaluates expectations") {
  ScenarioConfig cfg = resolve_scenario("number_state");
  const auto result = run_scenario(cfg);
  CHECK(result.passed());
  CHECK(result.kind == "state_table");
  CHECK(result.quantity("n3.mean_S1") == doctest::Approx(3.0));
  CHECK(!result.quantity("missing"));

  Expectation wrong{"n3.mean_S1", Expectation::Kind::value, 2.5, 1e-10};
  CHECK(!evaluate(wrong, result).passed);
  CHECK(evaluate(wrong, result, 1.0).passed);  // tolerance override
  Expectation bound{"n3.var_S1", Expectation::Kind::less_than, 1e-10, 0.0};
  CHECK(evaluate(bound, result).passed);
  Expectation absent{"n9.var_S1", Expectation::Kind::less_than, 1.0, 0.0};
  const auto outcome = evaluate(absent, result);
  CHECK(!outcome.passed);
  CHECK(!outcome.actual);

  cfg.expect.push_back(wrong);
  CHECK(!run_scenario(cfg).passed());
}

TEST_CASE("fock cutoff override") {
  const auto cfg = resolve_scenario("coherent_states");
  RunOptions small;
  small.fock_cutoff = 4;
  CHECK_THROWS_AS(run_scenario(cfg, small), InvalidArgument);
}

TEST_CASE("every bundled scenario passes") {
  for (const auto& entry : bundled_catalog()) {
    CAPTURE(entry.name);
    const auto result = run_scenario(parse_scenario(entry.body, entry.name));
    for (const auto& c : result.checks) {
      CAPTURE(report::describe_check(c));
      CHECK(c.passed);
    }
  }
}

TEST_CASE("determinism: identical config gives identical CSV") {
  for (const char* name : {"epr_experiment", "amplitude_squeezed", "s3_measurement"}) {
    const auto cfg = resolve_scenario(name);
    std::ostringstream a, b;
    report::write_result(a, run_scenario(cfg), report::Format::csv);
    report::write_result(b, run_scenario(cfg), report::Format::csv);
    CHECK(a.str() == b.str());
  }
}
