#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "stokes_lab/errors.hpp"
#include "stokes_lab/states.hpp"

using namespace stokes_lab;
using namespace stokes_lab::states;

namespace {

double max_dev(const StokesSummary& a, const StokesSummary& b) {
  double d = 0.0;
  for (int j = 0; j < 4; ++j) {
    d = std::max(d, std::abs(a.mean[j] - b.mean[j]));
    d = std::max(d, std::abs(a.variance[j] - b.variance[j]));
  }
  return d;
}

std::vector<StateSpec> corpus() {
  std::vector<StateSpec> out;
  for (int n : {0, 1, 3, 5}) out.push_back(NumberState{n});
  out.push_back(EntangledPhoton{});
  const Complex i{0.0, 1.0};
  const Complex diag = Complex{1.0, 1.0} / std::sqrt(2.0);
  const std::vector<Complex> alphas = {0.0, 1.0, 2.0, i, diag, 2.0 * i};
  for (Complex ax : alphas) {
    for (Complex ay : {Complex{0.0}, Complex{1.0}, diag}) out.push_back(CoherentState{ax, ay});
  }
  for (double s : {0.0, 0.2, 0.5, 0.8}) {
    for (double theta : {0.0, std::numbers::pi / 3.0}) out.push_back(TwoModeSqueezedVacuum{s, theta});
  }
  for (double a : {0.0, 1.0, 2.0}) {
    for (double s : {0.0, 0.2, 0.5}) out.push_back(AmplitudeSqueezedCoherent{a, s});
  }
  return out;
}

bool finite_dimensional(const StateSpec& spec) {
  return std::holds_alternative<NumberState>(spec) || std::holds_alternative<EntangledPhoton>(spec);
}

}  // namespace

TEST_CASE("build examples") {
  const auto n3 = build(NumberState{3}, 5);
  CHECK(std::abs(n3.amplitude(3, 0) - 1.0) < 1e-15);
  CHECK(std::abs(n3.squared_norm() - 1.0) < 1e-15);

  const auto tmsv0 = build(TwoModeSqueezedVacuum{0.0, 1.0}, 4);
  CHECK(std::abs(tmsv0.amplitude(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(tmsv0.squared_norm() - 1.0) < 1e-15);

  const auto sq = build(AmplitudeSqueezedCoherent{0.0, 0.3});
  const double expected = std::pow(std::sinh(0.3), 2);
  CHECK(expected == doctest::Approx(0.0927326091).epsilon(1e-10));
  CHECK(std::abs(mean_photon_number(sq, Mode::x) - expected) < 1e-8);
  CHECK(std::abs(mean_photon_number(sq, Mode::y) - expected) < 1e-8);
}

TEST_CASE("build rejects a cutoff below the truncation rule") {
  const StateSpec spec = CoherentState{2.0, 1.0};
  const int required = required_cutoff(spec);
  CHECK(required > 10);
  try {
    build(spec, required - 1);
    FAIL("expected InvalidArgument");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find(std::to_string(required)) != std::string::npos);
  }
  CHECK_NOTHROW(build(spec, required));
  CHECK_THROWS_AS(build(NumberState{4}, 3), InvalidArgument);
}

TEST_CASE("truncation budget") {
  const StateSpec spec = CoherentState{1.5, 1.5};
  CHECK(required_cutoff(spec, TruncationBudget::total) > required_cutoff(spec, TruncationBudget::per_mode));
  CHECK(required_cutoff(NumberState{3}) == 3);
  CHECK(required_cutoff(EntangledPhoton{}, TruncationBudget::total) == 1);
  const auto poisson = displaced_squeezed_distribution(1.0, 0.0, 60);
  for (int n = 0; n <= 4; ++n) {
    CHECK(poisson[n] == doctest::Approx(std::exp(-1.0) / std::tgamma(n + 1.0)).epsilon(1e-13));
  }
  // Mean photon number of D(alpha) S(s)|0> is alpha^2 + sinh^2 s.
  const auto p = displaced_squeezed_distribution(2.0, 0.4, 120);
  double mean = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) mean += static_cast<double>(n) * p[n];
  CHECK(mean == doctest::Approx(4.0 + std::pow(std::sinh(0.4), 2)).epsilon(1e-12));
  CHECK_THROWS_AS(displaced_squeezed_distribution(-1.0, 0.0, 4), InvalidArgument);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(NumberState{-1}), InvalidArgument);
  CHECK_THROWS_AS(validate(TwoModeSqueezedVacuum{-0.1, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(validate(TwoModeSqueezedVacuum{0.1, 2.0 * std::numbers::pi}), InvalidArgument);
  CHECK_THROWS_AS(validate(AmplitudeSqueezedCoherent{-1.0, 0.1}), InvalidArgument);
  CHECK_THROWS_AS(validate(AmplitudeSqueezedCoherent{1.0, -0.1}), InvalidArgument);
  CHECK_NOTHROW(validate(CoherentState{Complex{0.0, -3.0}, 0.0}));
  CHECK(describe(NumberState{3}) == "number(n=3)");
}

TEST_CASE("oracle examples") {
  SUBCASE("two-mode squeezed vacuum s = 0.5") {
    const auto o = oracle_summary(TwoModeSqueezedVacuum{0.5, 0.0});
    CHECK(o.mean[0] == doctest::Approx(0.5430806348).epsilon(1e-10));
    for (int j : {0, 2, 3}) CHECK(o.variance[j] == doctest::Approx(1.3810978455).epsilon(1e-10));
    CHECK(o.mean[1] == 0.0);
    CHECK(o.variance[1] == 0.0);
    CHECK(o.poincare_rhs == doctest::Approx(2.7621956911).epsilon(1e-10));
  }
  SUBCASE("amplitude squeezed alpha = 3, s = 0.3") {
    const auto o = oracle_summary(AmplitudeSqueezedCoherent{3.0, 0.3});
    CHECK(o.mean[0] == doctest::Approx(18.1854652182).epsilon(1e-10));
    CHECK(o.mean[2] == doctest::Approx(18.0).epsilon(1e-12));
    for (int j : {0, 1, 2}) CHECK(o.variance[j] == doctest::Approx(10.2839372334).epsilon(1e-10));
    CHECK(o.variance[3] == doctest::Approx(32.7981384070).epsilon(1e-10));
  }
  SUBCASE("coherent alpha_x = 2") {
    const auto o = oracle_summary(CoherentState{2.0, 0.0});
    for (int j = 0; j < 4; ++j) CHECK(o.variance[j] == doctest::Approx(4.0));
    CHECK(o.poincare_rhs == doctest::Approx(28.0));
  }
  SUBCASE("coherent alpha_x = 2, alpha_y = 1") {
    const auto o = oracle_summary(CoherentState{2.0, 1.0});
    CHECK(o.mean[0] == doctest::Approx(5.0));
    CHECK(o.mean[1] == doctest::Approx(3.0));
    CHECK(o.mean[2] == doctest::Approx(4.0));
    CHECK(std::abs(o.mean[3]) < 1e-15);
    for (int j = 0; j < 4; ++j) CHECK(o.variance[j] == doctest::Approx(5.0));
  }
}

TEST_CASE("engine matches oracle over the corpus") {
  for (const auto& spec : corpus()) {
    CAPTURE(describe(spec));
    const auto engine = stokes_summary(build(spec));
    const auto oracle = oracle_summary(spec);
    CHECK(max_dev(engine, oracle) < (finite_dimensional(spec) ? 1e-10 : 1e-6));
    CHECK(std::abs(engine.poincare_residual()) <= 1e-9 * std::max(1.0, engine.poincare_rhs));
    for (double slack : engine.uncertainty_slack()) CHECK(slack >= -1e-9 * std::max(1.0, engine.mean[0] * engine.mean[0]));
  }
}

TEST_CASE("coherent alpha_x = 2, alpha_y = 1 from the engine") {
  const auto s = stokes_summary(build(CoherentState{2.0, 1.0}));
  CHECK(std::abs(s.mean[0] - 5.0) < 1e-6);
  CHECK(std::abs(s.mean[1] - 3.0) < 1e-6);
  CHECK(std::abs(s.mean[2] - 4.0) < 1e-6);
  CHECK(std::abs(s.mean[3]) < 1e-6);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(s.variance[j] - 5.0) < 1e-6);
}

TEST_CASE("two-mode squeezed statistics do not depend on the phase") {
  for (double s : {0.2, 0.5}) {
    const auto ref = stokes_summary(build(TwoModeSqueezedVacuum{s, 0.0}));
    for (double theta : {0.7, std::numbers::pi / 3.0, 4.0}) {
      CHECK(max_dev(stokes_summary(build(TwoModeSqueezedVacuum{s, theta})), ref) < 1e-10);
    }
  }
}

TEST_CASE("two-mode squeezed vacuum is annihilated by S1") {
  const auto psi = build(TwoModeSqueezedVacuum{0.5, 1.0});
  CHECK(std::sqrt(apply_stokes(psi, 1).squared_norm()) < 1e-6);
}

TEST_CASE("amplitude squeezed quadratures") {
  const double alpha = 2.0, s = 0.3;
  const auto psi = build(AmplitudeSqueezedCoherent{alpha, s});
  for (Mode m : {Mode::x, Mode::y}) {
    const auto q = quadrature_moments(psi, m);
    CHECK(std::abs(q.mean_plus - 2.0 * alpha) < 1e-6);
    CHECK(std::abs(q.mean_minus) < 1e-6);
    CHECK(std::abs(q.variance_plus - std::exp(-2.0 * s)) < 1e-6);
    CHECK(std::abs(q.variance_minus - std::exp(2.0 * s)) < 1e-6);
  }
}

TEST_CASE("polarization squeezing") {
  CHECK(is_polarization_squeezed(oracle_summary(NumberState{3})) == std::set<int>{1});
  CHECK(is_polarization_squeezed(oracle_summary(EntangledPhoton{})) == std::set<int>{2});
  CHECK(is_polarization_squeezed(oracle_summary(CoherentState{2.0, 1.0})).empty());
  CHECK(is_polarization_squeezed(stokes_summary(build(CoherentState{2.0, 1.0})), 1e-6).empty());
  const auto asq = is_polarization_squeezed(oracle_summary(AmplitudeSqueezedCoherent{3.0, 0.3}));
  CHECK(asq == std::set<int>{1, 2});
}
