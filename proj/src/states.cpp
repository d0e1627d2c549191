#include "stokes_lab/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <type_traits>

#include "stokes_lab/errors.hpp"

namespace stokes_lab::states {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string format_complex(Complex z) {
  std::ostringstream out;
  out << z.real();
  if (z.imag() != 0.0) out << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return out.str();
}

// Fills second moments and the two sides of the Poincare identity from means and variances.
StokesSummary complete(StokesSummary s) {
  for (int j = 1; j <= 3; ++j) s.second_moment[j - 1] = s.variance[j] + s.mean[j] * s.mean[j];
  s.poincare_lhs = s.second_moment[0] + s.second_moment[1] + s.second_moment[2];
  s.poincare_rhs = s.variance[0] + s.mean[0] * s.mean[0] + 2.0 * s.mean[0];
  return s;
}

}  // namespace

void validate(const StateSpec& spec) {
  std::visit(overloaded{
                 [](const NumberState& st) {
                   if (st.n < 0) throw InvalidArgument("number state needs n >= 0");
                 },
                 [](const CoherentState& st) {
                   if (!finite(st.alpha_x) || !finite(st.alpha_y)) {
                     throw InvalidArgument("coherent amplitudes must be finite");
                   }
                 },
                 [](const EntangledPhoton&) {},
                 [](const TwoModeSqueezedVacuum& st) {
                   if (!(st.s >= 0.0) || !std::isfinite(st.s)) throw InvalidArgument("squeeze parameter s must be >= 0");
                   if (!(st.theta >= 0.0 && st.theta < 2.0 * std::numbers::pi)) {
                     throw InvalidArgument("squeeze phase theta must lie in [0, 2 pi)");
                   }
                 },
                 [](const AmplitudeSqueezedCoherent& st) {
                   if (!(st.alpha >= 0.0) || !std::isfinite(st.alpha)) throw InvalidArgument("alpha must be real and >= 0");
                   if (!(st.s >= 0.0) || !std::isfinite(st.s)) throw InvalidArgument("squeeze parameter s must be >= 0");
                 },
             },
             spec);
}

std::string describe(const StateSpec& spec) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const NumberState& st) { out << "number(n=" << st.n << ")"; },
                 [&](const CoherentState& st) {
                   out << "coherent(alpha_x=" << format_complex(st.alpha_x)
                       << ",alpha_y=" << format_complex(st.alpha_y) << ")";
                 },
                 [&](const EntangledPhoton&) { out << "entangled_photon"; },
                 [&](const TwoModeSqueezedVacuum& st) {
                   out << "two_mode_squeezed_vacuum(s=" << st.s << ",theta=" << st.theta << ")";
                 },
                 [&](const AmplitudeSqueezedCoherent& st) {
                   out << "amplitude_squeezed_coherent(alpha=" << st.alpha << ",s=" << st.s << ")";
                 },
             },
             spec);
  return out.str();
}

TwoModeFockState build(const StateSpec& spec, int cutoff) {
  validate(spec);
  if (cutoff < 1) throw InvalidArgument("cutoff must be >= 1");
  const int required = required_cutoff(spec, TruncationBudget::per_mode);
  if (cutoff < required) {
    std::ostringstream msg;
    msg << "cutoff " << cutoff << " is too small for " << describe(spec) << ": required cutoff " << required;
    throw InvalidArgument(msg.str());
  }

  return std::visit(
      overloaded{
          [&](const NumberState& st) { return TwoModeFockState::basis(cutoff, st.n, 0); },
          [&](const CoherentState& st) {
            Generator g = Generator::displacement(Mode::x, st.alpha_x);
            g += Generator::displacement(Mode::y, st.alpha_y);
            return apply_generator_exponential(vacuum(cutoff), g);
          },
          [&](const EntangledPhoton&) {
            TwoModeFockState s(cutoff);
            s.set_amplitude(1, 0, 1.0 / std::numbers::sqrt2);
            s.set_amplitude(0, 1, 1.0 / std::numbers::sqrt2);
            return s;
          },
          [&](const TwoModeSqueezedVacuum& st) {
            return apply_generator_exponential(vacuum(cutoff),
                                               Generator::two_mode_squeeze(std::polar(st.s, st.theta)));
          },
          [&](const AmplitudeSqueezedCoherent& st) {
            // D S acting on vacuum: squeeze first, then displace.
            Generator squeeze = Generator::single_mode_squeeze(Mode::x, st.s);
            squeeze += Generator::single_mode_squeeze(Mode::y, st.s);
            Generator displace = Generator::displacement(Mode::x, st.alpha);
            displace += Generator::displacement(Mode::y, st.alpha);
            return apply_generator_exponential(apply_generator_exponential(vacuum(cutoff), squeeze), displace);
          },
      },
      spec);
}

TwoModeFockState build(const StateSpec& spec, TruncationBudget budget) {
  return build(spec, required_cutoff(spec, budget));
}

StokesSummary oracle_summary(const StateSpec& spec) {
  validate(spec);
  StokesSummary s;
  std::visit(overloaded{
                 [&](const NumberState& st) {
                   const double n = st.n;
                   s.mean = {n, n, 0.0, 0.0};
                   s.variance = {0.0, 0.0, n, n};
                 },
                 [&](const CoherentState& st) {
                   const double nx = std::norm(st.alpha_x);
                   const double ny = std::norm(st.alpha_y);
                   const Complex cross = std::conj(st.alpha_x) * st.alpha_y;
                   s.mean = {nx + ny, nx - ny, 2.0 * cross.real(), 2.0 * cross.imag()};
                   s.variance = {nx + ny, nx + ny, nx + ny, nx + ny};
                 },
                 [&](const EntangledPhoton&) {
                   s.mean = {1.0, 0.0, 1.0, 0.0};
                   s.variance = {0.0, 1.0, 0.0, 1.0};
                 },
                 [&](const TwoModeSqueezedVacuum& st) {
                   const double sh = std::sinh(st.s);
                   const double sh2 = std::sinh(2.0 * st.s);
                   s.mean = {2.0 * sh * sh, 0.0, 0.0, 0.0};
                   s.variance = {sh2 * sh2, 0.0, sh2 * sh2, sh2 * sh2};
                 },
                 [&](const AmplitudeSqueezedCoherent& st) {
                   const double a2 = st.alpha * st.alpha;
                   const double sh = std::sinh(st.s);
                   const double sh2 = std::sinh(2.0 * st.s);
                   const double squeezed = 2.0 * a2 * std::exp(-2.0 * st.s) + sh2 * sh2;
                   s.mean = {2.0 * a2 + 2.0 * sh * sh, 0.0, 2.0 * a2, 0.0};
                   s.variance = {squeezed, squeezed, squeezed, 2.0 * a2 * std::exp(2.0 * st.s)};
                 },
             },
             spec);
  return complete(s);
}

std::set<int> is_polarization_squeezed(const StokesSummary& summary, double margin) {
  std::set<int> out;
  for (int j = 1; j <= 3; ++j) {
    if (summary.variance[j] < summary.mean[0] - margin) out.insert(j);
  }
  return out;
}

}  // namespace stokes_lab::states
