#include "stokes_lab/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fock_detail.hpp"
#include "stokes_lab/errors.hpp"
#include "stokes_lab/jones.hpp"

namespace stokes_lab {

namespace {

constexpr Complex kI{0.0, 1.0};

// S_j |in> written into a grid with `out_cutoff`; components beyond it are dropped.
std::vector<Complex> stokes_action(const TwoModeFockState& in, int j, int out_cutoff) {
  const int levels = in.levels();
  const int out_levels = out_cutoff + 1;
  std::vector<Complex> out(static_cast<std::size_t>(out_levels) * out_levels);
  const auto root = detail::sqrt_table(std::max(in.cutoff(), out_cutoff) + 1);
  auto put = [&](int nx, int ny, Complex v) {
    if (nx > out_cutoff || ny > out_cutoff) return;
    out[static_cast<std::size_t>(nx * out_levels + ny)] += v;
  };
  for (int nx = 0; nx < levels; ++nx) {
    for (int ny = 0; ny < levels; ++ny) {
      const Complex c = in.amplitude(nx, ny);
      if (c == Complex{}) continue;
      switch (j) {
        case 0: put(nx, ny, static_cast<double>(nx + ny) * c); break;
        case 1: put(nx, ny, static_cast<double>(nx - ny) * c); break;
        case 2:
        case 3: {
          // a_x^dagger a_y and a_y^dagger a_x
          const Complex up = ny > 0 ? root[nx + 1] * root[ny] * c : Complex{};
          const Complex down = nx > 0 ? root[nx] * root[ny + 1] * c : Complex{};
          if (j == 2) {
            if (ny > 0) put(nx + 1, ny - 1, up);
            if (nx > 0) put(nx - 1, ny + 1, down);
          } else {
            if (ny > 0) put(nx + 1, ny - 1, -kI * up);
            if (nx > 0) put(nx - 1, ny + 1, kI * down);
          }
          break;
        }
        default: throw InvalidArgument("Stokes index must be 0..3");
      }
    }
  }
  return out;
}

TwoModeFockState from_vector(int cutoff, std::vector<Complex> v, double defect) {
  TwoModeFockState s(cutoff);
  std::copy(v.begin(), v.end(), s.amplitudes().begin());
  s.add_norm_defect(defect);
  return s;
}

void require_unleaked(const TwoModeFockState& state) {
  if (!(state.norm_defect() < kLeakTolerance)) {
    std::ostringstream msg;
    msg << "truncation leak: norm defect " << state.norm_defect() << " exceeds "
        << kLeakTolerance << " at cutoff " << state.cutoff();
    throw TruncationLeak(msg.str(), state.norm_defect());
  }
  if (state.squared_norm() == 0.0) throw TruncationLeak("state vector is zero", 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------

TwoModeFockState::TwoModeFockState(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 1) throw InvalidArgument("cutoff must be >= 1");
  amplitudes_.assign(static_cast<std::size_t>(cutoff + 1) * static_cast<std::size_t>(cutoff + 1),
                     Complex{});
}

TwoModeFockState TwoModeFockState::basis(int cutoff, int n_x, int n_y) {
  TwoModeFockState s(cutoff);
  if (n_x < 0 || n_y < 0 || n_x > cutoff || n_y > cutoff) {
    throw InvalidArgument("basis state outside the truncated space");
  }
  s.set_amplitude(n_x, n_y, 1.0);
  return s;
}

double TwoModeFockState::squared_norm() const noexcept {
  double s = 0.0;
  for (const auto& z : amplitudes_) s += std::norm(z);
  return s;
}

TwoModeFockState vacuum(int cutoff) { return TwoModeFockState::basis(cutoff, 0, 0); }

TwoModeFockState resize(const TwoModeFockState& state, int cutoff) {
  TwoModeFockState out(cutoff);
  out.add_norm_defect(state.norm_defect());
  for (int nx = 0; nx < state.levels(); ++nx) {
    for (int ny = 0; ny < state.levels(); ++ny) {
      const Complex c = state.amplitude(nx, ny);
      if (nx <= cutoff && ny <= cutoff) {
        out.set_amplitude(nx, ny, c);
      } else {
        out.add_norm_defect(std::norm(c));
      }
    }
  }
  return out;
}

Complex inner_product(const TwoModeFockState& a, const TwoModeFockState& b) {
  const int levels = std::min(a.levels(), b.levels());
  Complex sum{};
  for (int nx = 0; nx < levels; ++nx) {
    for (int ny = 0; ny < levels; ++ny) sum += std::conj(a.amplitude(nx, ny)) * b.amplitude(nx, ny);
  }
  return sum;
}

TwoModeFockState apply_ladder(const TwoModeFockState& state, Mode mode, Ladder kind) {
  const int cutoff = state.cutoff();
  TwoModeFockState out(cutoff);
  out.add_norm_defect(state.norm_defect());
  const auto root = detail::sqrt_table(cutoff + 1);
  for (int nx = 0; nx <= cutoff; ++nx) {
    for (int ny = 0; ny <= cutoff; ++ny) {
      const Complex c = state.amplitude(nx, ny);
      if (c == Complex{}) continue;
      int n[2] = {nx, ny};
      int& level = n[static_cast<int>(mode)];
      if (kind == Ladder::annihilate) {
        if (level == 0) continue;
        const double f = root[level];
        --level;
        out.set_amplitude(n[0], n[1], f * c);
      } else {
        if (level == cutoff) {
          out.add_norm_defect(std::norm(c));
          continue;
        }
        ++level;
        out.set_amplitude(n[0], n[1], root[level] * c);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

TwoModeFockState apply_stokes(const TwoModeFockState& state, int j) {
  const int cutoff = state.cutoff() + 1;
  return from_vector(cutoff, stokes_action(state, j, cutoff), state.norm_defect());
}

StokesSummary stokes_summary(const TwoModeFockState& state) {
  require_unleaked(state);
  const double weight = state.squared_norm();
  StokesSummary out;

  double n1 = 0.0, n2 = 0.0, d1 = 0.0, d2 = 0.0;
  for (int nx = 0; nx < state.levels(); ++nx) {
    for (int ny = 0; ny < state.levels(); ++ny) {
      const double p = std::norm(state.amplitude(nx, ny));
      const double total = nx + ny;
      const double diff = nx - ny;
      n1 += p * total;
      n2 += p * total * total;
      d1 += p * diff;
      d2 += p * diff * diff;
    }
  }
  out.mean[0] = n1 / weight;
  out.mean[1] = d1 / weight;
  const double s0_sq = n2 / weight;
  out.second_moment[0] = d2 / weight;

  // S2 and S3 act off-diagonally; evaluate S_j|psi> on a grid one level larger
  // so that <S_j^2> = ||S_j psi||^2 is exact for the stored vector.
  const int ext = state.cutoff() + 1;
  const int ext_levels = ext + 1;
  for (int j = 2; j <= 3; ++j) {
    const auto v = stokes_action(state, j, ext);
    Complex overlap{};
    double sq = 0.0;
    for (int nx = 0; nx < ext_levels; ++nx) {
      for (int ny = 0; ny < ext_levels; ++ny) {
        const Complex w = v[static_cast<std::size_t>(nx * ext_levels + ny)];
        sq += std::norm(w);
        if (nx <= state.cutoff() && ny <= state.cutoff()) overlap += std::conj(state.amplitude(nx, ny)) * w;
      }
    }
    out.mean[j] = overlap.real() / weight;
    out.second_moment[j - 1] = sq / weight;
  }

  out.variance[0] = s0_sq - out.mean[0] * out.mean[0];
  for (int j = 1; j <= 3; ++j) out.variance[j] = out.second_moment[j - 1] - out.mean[j] * out.mean[j];
  out.poincare_lhs = out.second_moment[0] + out.second_moment[1] + out.second_moment[2];
  out.poincare_rhs = s0_sq + 2.0 * out.mean[0];
  return out;
}

double poincare_residual(const TwoModeFockState& state) { return stokes_summary(state).poincare_residual(); }

double mean_photon_number(const TwoModeFockState& state, Mode mode) {
  double sum = 0.0;
  for (int nx = 0; nx < state.levels(); ++nx) {
    for (int ny = 0; ny < state.levels(); ++ny) {
      sum += std::norm(state.amplitude(nx, ny)) * (mode == Mode::x ? nx : ny);
    }
  }
  return sum / state.squared_norm();
}

CountingStatistics photon_counting(const TwoModeFockState& state, int sign) {
  double w = 0.0, m1 = 0.0, m2 = 0.0;
  for (int nx = 0; nx < state.levels(); ++nx) {
    for (int ny = 0; ny < state.levels(); ++ny) {
      const double p = std::norm(state.amplitude(nx, ny));
      const double k = nx + sign * ny;
      w += p;
      m1 += p * k;
      m2 += p * k * k;
    }
  }
  const double mean = m1 / w;
  return {mean, m2 / w - mean * mean};
}

QuadratureMoments quadrature_moments(const TwoModeFockState& state, Mode mode) {
  const auto root = detail::sqrt_table(state.cutoff());
  Complex a1{}, a2{};
  double number = 0.0;
  for (int nx = 0; nx < state.levels(); ++nx) {
    for (int ny = 0; ny < state.levels(); ++ny) {
      const int n = mode == Mode::x ? nx : ny;
      const Complex c = state.amplitude(nx, ny);
      number += n * std::norm(c);
      if (n >= 1) {
        const Complex lower = mode == Mode::x ? state.amplitude(nx - 1, ny) : state.amplitude(nx, ny - 1);
        a1 += std::conj(lower) * root[n] * c;
      }
      if (n >= 2) {
        const Complex lower = mode == Mode::x ? state.amplitude(nx - 2, ny) : state.amplitude(nx, ny - 2);
        a2 += std::conj(lower) * root[n] * root[n - 1] * c;
      }
    }
  }
  const double w = state.squared_norm();
  a1 /= w;
  a2 /= w;
  number /= w;
  QuadratureMoments q;
  q.mean_plus = 2.0 * a1.real();
  q.mean_minus = 2.0 * a1.imag();
  const double plus_sq = 2.0 * a2.real() + 2.0 * number + 1.0;
  const double minus_sq = -2.0 * a2.real() + 2.0 * number + 1.0;
  q.variance_plus = plus_sq - q.mean_plus * q.mean_plus;
  q.variance_minus = minus_sq - q.mean_minus * q.mean_minus;
  return q;
}

double commutator_residual(int cutoff, int guard, StokesIdentity identity) {
  if (guard < 2) throw InvalidArgument("guard must be >= 2");
  if (guard > cutoff) throw InvalidArgument("guard must not exceed the cutoff");

  int a = 0, b = 0, rhs = -1;  // [S_a, S_b] = 2i S_rhs, rhs < 0 means zero
  switch (identity) {
    case StokesIdentity::s2_s3: a = 2; b = 3; rhs = 1; break;
    case StokesIdentity::s3_s1: a = 3; b = 1; rhs = 2; break;
    case StokesIdentity::s1_s2: a = 1; b = 2; rhs = 3; break;
    case StokesIdentity::s0_s1: a = 0; b = 1; break;
    case StokesIdentity::s0_s2: a = 0; b = 2; break;
    case StokesIdentity::s0_s3: a = 0; b = 3; break;
  }

  auto apply = [cutoff](const TwoModeFockState& s, int j) {
    return from_vector(cutoff, stokes_action(s, j, cutoff), 0.0);
  };

  double worst = 0.0;
  for (int nx = 0; nx <= cutoff - guard; ++nx) {
    for (int ny = 0; nx + ny <= cutoff - guard; ++ny) {
      const auto psi = TwoModeFockState::basis(cutoff, nx, ny);
      const auto ab = apply(apply(psi, b), a);
      const auto ba = apply(apply(psi, a), b);
      std::vector<Complex> expected(psi.dimension());
      if (rhs >= 0) {
        const auto c = apply(psi, rhs);
        for (std::size_t i = 0; i < expected.size(); ++i) expected[i] = 2.0 * kI * c.amplitudes()[i];
      }
      for (std::size_t i = 0; i < expected.size(); ++i) {
        worst = std::max(worst, std::abs(ab.amplitudes()[i] - ba.amplitudes()[i] - expected[i]));
      }
    }
  }
  return worst;
}

SchwingerNumbers schwinger_lm(int n_x, int n_y) {
  if (n_x < 0 || n_y < 0) throw InvalidArgument("photon numbers must be nonnegative");
  return {HalfInteger{n_x + n_y}, HalfInteger{n_x - n_y}};
}

// ---------------------------------------------------------------------------

ModeMap::ModeMap(const Eigen::Matrix2cd& matrix)
    : matrix_(matrix), residual_(jones::unitarity_residual(matrix)) {
  if (!(residual_ <= 1e-12)) {
    std::ostringstream msg;
    msg << "mode map is not unitary (residual " << residual_ << ")";
    throw InvalidArgument(msg.str());
  }
}

ModeMap ModeMap::identity() { return ModeMap(Eigen::Matrix2cd::Identity()); }
ModeMap ModeMap::rotation45() { return ModeMap(jones::rotation45()); }
ModeMap ModeMap::s3_analyzer() { return ModeMap(jones::s3_analyzer()); }

Eigen::Matrix2cd ModeMap::logarithm() const {
  // A unitary matrix is normal, so its Schur form is diagonal up to roundoff.
  Eigen::ComplexSchur<Eigen::Matrix2cd> schur(matrix_);
  const Eigen::Matrix2cd& q = schur.matrixU();
  const Eigen::Matrix2cd& t = schur.matrixT();
  Eigen::Matrix2cd phases = Eigen::Matrix2cd::Zero();
  for (int k = 0; k < 2; ++k) phases(k, k) = kI * std::arg(t(k, k));
  const Eigen::Matrix2cd h = q * phases * q.adjoint();
  return 0.5 * (h - h.adjoint());
}

TwoModeFockState confine_total(const TwoModeFockState& state) {
  TwoModeFockState confined(state.cutoff());
  confined.add_norm_defect(state.norm_defect());
  for (int nx = 0; nx < state.levels(); ++nx) {
    for (int ny = 0; ny < state.levels(); ++ny) {
      const Complex c = state.amplitude(nx, ny);
      if (nx + ny <= state.cutoff()) {
        confined.set_amplitude(nx, ny, c);
      } else {
        confined.add_norm_defect(std::norm(c));
      }
    }
  }
  return confined;
}

TwoModeFockState apply_mode_map(const TwoModeFockState& state, const ModeMap& map) {
  return apply_generator_exponential(confine_total(state), Generator::passive(map.logarithm()));
}

}  // namespace stokes_lab
