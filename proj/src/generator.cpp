#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fock_detail.hpp"
#include "stokes_lab/errors.hpp"
#include "stokes_lab/fock_core.hpp"

namespace stokes_lab {

namespace {

// Ladder operators on different modes commute, so a stable sort by mode gives
// a canonical spelling of each monomial.
std::vector<LadderOp> canonical(std::vector<LadderOp> ops) {
  std::stable_sort(ops.begin(), ops.end(), [](const LadderOp& a, const LadderOp& b) {
    return static_cast<int>(a.mode) < static_cast<int>(b.mode);
  });
  return ops;
}

std::vector<int> key_of(const std::vector<LadderOp>& ops) {
  std::vector<int> key;
  key.reserve(ops.size());
  for (const auto& op : ops) key.push_back(2 * static_cast<int>(op.mode) + static_cast<int>(op.kind));
  return key;
}

LadderOp adjoint(LadderOp op) {
  return {op.mode, op.kind == Ladder::create ? Ladder::annihilate : Ladder::create};
}

constexpr LadderOp create(Mode m) { return {m, Ladder::create}; }
constexpr LadderOp annihilate(Mode m) { return {m, Ladder::annihilate}; }

}  // namespace

Generator& Generator::add(Complex coefficient, std::vector<LadderOp> ops) {
  if (coefficient != Complex{}) terms_.push_back({coefficient, std::move(ops)});
  return *this;
}

Generator& Generator::operator+=(const Generator& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

Generator Generator::operator-() const { return scaled(-1.0); }

Generator Generator::scaled(double factor) const {
  Generator out = *this;
  for (auto& t : out.terms_) t.coefficient *= factor;
  return out;
}

Generator Generator::displacement(Mode mode, Complex alpha) {
  Generator g;
  g.add(alpha, {create(mode)});
  g.add(-std::conj(alpha), {annihilate(mode)});
  return g;
}

Generator Generator::single_mode_squeeze(Mode mode, Complex zeta) {
  Generator g;
  g.add(0.5 * std::conj(zeta), {annihilate(mode), annihilate(mode)});
  g.add(-0.5 * zeta, {create(mode), create(mode)});
  return g;
}

Generator Generator::two_mode_squeeze(Complex zeta) {
  Generator g;
  g.add(std::conj(zeta), {annihilate(Mode::x), annihilate(Mode::y)});
  g.add(-zeta, {create(Mode::x), create(Mode::y)});
  return g;
}

Generator Generator::passive(const Eigen::Matrix2cd& h) {
  constexpr Mode modes[2] = {Mode::x, Mode::y};
  Generator g;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) g.add(h(j, k), {create(modes[j]), annihilate(modes[k])});
  }
  return g;
}

double Generator::norm_bound(int cutoff) const {
  const double per_op = std::sqrt(static_cast<double>(cutoff));
  double bound = 0.0;
  for (const auto& t : terms_) {
    bound += std::abs(t.coefficient) * std::pow(per_op, static_cast<double>(t.ops.size()));
  }
  return bound;
}

double Generator::anti_hermiticity_residual() const {
  // Collect G + G^dagger in canonical form; it vanishes iff G is anti-Hermitian.
  std::map<std::vector<int>, Complex> sum;
  for (const auto& t : terms_) {
    sum[key_of(canonical(t.ops))] += t.coefficient;
    std::vector<LadderOp> adj(t.ops.rbegin(), t.ops.rend());
    for (auto& op : adj) op = adjoint(op);
    sum[key_of(canonical(adj))] += std::conj(t.coefficient);
  }
  double worst = 0.0;
  for (const auto& [key, c] : sum) worst = std::max(worst, std::abs(c));
  return worst;
}

namespace detail {

void accumulate_generator(const Generator& generator, int cutoff, std::span<const Complex> in,
                          std::span<Complex> out, Complex scale) {
  const int levels = cutoff + 1;
  const auto& root = sqrt_table(cutoff + 1);
  for (const auto& term : generator.terms()) {
    const Complex c = scale * term.coefficient;
    for (int nx0 = 0; nx0 < levels; ++nx0) {
      for (int ny0 = 0; ny0 < levels; ++ny0) {
        const Complex amp = in[static_cast<std::size_t>(nx0 * levels + ny0)];
        if (amp == Complex{}) continue;
        int n[2] = {nx0, ny0};
        double factor = 1.0;
        bool alive = true;
        for (auto it = term.ops.rbegin(); it != term.ops.rend(); ++it) {
          int& level = n[static_cast<int>(it->mode)];
          if (it->kind == Ladder::annihilate) {
            if (level == 0) { alive = false; break; }
            factor *= root[static_cast<std::size_t>(level)];
            --level;
          } else {
            if (level == cutoff) { alive = false; break; }
            ++level;
            factor *= root[static_cast<std::size_t>(level)];
          }
        }
        if (alive) out[static_cast<std::size_t>(n[0] * levels + n[1])] += c * factor * amp;
      }
    }
  }
}

double vector_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace detail

TwoModeFockState apply_generator(const TwoModeFockState& state, const Generator& generator) {
  TwoModeFockState out(state.cutoff());
  out.add_norm_defect(state.norm_defect());
  detail::accumulate_generator(generator, state.cutoff(), state.amplitudes(), out.amplitudes(), 1.0);
  return out;
}

TwoModeFockState apply_generator_exponential(const TwoModeFockState& state,
                                             const Generator& generator,
                                             const ExponentialOptions& options) {
  const double skew = generator.anti_hermiticity_residual();
  double scale = 1.0;
  for (const auto& t : generator.terms()) scale = std::max(scale, std::abs(t.coefficient));
  if (skew > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "generator is not anti-Hermitian (residual " << skew << ")";
    throw InvalidArgument(msg.str());
  }

  TwoModeFockState result = state;
  const double bound = generator.norm_bound(state.cutoff());
  if (bound == 0.0) return result;

  int pieces = 1;
  while (bound / pieces >= options.piece_norm) pieces *= 2;

  const std::size_t dim = state.dimension();
  std::vector<Complex> term(dim);
  std::vector<Complex> next(dim);
  auto current = result.amplitudes();

  for (int piece = 0; piece < pieces; ++piece) {
    std::copy(current.begin(), current.end(), term.begin());
    const double reference = std::max(1.0, detail::vector_norm(current));
    bool converged = false;
    double increment = 0.0;
    for (int order = 1; order <= options.max_order; ++order) {
      std::fill(next.begin(), next.end(), Complex{});
      detail::accumulate_generator(generator, state.cutoff(), term, next,
                                   1.0 / (static_cast<double>(pieces) * order));
      term.swap(next);
      for (std::size_t i = 0; i < dim; ++i) current[i] += term[i];
      increment = detail::vector_norm(term);
      if (!std::isfinite(increment)) break;
      if (increment < options.increment_tol * reference) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "Taylor series did not converge: piece " << piece << " of " << pieces
          << ", last increment " << increment << " after " << options.max_order << " terms";
      throw NumericalFailure(msg.str(), pieces, options.max_order, increment);
    }
  }
  return result;
}

}  // namespace stokes_lab
