#include <algorithm>
#include <cmath>
#include <type_traits>

#include "stokes_lab/errors.hpp"
#include "stokes_lab/states.hpp"

namespace stokes_lab::states {

namespace {

constexpr int kMaxCutoff = 4096;

// Suffix sums: tail[N] = sum_{n > N} p[n]. Summed from the far end so that
// tiny tails are not swamped by rounding of the bulk.
std::vector<double> tails(const std::vector<double>& p) {
  std::vector<double> t(p.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) {
    t[i] = acc;
    acc += p[i];
  }
  return t;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// Grid large enough that the neglected part of the distribution is far below
// any tail weight we care about.
int distribution_span(double alpha, double s) {
  const double mean = alpha * alpha + std::sinh(s) * std::sinh(s);
  const double spread = std::sqrt(alpha * alpha * std::exp(2.0 * s) + 0.5 * std::sinh(2.0 * s) * std::sinh(2.0 * s));
  return static_cast<int>(std::ceil(mean + 40.0 * spread + 60.0 * (1.0 + std::sinh(s) * std::sinh(s))));
}

int first_below(const std::vector<double>& tail, double target) {
  for (std::size_t n = 1; n < tail.size(); ++n) {
    if (tail[n] < target) return static_cast<int>(n);
  }
  throw InvalidArgument("state needs a cutoff beyond the supported range");
}

int first_below(const std::vector<double>& tail_x, const std::vector<double>& tail_y, double target) {
  const std::size_t size = std::min(tail_x.size(), tail_y.size());
  for (std::size_t n = 1; n < size; ++n) {
    if (tail_x[n] + tail_y[n] < target) return static_cast<int>(n);
  }
  throw InvalidArgument("state needs a cutoff beyond the supported range");
}

std::vector<double> padded(std::vector<double> p, std::size_t size) {
  p.resize(std::max(p.size(), size), 0.0);
  return p;
}

}  // namespace

std::vector<double> displaced_squeezed_distribution(double alpha, double s, int n_max) {
  if (alpha < 0.0 || s < 0.0) throw InvalidArgument("alpha and s must be nonnegative");
  if (n_max < 0) throw InvalidArgument("n_max must be nonnegative");
  // b|psi> = 0 with b = (a - alpha) cosh s + (a^dagger - alpha) sinh s gives
  // cosh s sqrt(n+1) c_{n+1} = alpha e^s c_n - sinh s sqrt(n) c_{n-1}.
  const double ch = std::cosh(s);
  const double sh = std::sinh(s);
  const double drive = alpha * std::exp(s);
  std::vector<double> c(static_cast<std::size_t>(n_max) + 1, 0.0);
  c[0] = 1.0;
  if (n_max >= 1) c[1] = drive * c[0] / ch;
  for (int n = 1; n < n_max; ++n) {
    c[n + 1] = (drive * c[n] - sh * std::sqrt(static_cast<double>(n)) * c[n - 1]) /
               (ch * std::sqrt(static_cast<double>(n + 1)));
    if (std::abs(c[n + 1]) > 1e150) {
      for (int k = 0; k <= n + 1; ++k) c[k] *= 1e-150;
    }
  }
  std::vector<double> p(c.size());
  double total = 0.0;
  for (std::size_t n = c.size(); n-- > 0;) {
    p[n] = c[n] * c[n];
    total += p[n];
  }
  for (auto& v : p) v /= total;
  return p;
}

int required_cutoff(const StateSpec& spec, TruncationBudget budget, double tail_weight) {
  validate(spec);
  return std::visit(
      [&](const auto& st) -> int {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, NumberState>) {
          return std::max(1, st.n);
        } else if constexpr (std::is_same_v<T, EntangledPhoton>) {
          return 1;
        } else if constexpr (std::is_same_v<T, TwoModeSqueezedVacuum>) {
          // n_x = n_y exactly, with a thermal distribution of ratio tanh^2 s.
          const double ratio = std::tanh(st.s) * std::tanh(st.s);
          if (ratio == 0.0) return 1;
          auto tail = [&](int n) {
            return budget == TruncationBudget::per_mode ? std::pow(ratio, n + 1) : std::pow(ratio, n / 2 + 1);
          };
          int n = 1;
          while (tail(n) >= tail_weight) {
            if (++n > kMaxCutoff) throw InvalidArgument("state needs a cutoff beyond the supported range");
          }
          return n;
        } else {
          double ax = 0.0, ay = 0.0, s = 0.0;
          if constexpr (std::is_same_v<T, CoherentState>) {
            ax = std::abs(st.alpha_x);
            ay = std::abs(st.alpha_y);
          } else {
            ax = ay = st.alpha;
            s = st.s;
          }
          const int span = std::min(kMaxCutoff, std::max(distribution_span(ax, s), distribution_span(ay, s)));
          const auto px = displaced_squeezed_distribution(ax, s, span);
          const auto py = displaced_squeezed_distribution(ay, s, span);
          if (budget == TruncationBudget::per_mode) return first_below(tails(px), tails(py), tail_weight);
          const auto total = convolve(px, py);
          return first_below(tails(padded(total, 2)), tail_weight);
        }
      },
      spec);
}

}  // namespace stokes_lab::states
