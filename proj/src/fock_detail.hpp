#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "stokes_lab/fock_core.hpp"

namespace stokes_lab::detail {

/// sqrt(0), sqrt(1), ..., sqrt(n_max)
inline std::vector<double> sqrt_table(int n_max) {
  std::vector<double> t(static_cast<std::size_t>(n_max) + 1);
  for (std::size_t n = 0; n < t.size(); ++n) t[n] = std::sqrt(static_cast<double>(n));
  return t;
}

/// out += scale * G in, with G applied in its projected form on levels <= cutoff.
void accumulate_generator(const Generator& generator, int cutoff, std::span<const Complex> in,
                          std::span<Complex> out, Complex scale);

double vector_norm(std::span<const Complex> v);

}  // namespace stokes_lab::detail
