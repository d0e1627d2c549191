#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "stokes_lab/fock_core.hpp"
#include "stokes_lab/stokes_summary.hpp"

namespace stokes_lab::states {

/// |n>_x |0>_y
struct NumberState {
  int n = 0;
};

/// |alpha_x>_x |alpha_y>_y
struct CoherentState {
  Complex alpha_x;
  Complex alpha_y;
};

/// One photon polarized along the bisector of x and y: (|1,0> + |0,1>)/sqrt2.
struct EntangledPhoton {};

/// exp(zeta^* a_x a_y - zeta a_x^dagger a_y^dagger)|0>, zeta = s e^{i theta}.
struct TwoModeSqueezedVacuum {
  double s = 0.0;
  double theta = 0.0;
};

/// D_x(alpha) S_x(s) D_y(alpha) S_y(s) |0> with real alpha >= 0 and real s >= 0
/// (amplitude squeezing: the X+ quadrature is squeezed).
struct AmplitudeSqueezedCoherent {
  double alpha = 0.0;
  double s = 0.0;
};

using StateSpec =
    std::variant<NumberState, CoherentState, EntangledPhoton, TwoModeSqueezedVacuum, AmplitudeSqueezedCoherent>;

/// Throws InvalidArgument when a parameter is outside its domain.
void validate(const StateSpec& spec);

/// Short human-readable form, e.g. "number(n=3)".
std::string describe(const StateSpec& spec);

/// Which photon numbers must fit under the cutoff.
enum class TruncationBudget {
  per_mode,  // n_x <= N and n_y <= N (the Fock grid itself)
  total,     // n_x + n_y <= N, needed before passive mode maps
};

inline constexpr double kTailWeight = 1e-10;

/// Smallest cutoff whose analytically expected photon-number tail beyond the
/// budget has weight below `tail_weight`.
int required_cutoff(const StateSpec& spec, TruncationBudget budget = TruncationBudget::per_mode,
                     double tail_weight = kTailWeight);

/// Photon-number distribution of D(alpha) S(s)|0> for one mode, n = 0..n_max,
/// from the three-term recurrence satisfied by its amplitudes, normalized over
/// the returned levels. Real alpha >= 0; s = 0 gives the Poisson distribution.
std::vector<double> displaced_squeezed_distribution(double alpha, double s, int n_max);

/// Builds the state from vacuum with generator exponentials. Throws
/// InvalidArgument naming the required cutoff when `cutoff` is too small for the
/// per-mode truncation rule.
TwoModeFockState build(const StateSpec& spec, int cutoff);

/// Same, at the cutoff required by `budget`.
TwoModeFockState build(const StateSpec& spec, TruncationBudget budget = TruncationBudget::per_mode);

/// Closed-form Stokes statistics of each family.
StokesSummary oracle_summary(const StateSpec& spec);

/// Stokes indices j in {1,2,3} with V_j < <S0> - margin. S0 itself is never reported.
std::set<int> is_polarization_squeezed(const StokesSummary& summary, double margin = 0.0);

}  // namespace stokes_lab::states
