#ifndef EP1D_RIEMANN_HPP
#define EP1D_RIEMANN_HPP

#include "ep1d/gas.hpp"

namespace ep1d {

enum class WaveKind { shock, rarefaction };

/// One elementary wave of a two-wave fan.  `strength` is measured in
/// Riemann-invariant units: |Delta r| across a 1-wave, |Delta s| across a
/// 2-wave.  For shocks head == tail == propagation speed; for rarefactions
/// head <= tail bound the characteristic ray span.
struct Wave {
  int family;      ///< 1 or 2
  WaveKind kind;
  double strength;
  double head;
  double tail;
};

/// Self-similar solution of the Riemann problem (left, right): left state,
/// middle state, right state separated by a 1-wave and a 2-wave, tagged with
/// the (r,s)-quadrant region of right relative to left.
struct WaveFan {
  State left;
  State middle;
  State right;
  Wave wave1;
  Wave wave2;
  Region region;
};

/// Non-vacuum solvability: u_r - u_l < (sqrt(gamma)/eps)(rho_l^eps +
/// rho_r^eps), equivalently s_l - r_r > -2 sqrt(gamma)/eps.
bool solvable(const GasContext& gas, const State& left, const State& right);

/// Solves for the middle state (monotone bracketed Newton on the middle
/// density, 1e-12 relative) and assembles the fan.  Wave kinds follow the
/// middle density: family 1 is a shock iff rho_m > rho_l, family 2 iff
/// rho_m > rho_r; zero-strength degenerate waves collapse to head == tail ==
/// characteristic speed.  Bitwise-identical inputs short-circuit to a trivial
/// fan that samples to exactly the input state.  Throws VacuumError when not
/// solvable.
WaveFan solve(const GasContext& gas, const State& left, const State& right);

/// Evaluates the self-similar solution on the ray xi = x/t.  Inside a
/// rarefaction the state solves lambda_i(state) = xi exactly (closed form).
/// Tie convention: a ray equal to a shock speed takes the downstream side; a
/// ray at a rarefaction edge evaluates the interior formula (which reproduces
/// the edge state).
State sample(const GasContext& gas, const WaveFan& fan, double xi);

/// Largest absolute speed occurring in the fan: shock speeds, rarefaction
/// edges, and the characteristic speeds of the three constant states (the
/// mesh-ratio condition bounds the latter as well).
double max_wave_speed(const GasContext& gas, const WaveFan& fan);

}  // namespace ep1d

#endif
