#ifndef EP1D_GAS_HPP
#define EP1D_GAS_HPP

#include <utility>

namespace ep1d {

/// Cached constants for a gamma-law gas P(rho) = rho^gamma with
/// gamma = 1 + 2*eps in (1,2).  All downstream formulas pull gamma, eps and
/// sqrt(gamma) from here so the three never drift apart.
struct GasContext {
  double gamma;       ///< adiabatic exponent, 1 < gamma < 2
  double eps;         ///< (gamma - 1) / 2
  double sqrt_gamma;  ///< sqrt(gamma)

  /// Validates the admissible range; throws ConfigError otherwise.
  static GasContext make(double gamma);
};

/// Primitive state (density, velocity).  rho > 0 away from vacuum.
struct State {
  double rho;
  double u;
};

/// Riemann-invariant coordinates
///   r = u - sqrt(gamma) (rho^eps - 1)/eps,
///   s = u + sqrt(gamma) (rho^eps - 1)/eps.
/// r is transported along backward characteristics (constant across
/// 2-rarefactions), s along forward ones (constant across 1-rarefactions).
struct Invariants {
  double r;
  double s;
};

/// Wave pattern of the two-wave Riemann solution, by quadrant of the right
/// state relative to the left state in (r,s):
///   I   two shocks,
///   II  1-rarefaction + 2-shock,
///   III two rarefactions,
///   IV  1-shock + 2-rarefaction.
enum class Region { I, II, III, IV };

const char* region_name(Region r);

/// Sound speed c = sqrt(P'(rho)) = sqrt(gamma) rho^eps.
double sound_speed(const GasContext& gas, double rho);

/// Characteristic speeds (u - c, u + c).
std::pair<double, double> eigenvalues(const GasContext& gas, const State& st);

Invariants to_invariants(const GasContext& gas, const State& st);

/// Inverse map rho = (1 + eps (s-r)/(2 sqrt(gamma)))^(1/eps), u = (r+s)/2.
/// Throws VacuumError when s - r is at or below the vacuum boundary
/// -2 sqrt(gamma)/eps (with a 1e-12-scaled guard band so the power does not
/// overflow or produce a zero/negative density).
State from_invariants(const GasContext& gas, const Invariants& inv);

/// Classifies the wave pattern of the Riemann problem (left, right) using the
/// two shock-boundary curves through the left state.  Boundary ties resolve
/// toward the shock-bearing region (I over II/IV, II/IV over III); the exact
/// left==right state returns III (a fan of two zero-strength rarefactions).
Region classify_region(const GasContext& gas, const State& left,
                       const State& right);

}  // namespace ep1d

#endif
