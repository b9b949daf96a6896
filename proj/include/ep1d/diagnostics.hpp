#ifndef EP1D_DIAGNOSTICS_HPP
#define EP1D_DIAGNOSTICS_HPP

#include <cstddef>
#include <vector>

#include "ep1d/gas.hpp"
#include "ep1d/grid.hpp"
#include "ep1d/riemann.hpp"

namespace ep1d {

/// One wave crossing a mesh curve: interface position, family and strength
/// (Riemann-invariant drop; only shocks carry weight in the functionals).
struct MeshWave {
  double x = 0.0;
  int family = 0;
  WaveKind kind = WaveKind::shock;
  double strength = 0.0;
};

/// The waves emitted by one layer's interface fans, ordered left to right
/// (and 1-wave after 2-wave within an interface, matching their speeds'
/// potential ordering is irrelevant: same-interface pairs never approach).
struct MeshCurve {
  std::vector<MeshWave> waves;
};

MeshCurve build_mesh_curve(const std::vector<WaveFan>& fans,
                           const std::vector<double>& xs);

/// Linear functional: total strength of shocks crossing the curve.
double glimm_V(const MeshCurve& curve);
/// Quadratic potential: sum of |a_i|*|a_j| over approaching shock pairs --
/// both 1-shocks, both 2-shocks, or a 2-shock strictly left of a 1-shock.
/// Evaluated with suffix sums in O(#waves).
double glimm_Q(const MeshCurve& curve);
double glimm_F(const MeshCurve& curve, double K_coef);

/// Exact total variation of a cell field over one layer, including the jumps
/// to the implicit far-field states on both sides.  `select`: 0 = u, 1 = r,
/// 2 = s, 3 = rho.
double total_variation(const GasContext& gas, const GridState& grid,
                       int select);

/// Functional growth coefficients for one step, from the stationary data and
/// the current potential: A1 = 4*exp(lambda*A*L1)*TV(sigma) + 16*||sigma||,
/// B1 = 4*C_T*TV(sigma) + 4*B*(exp(A*lambda*L1)-1)/A*TV(sigma)
///      + 4*Cprime_T*||sigma|| + (4q/m)*||Psi||*TV(sigma)*dt + (4q/m)*TV(Psi)
/// with A = 32*||sigma|| and
/// B = 8*(C_T + Cprime_T)*||sigma|| + (8q/m)*(||Psi||*||sigma||*dt + ||Psi||).
struct GrowthCoefficients {
  double A = 0.0, B = 0.0;
  double A1 = 0.0, B1 = 0.0;
};
GrowthCoefficients growth_coefficients(double sigma_max, double sigma_tv,
                                       double C_T, double Cprime_T,
                                       double psi_max_abs, double psi_tv,
                                       double q_over_m, double lambda,
                                       double L1, double dt);

}  // namespace ep1d

#endif
