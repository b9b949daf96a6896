#ifndef EP1D_FIELD_HPP
#define EP1D_FIELD_HPP

#include <cstddef>
#include <vector>

#include "ep1d/config.hpp"
#include "ep1d/gas.hpp"
#include "ep1d/grid.hpp"

namespace ep1d {

/// Velocity decay factors for one source step of length dt under relaxation
/// sigma: E = exp(-sigma*dt) and S = (1 - E)/sigma, with S evaluated by a
/// series for sigma*dt < 1e-6 so sigma -> 0 is smooth.  The update reads
/// u_new = u*E - (q/m)*S*Psi.  Shared by interior cells and the far-field
/// recursion so that cells at +-infinity match the series bitwise.
struct DecayFactors {
  double E = 1.0;
  double S = 0.0;
};
DecayFactors decay_factors(double sigma, double dt);

/// Far-field traces, advanced once per time step independently of the
/// interior.  psi_minus is prescribed data; psi_plus follows from global
/// neutrality; u_pm obey the relaxation ODE sampled at the far potentials.
/// The whole series is computed up front (it never looks at interior cells).
struct FarFieldSeries {
  double mu_minus = 0.0, mu_plus = 0.0;       ///< far background densities
  double sigma_minus = 0.0, sigma_plus = 0.0; ///< far relaxation values
  std::vector<double> psi_minus, psi_plus;    ///< size nsteps + 1
  std::vector<double> u_minus, u_plus;        ///< size nsteps + 1

  double C_T = 0.0;         ///< max_n max(|u^-_n|, |u^+_n|)
  double E_T = 0.0;         ///< max_n max(|psi^-_n|, |psi^+_n|)
  double Cprime_T = 0.0;    ///< max_n (|r^+_n - r^-_n| + |s^+_n - s^-_n|)
  double C_T_apriori = 0.0; ///< discrete Gronwall envelope for C_T
  double E_T_apriori = 0.0; ///< discrete Gronwall envelope for E_T

  State state_minus(long n) const;
  State state_plus(long n) const;
};

/// Builds the far-field series for nsteps steps of length dt.  xi0_integral
/// is the exact integral of the initial charge imbalance, fixing psi_plus[0]
/// = psi_minus[0] + xi0_integral.
FarFieldSeries init_far_field(const GasContext& gas, const RunConfig& cfg,
                              const FineGrid& fine, double xi0_integral,
                              double dt, long nsteps);

/// Mass corrector and electric field on one layer.  xi lives on the fine
/// intervals (same layout as FineGrid), is zero outside the current support
/// |x| < L_grid + n*dx, and psi_cell holds Psi at the right edge x_{i+1} of
/// every stored cell of the matching GridState layer.
struct FieldState {
  double delta = 0.0;       ///< running mass budget delta_n
  double gamma_corr = 1.0;  ///< corrector factor gamma_n
  std::vector<double> xi;   ///< charge imbalance on fine intervals
  double xi_integral = 0.0; ///< exact sum of xi * dx
  double xi_l1 = 0.0;       ///< exact sum of |xi| * dx
  std::vector<double> psi_cell;  ///< per stored cell, index (i + m)/2
  double psi_tv = 0.0;           ///< total variation of the cell potential
  double psi_max_abs = 0.0;      ///< max |Psi| incl. both far traces
  double eq_mass_residual = 0.0; ///< telescoping check on d/dn of xi_integral
  double edge_residual = 0.0;    ///< |psi^- + int(xi) - psi^+| on this layer
};

/// Layer-0 field: delta_0 and gamma_0 = 1 from the initial density, xi_0
/// directly from the discretized imbalance (corrector-free), plus Psi_0 on
/// the layer-0 cells.  Also returns xi0_integral via FieldState::xi_integral
/// for the far-field seed.
FieldState init_field(const RunConfig& cfg, const GridState& grid0,
                      const FineGrid& fine, double psi_minus_0);

/// Advances the corrector (delta, gamma), recomputes xi on layer n+1, checks
/// the mass-telescoping identity against the previous xi_integral, and
/// rebuilds Psi on the new layer.  grid must already be the layer-(n+1) state
/// produced by the random-choice step; far supplies the endpoint traces and
/// far velocities at step n.  Throws CflError if the corrected mass budget
/// goes negative (positivity is tied to the mesh-ratio bound).
void advance_field(const RunConfig& cfg, const GridState& grid,
                   const FineGrid& fine, const FarFieldSeries& far, double dt,
                   FieldState& field);

}  // namespace ep1d

#endif
