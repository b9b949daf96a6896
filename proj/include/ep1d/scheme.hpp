#ifndef EP1D_SCHEME_HPP
#define EP1D_SCHEME_HPP

#include <cstddef>
#include <vector>

#include "ep1d/config.hpp"
#include "ep1d/field.hpp"
#include "ep1d/grid.hpp"
#include "ep1d/riemann.hpp"
#include "ep1d/theta.hpp"

namespace ep1d {

/// Output of one random-choice (transport) half step: the interface fans and
/// the sampled layer-(n+1) states before the velocity relaxation is applied.
struct HyperbolicResult {
  /// fan[k] is the solution at interface x_i, i = -(m+1) + 2k spanning the
  /// new layer's centers; built from cells i-1 and i+1 of the old layer.
  std::vector<WaveFan> fans;
  GridState sampled;      ///< layer n+1 grid holding the ray samples
  double max_speed = 0.0; ///< max over fans of max |wave speed|
  double min_rho = 0.0;   ///< min density over fan constant states
};

/// Solves all interface problems of layer n and samples each fan on the ray
/// x/t = theta/lambda.  workers > 1 shards the (independent) interface solves
/// by index; results are identical to the sequential order.
HyperbolicResult hyperbolic_step(const GasContext& gas, const GridState& grid,
                                 double theta, double lambda, int workers);

/// Applies the velocity relaxation u -> u*E(sigma_i) - (q/m)*S(sigma_i)*Psi_i
/// to every stored cell (density unchanged).  sigma_i samples the fine grid
/// at the interval starting at the cell center; Psi_i comes from field.
void source_step(const RunConfig& cfg, const FineGrid& fine,
                 const FieldState& field, GridState& grid, double dt);

/// Per-step diagnostics row (step n advances layer n to n+1; functional
/// values refer to the wave fans generated by that step).
struct StepReport {
  long n = 0;            ///< step index
  double t_next = 0.0;   ///< (n+1)*dt
  double theta = 0.0;
  double V = 0.0;        ///< total shock strength of this step's fans
  double Q = 0.0;        ///< quadratic interaction potential
  double F = 0.0;        ///< V + K*Q
  double tv_u = 0.0;     ///< TV of u at t_n (before the step)
  double tv_r = 0.0, tv_s = 0.0;
  double max_speed = 0.0;
  double cfl_margin = 0.0;   ///< 1 - lambda*max_speed
  double min_rho = 0.0;      ///< min density over fan states this step
  double delta = 0.0, gamma_corr = 1.0;
  double xi_l1 = 0.0, xi_integral = 0.0;
  double psi_tv = 0.0, psi_max_abs = 0.0;
  double mass_residual = 0.0;  ///< telescoping residual of d/dn int(xi)
  double edge_residual = 0.0;  ///< potential endpoint-consistency residual
  double A1 = 0.0, B1 = 0.0;   ///< functional growth coefficients this step
  bool growth_ok = true;       ///< F_n <= (1 + A1*dt)*F_{n-1} + B1*dt
  bool tv_bound_ok = true;     ///< tv_u <= 4*V + Cprime_T (+ slack)
  bool cone_ok = true;         ///< outermost cells match the far-field series
  bool envelope_ok = true;     ///< delta / ||xi||_L1 / TV(Psi) inside bounds
};

struct RunSummary {
  long K = 0;
  long nsteps = 0;
  double dx = 0.0, dt = 0.0, lambda = 0.0;
  double L_grid = 0.0;
  double T_eff = 0.0;          ///< nsteps * dt
  double K_coef = 0.0;         ///< functional weight actually used
  double interaction_c = 0.0;  ///< measured interaction constant

  double C_T = 0.0, Cprime_T = 0.0, E_T = 0.0;   ///< far-field envelopes
  double sigma_max = 0.0, sigma_tv = 0.0;
  double xi_l1_bound = 0.0;    ///< a-priori linear-in-n envelope coefficient
  double delta_bound = 0.0;

  bool density_floor_known = false;  ///< startup smallness condition held
  double rho_floor = 0.0;            ///< positive lower bound when known
  double min_rho_run = 0.0;          ///< observed minimum over the run
  double F0 = 0.0;                   ///< initial functional value
  double F_closed_bound = 0.0;       ///< exp(A1*T)*F0 + B1*(exp(A1*T)-1)/A1

  bool growth_all_ok = true;
  bool tv_bound_all_ok = true;
  bool cone_all_ok = true;
  bool envelopes_all_ok = true;
  bool mass_identity_ok = true;  ///< all telescoping residuals < 1e-12 scale
  bool psi_tv_ok = true;         ///< TV(Psi_n) <= ||xi_n||_L1 each step

  std::vector<StepReport> steps;
  GridState final_grid;
  FieldState final_field;
  FarFieldSeries far;
};

/// Runs the full splitting scheme: random choice + corrector/field update +
/// velocity relaxation per step, with the far-field series precomputed.
/// Throws ConfigError / CflError / VacuumError / BoundError (the latter only
/// when cfg.strict_bounds is set and a monitored bound fails).
RunSummary run(const RunConfig& cfg);

}  // namespace ep1d

#endif
