#include "ep1d/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "ep1d/detail/parallel.hpp"
#include "ep1d/diagnostics.hpp"
#include "ep1d/errors.hpp"
#include "ep1d/interaction_lab.hpp"
#include "ep1d/io.hpp"
#include "ep1d/theta.hpp"

namespace ep1d {

HyperbolicResult hyperbolic_step(const GasContext& gas, const GridState& grid,
                                 double theta, double lambda, int workers) {
  HyperbolicResult out;
  const long m_new = grid.m + 1;
  const std::size_t count = static_cast<std::size_t>(m_new) + 1;
  out.fans.resize(count);
  out.sampled.n = grid.n + 1;
  out.sampled.K = grid.K;
  out.sampled.m = m_new;
  out.sampled.dx = grid.dx;
  out.sampled.cells.resize(count);
  out.sampled.far_minus = grid.far_minus;
  out.sampled.far_plus = grid.far_plus;

  const double ray = theta / lambda;
  detail::parallel_for(count, workers, [&](std::size_t k) {
    const long i = -m_new + 2 * static_cast<long>(k);
    const WaveFan fan = solve(gas, grid.at(i - 1), grid.at(i + 1));
    out.sampled.cells[k] = sample(gas, fan, ray);
    out.fans[k] = fan;
  });

  out.max_speed = 0.0;
  out.min_rho = out.fans.front().left.rho;
  for (const WaveFan& fan : out.fans) {
    out.max_speed = std::max(out.max_speed, max_wave_speed(gas, fan));
    out.min_rho = std::min({out.min_rho, fan.left.rho, fan.middle.rho,
                            fan.right.rho});
  }
  return out;
}

void source_step(const RunConfig& cfg, const FineGrid& fine,
                 const FieldState& field, GridState& grid, double dt) {
  const double qm = cfg.q / cfg.m;
  for (long i = -grid.m; i <= grid.m; i += 2) {
    const DecayFactors f = decay_factors(fine.sigma_at(i), dt);
    State& st = grid.cell_ref(i);
    st.u = st.u * f.E -
           qm * f.S * field.psi_cell[static_cast<std::size_t>((i + grid.m) / 2)];
  }
}

namespace {

bool states_equal(const State& a, const State& b) {
  return a.rho == b.rho && a.u == b.u;
}

double closed_growth_bound(double A1, double B1, double t, double F0) {
  if (A1 > 0.0) return std::exp(A1 * t) * F0 + B1 * std::expm1(A1 * t) / A1;
  return F0 + B1 * t;
}

}  // namespace

RunSummary run(const RunConfig& cfg) {
  const GasContext gas = GasContext::make(cfg.gamma);
  RunSummary sum;

  GridState grid = discretize_initial(cfg);
  sum.K = grid.K;
  sum.dx = cfg.dx;
  sum.L_grid = grid.L_grid();

  // Mesh ratio: fixed for the whole run; the automatic choice inflates the
  // initial characteristic speeds by cfl_safety to leave room for the waves
  // the evolution creates.
  double lambda = cfg.lambda;
  if (lambda <= 0.0) {
    double s0 = 0.0;
    for (long i = -grid.m; i <= grid.m; i += 2) {
      const auto lam = eigenvalues(gas, grid.cell_ref(i));
      s0 = std::max({s0, std::abs(lam.first), std::abs(lam.second)});
    }
    lambda = 0.9 / (cfg.cfl_safety * s0);
  }
  const double dt = lambda * cfg.dx;
  long nsteps = static_cast<long>(std::ceil(cfg.T / dt - 1e-9));
  if (nsteps < 1) nsteps = 1;
  if (nsteps > 2000000) {
    throw ConfigError("run would need " + std::to_string(nsteps) +
                      " steps; increase dx or lambda, or reduce T");
  }
  sum.lambda = lambda;
  sum.dt = dt;
  sum.nsteps = nsteps;
  sum.T_eff = static_cast<double>(nsteps) * dt;

  FineGrid fine = make_fine_grid(cfg, grid.K, nsteps);
  FieldState field = init_field(cfg, grid, fine, cfg.psi_minus(0.0));
  FarFieldSeries far =
      init_far_field(gas, cfg, fine, field.xi_integral, dt, nsteps);
  sum.C_T = far.C_T;
  sum.Cprime_T = far.Cprime_T;
  sum.E_T = far.E_T;

  // Functional weight from the measured interaction constant on a widened
  // density range of the data.
  double rho_lo = std::min(cfg.mu.min_value(), 1e300);
  double rho_hi = cfg.mu.max_value();
  for (const State& st : cfg.initial.values) {
    rho_lo = std::min(rho_lo, st.rho);
    rho_hi = std::max(rho_hi, st.rho);
  }
  if (rho_lo <= 0.0) rho_lo = 1e-3;  // mu may vanish inside; floor the sweep
  sum.interaction_c = estimate_interaction_constant(
      gas, std::max(0.25 * rho_lo, 1e-3), 4.0 * rho_hi);
  sum.K_coef = cfg.K_override > 0.0 ? cfg.K_override
                                    : 4.0 * sum.interaction_c * gas.eps;

  sum.sigma_max = cfg.sigma.max_abs();
  sum.sigma_tv = cfg.sigma.total_variation();
  const double L1 = 2.0 * (sum.L_grid + sum.T_eff / lambda);
  const double qe = std::abs(cfg.q) / cfg.e;
  const double qm_abs = std::abs(cfg.q) / cfg.m;
  const double mu_max = cfg.mu.max_value();

  // A-priori envelopes for the charge and potential (linear in the cone
  // radius); the potential is bounded by the left trace plus the total
  // charge mass.
  const double xi_T = field.xi_l1 + qe * sum.T_eff *
                                        (far.mu_minus + far.mu_plus) * far.C_T;
  const double cone_T = sum.L_grid + static_cast<double>(nsteps) * cfg.dx;
  const double xi_bar = xi_T + 4.0 * qe * (1.0 + mu_max) * cone_T;
  sum.xi_l1_bound = xi_bar;
  double psi_minus_max = 0.0;
  for (double p : far.psi_minus) psi_minus_max = std::max(psi_minus_max, std::abs(p));
  const double psi_bar = psi_minus_max + xi_bar;
  const double delta_T =
      field.delta + (far.mu_minus + far.mu_plus) * sum.T_eff * far.C_T;
  sum.delta_bound = delta_T;

  // Initial invariant extremes for the density floor argument.
  double r_max0, s_min0, min_rho0;
  {
    const Invariants i0 = to_invariants(gas, grid.far_minus);
    r_max0 = i0.r;
    s_min0 = i0.s;
    min_rho0 = grid.far_minus.rho;
    for (long i = -grid.m; i <= grid.m; i += 2) {
      const State& st = grid.cell_ref(i);
      const Invariants inv = to_invariants(gas, st);
      r_max0 = std::max(r_max0, inv.r);
      s_min0 = std::min(s_min0, inv.s);
      min_rho0 = std::min(min_rho0, st.rho);
    }
    const Invariants ip = to_invariants(gas, grid.far_plus);
    r_max0 = std::max(r_max0, ip.r);
    s_min0 = std::min(s_min0, ip.s);
  }
  sum.min_rho_run = min_rho0;

  // Snapshot layers (times snapped to the nearest layer).
  std::set<long> snap_layers;
  for (double t : cfg.output.snapshot_times) {
    long layer = std::lround(t / dt);
    layer = std::max(0L, std::min(layer, nsteps));
    snap_layers.insert(layer);
  }
  if (snap_layers.count(0) != 0) {
    write_atomic(snapshot_path(cfg.output, 0),
                 render_snapshot(gas, grid, field, 0.0));
  }

  ThetaSequence theta_seq(cfg.theta);
  constexpr double kSlack = 1e-9;

  double F_prev = 0.0, A1_prev = 0.0, B1_prev = 0.0;
  double A1_runmax = 0.0, B1_runmax = 0.0;

  for (long n = 0; n < nsteps; ++n) {
    const double th = theta_seq.value(static_cast<std::size_t>(n));
    HyperbolicResult hyp =
        hyperbolic_step(gas, grid, th, lambda, cfg.workers);

    StepReport rep;
    rep.n = n;
    rep.t_next = static_cast<double>(n + 1) * dt;
    rep.theta = th;
    rep.max_speed = hyp.max_speed;
    rep.cfl_margin = 1.0 - lambda * hyp.max_speed;
    rep.min_rho = hyp.min_rho;
    if (!(lambda * hyp.max_speed < 1.0)) {
      std::size_t worst = 0;
      double worst_speed = -1.0;
      for (std::size_t k = 0; k < hyp.fans.size(); ++k) {
        const double sp = max_wave_speed(gas, hyp.fans[k]);
        if (sp > worst_speed) {
          worst_speed = sp;
          worst = k;
        }
      }
      const WaveFan& fan = hyp.fans[worst];
      throw CflError(
          "mesh ratio violated at step " + std::to_string(n) +
          ": lambda * max speed = " + std::to_string(lambda * hyp.max_speed) +
          " at interface i = " +
          std::to_string(-(grid.m + 1) + 2 * static_cast<long>(worst)) +
          " (left rho=" + format_double(fan.left.rho) +
          " u=" + format_double(fan.left.u) +
          ", right rho=" + format_double(fan.right.rho) +
          " u=" + format_double(fan.right.u) + ")");
    }

    rep.tv_u = total_variation(gas, grid, 0);
    rep.tv_r = total_variation(gas, grid, 1);
    rep.tv_s = total_variation(gas, grid, 2);

    std::vector<double> xs(hyp.fans.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      xs[k] = grid.dx * static_cast<double>(-(grid.m + 1) +
                                            2 * static_cast<long>(k));
    }
    const MeshCurve curve = build_mesh_curve(hyp.fans, xs);
    rep.V = glimm_V(curve);
    rep.Q = glimm_Q(curve);
    rep.F = rep.V + sum.K_coef * rep.Q;
    rep.tv_bound_ok = rep.tv_u <= 4.0 * rep.V + far.Cprime_T + kSlack;

    if (n == 0) {
      sum.F0 = rep.F;
      // Startup chain: a-priori functional bound -> velocity envelope ->
      // invariant drift -> density floor candidate.
      const GrowthCoefficients ap = growth_coefficients(
          sum.sigma_max, sum.sigma_tv, far.C_T, far.Cprime_T, psi_bar, xi_bar,
          cfg.q / cfg.m, lambda, L1, dt);
      const double F_bar =
          closed_growth_bound(ap.A1, ap.B1, sum.T_eff, sum.F0);
      sum.F_closed_bound = F_bar;
      const double U_bar = far.C_T + 4.0 * F_bar + far.Cprime_T;
      const double C_star = sum.sigma_max * U_bar + qm_abs * psi_bar;
      const double D = r_max0 - s_min0 + 2.0 * C_star * sum.T_eff;
      if (std::isfinite(D) && D < gas.sqrt_gamma / gas.eps) {
        sum.density_floor_known = true;
        sum.rho_floor = std::pow(
            1.0 - gas.eps * D / (2.0 * gas.sqrt_gamma), 1.0 / gas.eps);
      }
    }

    grid = std::move(hyp.sampled);
    advance_field(cfg, grid, fine, far, dt, field);
    source_step(cfg, fine, field, grid, dt);
    grid.far_minus = far.state_minus(n + 1);
    grid.far_plus = far.state_plus(n + 1);

    rep.cone_ok = states_equal(grid.cell_ref(-grid.m), grid.far_minus) &&
                  states_equal(grid.cell_ref(grid.m), grid.far_plus);

    rep.delta = field.delta;
    rep.gamma_corr = field.gamma_corr;
    rep.xi_l1 = field.xi_l1;
    rep.xi_integral = field.xi_integral;
    rep.psi_tv = field.psi_tv;
    rep.psi_max_abs = field.psi_max_abs;
    rep.mass_residual = field.eq_mass_residual;
    rep.edge_residual = field.edge_residual;

    const GrowthCoefficients gc = growth_coefficients(
        sum.sigma_max, sum.sigma_tv, far.C_T, far.Cprime_T, field.psi_max_abs,
        field.psi_tv, cfg.q / cfg.m, lambda, L1, dt);
    rep.A1 = gc.A1;
    rep.B1 = gc.B1;

    if (n >= 1) {
      const double per_step = (1.0 + A1_prev * dt) * F_prev + B1_prev * dt;
      bool ok = rep.F <= per_step + kSlack * (1.0 + std::abs(per_step));
      const double cum = closed_growth_bound(
          A1_runmax, B1_runmax, static_cast<double>(n) * dt, sum.F0);
      ok = ok && rep.F <= cum + kSlack * (1.0 + std::abs(cum));
      rep.growth_ok = ok;
    }
    A1_runmax = std::max(A1_runmax, gc.A1);
    B1_runmax = std::max(B1_runmax, gc.B1);
    A1_prev = gc.A1;
    B1_prev = gc.B1;
    F_prev = rep.F;

    const double delta_cap =
        delta_T + (2.0 + far.mu_minus + far.mu_plus) *
                      static_cast<double>(n + 1) * cfg.dx;
    const double xi_cap =
        xi_T + 4.0 * qe * (1.0 + mu_max) *
                   (sum.L_grid + static_cast<double>(n + 1) * cfg.dx);
    rep.envelope_ok =
        field.delta >= 0.0 &&
        field.delta <= delta_cap + kSlack * (1.0 + delta_cap) &&
        field.xi_l1 <= xi_cap + kSlack * (1.0 + xi_cap);
    const bool psi_tv_step_ok = field.psi_tv <= field.xi_l1 + 1e-10;
    sum.psi_tv_ok = sum.psi_tv_ok && psi_tv_step_ok;
    sum.mass_identity_ok = sum.mass_identity_ok &&
                           rep.mass_residual <= 1e-12 &&
                           rep.edge_residual <= 1e-10;

    sum.min_rho_run = std::min(sum.min_rho_run, hyp.min_rho);
    sum.growth_all_ok = sum.growth_all_ok && rep.growth_ok;
    sum.tv_bound_all_ok = sum.tv_bound_all_ok && rep.tv_bound_ok;
    sum.cone_all_ok = sum.cone_all_ok && rep.cone_ok;
    sum.envelopes_all_ok = sum.envelopes_all_ok && rep.envelope_ok;

    if (cfg.strict_bounds) {
      if (!rep.growth_ok)
        throw BoundError("functional growth bound failed at step " +
                         std::to_string(n));
      if (!rep.tv_bound_ok)
        throw BoundError("total-variation bound failed at step " +
                         std::to_string(n));
      if (!rep.envelope_ok || !psi_tv_step_ok)
        throw BoundError("charge/potential envelope failed at step " +
                         std::to_string(n));
      if (sum.density_floor_known && hyp.min_rho < sum.rho_floor)
        throw BoundError("density fell below the certified floor at step " +
                         std::to_string(n));
    }

    if (snap_layers.count(n + 1) != 0) {
      write_atomic(snapshot_path(cfg.output, n + 1),
                   render_snapshot(gas, grid, field, rep.t_next));
    }
    sum.steps.push_back(rep);
  }

  sum.final_grid = grid;
  sum.final_field = field;
  sum.far = std::move(far);
  if (!cfg.output.diagnostics_file.empty()) {
    write_atomic(cfg.output.dir + "/" + cfg.output.diagnostics_file,
                 render_diagnostics(sum));
  }
  return sum;
}

}  // namespace ep1d
