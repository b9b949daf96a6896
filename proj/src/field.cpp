#include "ep1d/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ep1d/errors.hpp"

namespace ep1d {

DecayFactors decay_factors(double sigma, double dt) {
  const double z = sigma * dt;
  DecayFactors f;
  if (z < 1e-6) {
    // Series keeps S smooth through sigma = 0 (S -> dt).
    f.E = std::exp(-z);
    f.S = dt * (1.0 - z * (0.5 - z * (1.0 / 6.0 - z / 24.0)));
  } else {
    f.E = std::exp(-z);
    f.S = -std::expm1(-z) / sigma;
  }
  return f;
}

State FarFieldSeries::state_minus(long n) const {
  return {mu_minus, u_minus[static_cast<std::size_t>(n)]};
}

State FarFieldSeries::state_plus(long n) const {
  return {mu_plus, u_plus[static_cast<std::size_t>(n)]};
}

FarFieldSeries init_far_field(const GasContext& gas, const RunConfig& cfg,
                              const FineGrid& /*fine*/, double xi0_integral,
                              double dt, long nsteps) {
  FarFieldSeries far;
  far.mu_minus = cfg.mu.front_value();
  far.mu_plus = cfg.mu.back_value();
  far.sigma_minus = cfg.sigma.front_value();
  far.sigma_plus = cfg.sigma.back_value();

  const std::size_t count = static_cast<std::size_t>(nsteps) + 1;
  far.psi_minus.resize(count);
  far.psi_plus.resize(count);
  far.u_minus.resize(count);
  far.u_plus.resize(count);

  for (std::size_t n = 0; n < count; ++n)
    far.psi_minus[n] = cfg.psi_minus(static_cast<double>(n) * dt);
  far.psi_plus[0] = far.psi_minus[0] + xi0_integral;
  far.u_minus[0] = cfg.initial.values.front().u;
  far.u_plus[0] = cfg.initial.values.back().u;

  const DecayFactors dm = decay_factors(far.sigma_minus, dt);
  const DecayFactors dp = decay_factors(far.sigma_plus, dt);
  const double qm = cfg.q / cfg.m;
  const double qe = cfg.q / cfg.e;

  // Envelopes advance alongside the exact recursion (discrete Gronwall).
  double env_psi = std::max(std::abs(far.psi_minus[0]), std::abs(far.psi_plus[0]));
  double env_u = std::max(std::abs(far.u_minus[0]), std::abs(far.u_plus[0]));
  far.C_T = env_u;
  far.E_T = env_psi;

  auto cprime = [&](std::size_t n) {
    const Invariants a = to_invariants(gas, {far.mu_minus, far.u_minus[n]});
    const Invariants b = to_invariants(gas, {far.mu_plus, far.u_plus[n]});
    return std::abs(b.r - a.r) + std::abs(b.s - a.s);
  };
  far.Cprime_T = cprime(0);

  for (std::size_t n = 0; n + 1 < count; ++n) {
    // Global neutrality moves the right potential by the net far-field mass
    // flux plus whatever the prescribed left trace does.
    far.psi_plus[n + 1] =
        far.psi_plus[n] +
        qe * (far.mu_plus * far.u_plus[n] - far.mu_minus * far.u_minus[n]) *
            dt +
        (far.psi_minus[n + 1] - far.psi_minus[n]);
    far.u_minus[n + 1] =
        far.u_minus[n] * dm.E - qm * dm.S * far.psi_minus[n + 1];
    far.u_plus[n + 1] = far.u_plus[n] * dp.E - qm * dp.S * far.psi_plus[n + 1];

    const double dpsi_minus =
        std::abs(far.psi_minus[n + 1] - far.psi_minus[n]);
    env_psi += std::abs(qe) * (far.mu_plus + far.mu_minus) * env_u * dt +
               dpsi_minus;
    env_u += std::abs(qm) * dt * env_psi;

    far.C_T = std::max({far.C_T, std::abs(far.u_minus[n + 1]),
                        std::abs(far.u_plus[n + 1])});
    far.E_T = std::max({far.E_T, std::abs(far.psi_minus[n + 1]),
                        std::abs(far.psi_plus[n + 1])});
    far.Cprime_T = std::max(far.Cprime_T, cprime(n + 1));
  }
  far.C_T_apriori = env_u;
  far.E_T_apriori = env_psi;
  return far;
}

namespace {

/// Rebuilds xi, its integrals, and the cell potential on the layer grid
/// carries, given the corrector factor already stored in field.gamma_corr.
/// psi_lo / psi_hi are the far traces of the same layer; cells whose right
/// edge reaches the support edge are pinned to psi_hi so the outermost cells
/// match the far-field series bitwise.
void rebuild_charge_and_potential(const RunConfig& cfg, const GridState& grid,
                                  const FineGrid& fine, double psi_lo,
                                  double psi_hi, bool corrected,
                                  FieldState& field) {
  const long S = grid.K + grid.n;  // support edge index of this layer
  const double qe = cfg.q / cfg.e;
  const double gamma_corr = field.gamma_corr;

  field.xi.assign(fine.mu.size(), 0.0);
  double integral = 0.0;
  double l1 = 0.0;
  for (long j = -S; j < S; ++j) {
    const double rho = grid.at(FineGrid::cell_of_interval(j, grid.n)).rho;
    const double xi =
        corrected
            ? -qe * ((1.0 + rho) * gamma_corr - 1.0 - fine.mu_at(j))
            : -qe * (rho - fine.mu_at(j));
    field.xi[static_cast<std::size_t>(j + fine.half)] = xi;
    integral += xi * fine.dx;
    l1 += std::abs(xi) * fine.dx;
  }
  field.xi_integral = integral;
  field.xi_l1 = l1;

  field.psi_cell.assign(grid.cells.size(), 0.0);
  double running = psi_lo;
  long j = -S;
  double tv = 0.0;
  double prev = 0.0;
  bool have_prev = false;
  for (long i = -grid.m; i <= grid.m; i += 2) {
    const long edge = std::min(i + 1, S);
    for (; j < edge; ++j)
      running += field.xi[static_cast<std::size_t>(j + fine.half)] * fine.dx;
    const double psi = (i + 1 >= S) ? psi_hi : running;
    field.psi_cell[static_cast<std::size_t>((i + grid.m) / 2)] = psi;
    if (have_prev) tv += std::abs(psi - prev);
    prev = psi;
    have_prev = true;
  }
  field.psi_tv = tv;
  field.psi_max_abs = std::max(std::abs(psi_lo), std::abs(psi_hi));
  for (double p : field.psi_cell)
    field.psi_max_abs = std::max(field.psi_max_abs, std::abs(p));
  field.edge_residual = std::abs(psi_lo + integral - psi_hi);
}

}  // namespace

FieldState init_field(const RunConfig& cfg, const GridState& grid0,
                      const FineGrid& fine, double psi_minus_0) {
  FieldState field;
  field.gamma_corr = 1.0;
  const long K = grid0.K;
  const double qe = cfg.q / cfg.e;
  double delta = 0.0;
  double integral = 0.0;
  for (long j = -K; j < K; ++j) {
    const double rho = grid0.at(FineGrid::cell_of_interval(j, 0)).rho;
    delta += (1.0 + rho) * fine.dx;
    integral += -qe * (rho - fine.mu_at(j)) * fine.dx;
  }
  field.delta = delta;
  // Layer 0 has no corrector; xi is the raw discretized imbalance, and the
  // right potential is *defined* as psi_minus + integral(xi), making the
  // endpoint identity exact at t = 0.
  rebuild_charge_and_potential(cfg, grid0, fine, psi_minus_0,
                               psi_minus_0 + integral,
                               /*corrected=*/false, field);
  field.eq_mass_residual = 0.0;
  return field;
}

void advance_field(const RunConfig& cfg, const GridState& grid,
                   const FineGrid& fine, const FarFieldSeries& far, double dt,
                   FieldState& field) {
  const long np1 = grid.n;
  const std::size_t n = static_cast<std::size_t>(np1 - 1);
  const double qe = cfg.q / cfg.e;

  // Mass budget: cone growth plus net far-field influx.
  field.delta += (2.0 + far.mu_minus + far.mu_plus) * fine.dx +
                 dt * (far.mu_minus * far.u_minus[n] -
                       far.mu_plus * far.u_plus[n]);
  if (field.delta < 0.0) {
    throw CflError("mass corrector went negative at layer " +
                   std::to_string(np1));
  }

  const long S = grid.K + np1;
  double cone = 0.0;
  for (long j = -S; j < S; ++j) {
    const double rho = grid.at(FineGrid::cell_of_interval(j, np1)).rho;
    cone += (1.0 + rho) * fine.dx;
  }
  field.gamma_corr = field.delta / cone;

  const double prev_integral = field.xi_integral;
  rebuild_charge_and_potential(cfg, grid, fine,
                               far.psi_minus[static_cast<std::size_t>(np1)],
                               far.psi_plus[static_cast<std::size_t>(np1)],
                               /*corrected=*/true, field);
  const double expected =
      qe * dt * (far.mu_plus * far.u_plus[n] - far.mu_minus * far.u_minus[n]);
  field.eq_mass_residual =
      std::abs(field.xi_integral - prev_integral - expected);
}

}  // namespace ep1d
