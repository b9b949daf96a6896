#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "ep1d/errors.hpp"
#include "ep1d/scheme.hpp"

using namespace ep1d;
using doctest::Approx;

namespace {

bool same_state(const State& a, const State& b) {
  return a.rho == b.rho && a.u == b.u;
}

GridState make_layer(long n, long K, double dx, std::vector<State> cells,
                     const State& far_minus, const State& far_plus) {
  GridState g;
  g.n = n;
  g.K = K;
  g.m = K + n + 1;
  g.dx = dx;
  g.cells = std::move(cells);
  g.far_minus = far_minus;
  g.far_plus = far_plus;
  return g;
}

FineGrid uniform_fine(long half, double dx, double mu, double sigma) {
  FineGrid fine;
  fine.half = half;
  fine.dx = dx;
  fine.mu.assign(static_cast<std::size_t>(2 * half), mu);
  fine.sigma.assign(static_cast<std::size_t>(2 * half), sigma);
  return fine;
}

/// Run configuration with every file output disabled, for in-memory tests.
RunConfig quiet_config() {
  RunConfig cfg;
  cfg.output.snapshot_times = {};
  cfg.output.diagnostics_file = "";
  return cfg;
}

}  // namespace

TEST_CASE("van der Corput theta sequence matches its frozen opening values") {
  CHECK(ThetaSequence::van_der_corput(0) == 0.0);
  CHECK(ThetaSequence::van_der_corput(1) == 0.5);
  CHECK(ThetaSequence::van_der_corput(2) == 0.25);
  CHECK(ThetaSequence::van_der_corput(3) == 0.75);
  CHECK(ThetaSequence::van_der_corput(4) == 0.125);
  CHECK(ThetaSequence::van_der_corput(6) == 0.375);

  const ThetaSequence seq((ThetaConfig()));
  const double want[] = {0.0, -0.5, 0.5, -0.75, 0.25, -0.25, 0.75};
  for (std::size_t n = 0; n < 7; ++n) CHECK(seq.value(n) == want[n]);

  // Stays inside the open cell (-1, 1) and is equidistributed enough that the
  // running mean of the first 1024 draws is already close to zero.
  double mean = 0.0;
  for (std::size_t n = 0; n < 1024; ++n) {
    const double t = seq.value(n);
    CHECK(t > -1.0);
    CHECK(t < 1.0);
    mean += t;
  }
  CHECK(std::abs(mean / 1024.0) < 0.01);
}

TEST_CASE("theta lists wrap around and invalid entries are rejected") {
  ThetaConfig cfg;
  cfg.kind = ThetaConfig::Kind::list;
  cfg.values = {0.3, -1.0, 1.0};
  const ThetaSequence seq(cfg);
  CHECK(seq.value(0) == 0.3);
  CHECK(seq.value(1) == -1.0);
  CHECK(seq.value(2) == 1.0);
  CHECK(seq.value(3) == 0.3);
  CHECK(seq.value(7) == -1.0);

  ThetaConfig bad = cfg;
  bad.values = {0.2, 1.5};
  CHECK_THROWS_WITH_AS(ThetaSequence{bad},
                       doctest::Contains("theta list entry outside [-1, 1]"),
                       ConfigError);

  ThetaConfig hollow = cfg;
  hollow.values.clear();
  const ThetaSequence empty(hollow);
  CHECK_THROWS_WITH_AS(empty.value(0),
                       doctest::Contains("theta list is empty"), ConfigError);
}

TEST_CASE("prng theta draws are a pure function of seed and index") {
  ThetaConfig cfg;
  cfg.kind = ThetaConfig::Kind::prng;
  cfg.seed = 20240817;
  const ThetaSequence a(cfg);
  const ThetaSequence b(cfg);

  // Access in opposite orders: the lazy cache must replay identical draws.
  std::vector<double> fwd(16), rev(16);
  for (std::size_t n = 0; n < 16; ++n) fwd[n] = a.value(n);
  for (std::size_t n = 16; n-- > 0;) rev[n] = b.value(n);
  for (std::size_t n = 0; n < 16; ++n) {
    CHECK(fwd[n] == rev[n]);
    CHECK(fwd[n] >= -1.0);
    CHECK(fwd[n] <= 1.0);
  }

  ThetaConfig other = cfg;
  other.seed = 20240818;
  const ThetaSequence c(other);
  bool differs = false;
  for (std::size_t n = 0; n < 16; ++n) differs = differs || c.value(n) != fwd[n];
  CHECK(differs);
}

TEST_CASE("initial discretization picks the smallest odd K covering [-L, L]") {
  RunConfig cfg = quiet_config();
  cfg.L = 0.3;
  cfg.dx = 0.1;
  cfg.initial.breaks = {0.05};
  cfg.initial.values = {{1.2, 0.3}, {0.8, -0.1}};

  const GridState g = discretize_initial(cfg);
  CHECK(g.n == 0);
  CHECK(g.K == 3);
  CHECK(g.m == 4);
  CHECK(g.dx == 0.1);
  REQUIRE(g.cells.size() == 5);

  // Centers -0.4 ... 0.4 sample the profile with left-closed intervals.
  CHECK(same_state(g.cell_ref(-4), {1.2, 0.3}));
  CHECK(same_state(g.cell_ref(-2), {1.2, 0.3}));
  CHECK(same_state(g.cell_ref(0), {1.2, 0.3}));
  CHECK(same_state(g.cell_ref(2), {0.8, -0.1}));
  CHECK(same_state(g.cell_ref(4), {0.8, -0.1}));
  CHECK(same_state(g.far_minus, {1.2, 0.3}));
  CHECK(same_state(g.far_plus, {0.8, -0.1}));

  CHECK(g.stores(0));
  CHECK(!g.stores(1));
  CHECK(g.stores(-4));
  CHECK(!g.stores(6));
  CHECK(same_state(g.at(-6), g.far_minus));
  CHECK(same_state(g.at(6), g.far_plus));
  CHECK(g.x_of(3) == 0.1 * 3.0);
  CHECK(g.L_grid() == 0.1 * 3.0);

  // An even cover count is bumped to the next odd K; tiny L still yields 1.
  RunConfig even = quiet_config();
  even.L = 0.2;
  even.dx = 0.02;
  even.initial.values = {{1.0, 0.0}};
  CHECK(discretize_initial(even).K == 11);

  RunConfig tiny = quiet_config();
  tiny.L = 0.001;
  tiny.dx = 0.1;
  tiny.initial.values = {{1.0, 0.0}};
  CHECK(discretize_initial(tiny).K == 1);
}

TEST_CASE("fine grid samples stationary coefficients per dx interval") {
  RunConfig cfg = quiet_config();
  cfg.dx = 0.1;
  cfg.mu.breaks = {-0.1, 0.1};
  cfg.mu.values = {1.2, 1.0, 0.8};
  cfg.sigma.breaks = {0.0};
  cfg.sigma.values = {0.3, 0.5};

  const FineGrid f = make_fine_grid(cfg, 3, 2);
  CHECK(f.half == 7);
  CHECK(f.dx == 0.1);
  REQUIRE(f.mu.size() == 14);
  REQUIRE(f.sigma.size() == 14);

  CHECK(f.mu_at(-7) == 1.2);
  CHECK(f.mu_at(-2) == 1.2);  // midpoint -0.15
  CHECK(f.mu_at(-1) == 1.0);  // midpoint -0.05
  CHECK(f.mu_at(0) == 1.0);   // midpoint +0.05
  CHECK(f.mu_at(1) == 0.8);   // midpoint +0.15
  CHECK(f.sigma_at(-1) == 0.3);
  CHECK(f.sigma_at(0) == 0.5);

  // Interval -> covering staggered cell, by parity of the layer.
  CHECK(FineGrid::cell_of_interval(0, 0) == 0);
  CHECK(FineGrid::cell_of_interval(-1, 0) == 0);
  CHECK(FineGrid::cell_of_interval(-1, 1) == -1);
  CHECK(FineGrid::cell_of_interval(2, 1) == 3);
  CHECK(FineGrid::cell_of_interval(-4, 1) == -3);
  CHECK(FineGrid::cell_of_interval(-4, 2) == -4);
}

TEST_CASE("transport step solves every interface fan and samples the ray") {
  const GasContext gas = GasContext::make(1.4);
  const GridState grid =
      make_layer(0, 1, 0.1, {{1.0, 0.0}, {1.8, 0.35}, {0.6, -0.2}}, {1.0, 0.0},
                 {0.6, -0.2});
  const double theta = 0.5;
  const double lambda = 0.3;
  const HyperbolicResult hr = hyperbolic_step(gas, grid, theta, lambda, 1);

  CHECK(hr.sampled.n == 1);
  CHECK(hr.sampled.K == 1);
  CHECK(hr.sampled.m == 3);
  CHECK(hr.sampled.dx == grid.dx);
  REQUIRE(hr.sampled.cells.size() == 4);
  REQUIRE(hr.fans.size() == 4);
  CHECK(same_state(hr.sampled.far_minus, grid.far_minus));
  CHECK(same_state(hr.sampled.far_plus, grid.far_plus));

  const double ray = theta / lambda;
  double want_speed = 0.0;
  double want_rho = 1e300;
  for (std::size_t k = 0; k < 4; ++k) {
    const long i = -3 + 2 * static_cast<long>(k);
    const WaveFan want = solve(gas, grid.at(i - 1), grid.at(i + 1));
    CHECK(same_state(hr.fans[k].left, want.left));
    CHECK(same_state(hr.fans[k].middle, want.middle));
    CHECK(same_state(hr.fans[k].right, want.right));
    CHECK(hr.fans[k].wave1.strength == want.wave1.strength);
    CHECK(hr.fans[k].wave1.head == want.wave1.head);
    CHECK(hr.fans[k].wave2.tail == want.wave2.tail);
    CHECK(same_state(hr.sampled.cell_ref(i), sample(gas, want, ray)));
    want_speed = std::max(want_speed, max_wave_speed(gas, want));
    want_rho =
        std::min({want_rho, want.left.rho, want.middle.rho, want.right.rho});
  }
  CHECK(hr.max_speed == want_speed);
  CHECK(hr.min_rho == want_rho);

  // Outermost interfaces see the far state on their outer side.
  CHECK(same_state(hr.fans[0].left, grid.far_minus));
  CHECK(same_state(hr.fans[3].right, grid.far_plus));

  // A ray outrunning every wave lands on the left state of each fan.
  const HyperbolicResult pull = hyperbolic_step(gas, grid, -0.999, 0.3, 1);
  REQUIRE(pull.max_speed < 3.0);  // the ray sits at -3.33
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(same_state(pull.sampled.cells[k], pull.fans[k].left));

  // Worker sharding must not change a single bit.
  for (int workers : {2, 3, 8}) {
    const HyperbolicResult par =
        hyperbolic_step(gas, grid, theta, lambda, workers);
    CHECK(par.max_speed == hr.max_speed);
    CHECK(par.min_rho == hr.min_rho);
    for (std::size_t k = 0; k < 4; ++k)
      CHECK(same_state(par.sampled.cells[k], hr.sampled.cells[k]));
  }
}

TEST_CASE("relaxation step applies the exact decay update cell by cell") {
  RunConfig cfg = quiet_config();
  cfg.q = 0.4;
  cfg.m = 1.6;
  cfg.e = 1.0;

  const GridState before = make_layer(1, 3, 0.1,
                                      {{1.1, 0.2},
                                       {0.9, -0.1},
                                       {1.3, 0.05},
                                       {0.7, 0.4},
                                       {1.0, -0.3},
                                       {1.2, 0.1}},
                                      {1.0, 0.1}, {0.95, -0.2});
  FineGrid fine = uniform_fine(8, 0.1, 1.0, 0.0);
  for (long j = -8; j < 8; ++j)
    fine.sigma[static_cast<std::size_t>(j + 8)] =
        0.02 * static_cast<double>(j + 9);
  FieldState field;
  field.psi_cell = {0.05, -0.1, 0.2, 0.15, -0.05, 0.1};

  GridState grid = before;
  const double dt = 0.03;
  source_step(cfg, fine, field, grid, dt);

  const double qm = cfg.q / cfg.m;
  for (long i = -5; i <= 5; i += 2) {
    const std::size_t k = static_cast<std::size_t>((i + 5) / 2);
    // sigma is sampled on the interval that starts at the cell center.
    const DecayFactors d = decay_factors(fine.sigma_at(i), dt);
    const double want_u = before.cells[k].u * d.E - qm * d.S * field.psi_cell[k];
    CHECK(grid.cells[k].rho == before.cells[k].rho);
    CHECK(grid.cells[k].u == want_u);
  }
  CHECK(same_state(grid.far_minus, before.far_minus));
  CHECK(same_state(grid.far_plus, before.far_plus));
}

TEST_CASE("constant data stays constant: zero functional, certified floor") {
  RunConfig cfg = quiet_config();
  cfg.gamma = 1.3;
  cfg.q = 0.7;
  cfg.m = 1.1;
  cfg.e = 0.9;
  cfg.L = 0.5;
  cfg.dx = 0.1;
  cfg.T = 0.2;
  cfg.lambda = 0.4;
  cfg.initial.values = {{1.0, 0.25}};
  cfg.sigma.values = {0.3};
  cfg.mu.values = {1.0};
  cfg.psi_minus.constant = 0.4;

  const RunSummary sum = run(cfg);
  CHECK(sum.K == 5);
  CHECK(sum.nsteps == 5);
  CHECK(sum.dt == cfg.lambda * cfg.dx);
  CHECK(sum.lambda == 0.4);
  CHECK(sum.T_eff == Approx(0.2).epsilon(1e-12));
  REQUIRE(sum.steps.size() == 5);

  CHECK(sum.steps[0].theta == 0.0);
  CHECK(sum.steps[1].theta == -0.5);
  CHECK(sum.steps[4].theta == 0.25);

  // Constant data: the first functional is exactly zero and later fans carry
  // only round-off from the mass-corrector drift in the potential.
  CHECK(sum.F0 == 0.0);
  CHECK(sum.steps[0].V == 0.0);
  CHECK(sum.steps[0].Q == 0.0);
  for (const StepReport& rep : sum.steps) {
    CHECK(rep.F <= 1e-10);
    CHECK(rep.tv_u <= 1e-10);
    CHECK(rep.min_rho == Approx(1.0).epsilon(1e-12));
    CHECK(rep.cfl_margin > 0.4);
    CHECK(rep.gamma_corr == Approx(1.0).epsilon(1e-12));
    CHECK(rep.mass_residual <= 1e-13);
    CHECK(rep.growth_ok);
    CHECK(rep.tv_bound_ok);
    CHECK(rep.cone_ok);
    CHECK(rep.envelope_ok);
  }
  CHECK(sum.growth_all_ok);
  CHECK(sum.tv_bound_all_ok);
  CHECK(sum.cone_all_ok);
  CHECK(sum.envelopes_all_ok);
  CHECK(sum.mass_identity_ok);
  CHECK(sum.psi_tv_ok);

  // Symmetric far fields relax identically on both sides.
  CHECK(sum.C_T == 0.25);
  CHECK(sum.E_T == 0.4);
  CHECK(sum.Cprime_T == 0.0);
  CHECK(sum.sigma_max == 0.3);
  CHECK(sum.sigma_tv == 0.0);
  REQUIRE(sum.far.u_minus.size() == 6);
  for (std::size_t n = 0; n <= 5; ++n) {
    CHECK(sum.far.u_plus[n] == sum.far.u_minus[n]);
    CHECK(sum.far.psi_plus[n] == sum.far.psi_minus[n]);
  }

  CHECK(sum.density_floor_known);
  CHECK(sum.rho_floor > 0.05);
  CHECK(sum.rho_floor < 1.0);
  CHECK(sum.min_rho_run >= sum.rho_floor);
  CHECK(sum.min_rho_run == Approx(1.0).epsilon(1e-12));

  REQUIRE(sum.final_grid.n == 5);
  CHECK(sum.final_grid.m == 11);
  REQUIRE(sum.final_grid.cells.size() == 12);
  CHECK(same_state(sum.final_grid.far_minus, sum.far.state_minus(5)));
  CHECK(same_state(sum.final_grid.far_plus, sum.far.state_plus(5)));
  for (const State& st : sum.final_grid.cells) {
    CHECK(st.rho == Approx(1.0).epsilon(1e-12));
    CHECK(st.u == Approx(sum.far.u_minus[5]).epsilon(1e-10));
  }

  // Auto mesh ratio: lambda = 0.9 / (safety * fastest initial signal).
  RunConfig autoc = cfg;
  autoc.lambda = 0.0;
  const RunSummary asum = run(autoc);
  const GasContext gas = GasContext::make(cfg.gamma);
  CHECK(asum.lambda ==
        Approx(0.9 / (cfg.cfl_safety * (0.25 + gas.sqrt_gamma))).epsilon(1e-14));
  CHECK(asum.dt == asum.lambda * cfg.dx);
  for (const StepReport& rep : asum.steps) CHECK(rep.cfl_margin > 0.5);
}

TEST_CASE("uncharged jump run: transport-only invariants, monotone functional") {
  RunConfig cfg = quiet_config();
  cfg.gamma = 1.2;
  cfg.q = 0.0;
  cfg.L = 0.2;
  cfg.dx = 0.02;
  cfg.T = 0.1;
  cfg.lambda = 0.4;
  cfg.initial.breaks = {0.0};
  cfg.initial.values = {{1.0, 0.4}, {0.65, -0.2}};
  cfg.sigma.values = {0.0};
  // The background density must match the far densities of the initial data:
  // the far-field recursion holds rho = mu outside the cone.
  cfg.mu.breaks = {0.0};
  cfg.mu.values = {1.0, 0.65};
  cfg.psi_minus.constant = 0.0;

  const RunSummary sum = run(cfg);
  const GasContext gas = GasContext::make(cfg.gamma);
  CHECK(sum.K == 11);
  CHECK(sum.nsteps == 13);
  CHECK(sum.C_T == 0.4);
  CHECK(sum.E_T == 0.0);
  const Invariants il = to_invariants(gas, {1.0, 0.4});
  const Invariants ir = to_invariants(gas, {0.65, -0.2});
  CHECK(sum.Cprime_T == std::abs(ir.r - il.r) + std::abs(ir.s - il.s));
  CHECK(sum.sigma_max == 0.0);
  CHECK(sum.sigma_tv == 0.0);
  CHECK(sum.interaction_c > 0.0);
  CHECK(sum.K_coef > 0.0);

  // No charge, no drag: the far-field series is frozen at the initial data.
  REQUIRE(sum.far.u_minus.size() == 14);
  for (std::size_t n = 0; n <= 13; ++n) {
    CHECK(sum.far.u_minus[n] == 0.4);
    CHECK(sum.far.u_plus[n] == -0.2);
    CHECK(sum.far.psi_minus[n] == 0.0);
    CHECK(sum.far.psi_plus[n] == 0.0);
  }

  // The growth coefficients vanish, so F must be (slack-)monotone and the
  // closed-form bound collapses onto F0.
  CHECK(sum.F0 > 0.0);
  CHECK(sum.F0 == sum.steps[0].F);
  CHECK(sum.F_closed_bound == sum.F0);
  double prev = sum.F0;
  for (const StepReport& rep : sum.steps) {
    CHECK(rep.A1 == 0.0);
    CHECK(rep.B1 == 0.0);
    CHECK(rep.F <= prev + 1e-9 * (1.0 + std::abs(prev)));
    prev = rep.F;
    CHECK(rep.xi_l1 == 0.0);
    CHECK(rep.xi_integral == 0.0);
    CHECK(rep.mass_residual == 0.0);
    CHECK(rep.psi_tv == 0.0);
    CHECK(rep.psi_max_abs == 0.0);
    CHECK(rep.growth_ok);
    CHECK(rep.tv_bound_ok);
    CHECK(rep.cone_ok);
    CHECK(rep.envelope_ok);
  }
  CHECK(sum.growth_all_ok);
  CHECK(sum.tv_bound_all_ok);
  CHECK(sum.cone_all_ok);
  CHECK(sum.envelopes_all_ok);
  CHECK(sum.mass_identity_ok);
  CHECK(sum.psi_tv_ok);

  // Same data and gas as the reference decoupled setup: same certified floor.
  CHECK(sum.density_floor_known);
  CHECK(sum.rho_floor == Approx(0.6084631804956849).epsilon(1e-13));
  CHECK(sum.min_rho_run >= sum.rho_floor);
  CHECK(sum.min_rho_run <= 0.65);

  // More workers, identical trajectory, bit for bit.
  RunConfig wide = cfg;
  wide.workers = 5;
  const RunSummary wsum = run(wide);
  REQUIRE(wsum.steps.size() == sum.steps.size());
  for (std::size_t n = 0; n < sum.steps.size(); ++n) {
    CHECK(wsum.steps[n].F == sum.steps[n].F);
    CHECK(wsum.steps[n].tv_u == sum.steps[n].tv_u);
    CHECK(wsum.steps[n].min_rho == sum.steps[n].min_rho);
    CHECK(wsum.steps[n].max_speed == sum.steps[n].max_speed);
  }
  REQUIRE(wsum.final_grid.cells.size() == sum.final_grid.cells.size());
  for (std::size_t k = 0; k < sum.final_grid.cells.size(); ++k)
    CHECK(same_state(wsum.final_grid.cells[k], sum.final_grid.cells[k]));
  CHECK(wsum.min_rho_run == sum.min_rho_run);
}

TEST_CASE("mesh-ratio violations and oversized runs are rejected") {
  RunConfig cfg = quiet_config();
  cfg.gamma = 1.4;
  cfg.L = 0.1;
  cfg.dx = 0.02;
  cfg.T = 0.05;
  cfg.lambda = 5.0;
  cfg.initial.breaks = {0.0};
  cfg.initial.values = {{1.0, 0.8}, {1.0, -0.8}};
  cfg.sigma.values = {0.0};
  cfg.mu.values = {1.0};
  CHECK_THROWS_WITH_AS(run(cfg),
                       doctest::Contains("mesh ratio violated at step 0"),
                       CflError);

  RunConfig huge = quiet_config();
  huge.L = 0.1;
  huge.dx = 0.1;
  huge.T = 1e7;
  huge.lambda = 0.5;
  huge.initial.values = {{1.0, 0.0}};
  huge.sigma.values = {0.0};
  huge.mu.values = {1.0};
  CHECK_THROWS_WITH_AS(run(huge), doctest::Contains("increase dx or lambda"),
                       ConfigError);
}

TEST_CASE("strict bounds flag escalates a failed growth verdict") {
  // Two colliding compressions; with the interaction weight crippled the
  // functional must jump upward when the shocks meet.
  RunConfig cfg = quiet_config();
  cfg.gamma = 1.4;
  cfg.q = 0.0;
  cfg.L = 0.2;
  cfg.dx = 0.02;
  cfg.T = 0.12;
  cfg.lambda = 0.35;
  cfg.initial.breaks = {-0.06, 0.06};
  cfg.initial.values = {{1.0, 0.9}, {1.0, 0.0}, {1.0, -0.9}};
  cfg.sigma.values = {0.0};
  cfg.mu.values = {1.0};
  cfg.K_override = 1e-15;

  const RunSummary sum = run(cfg);
  CHECK(!sum.growth_all_ok);
  CHECK(sum.K_coef == 1e-15);

  RunConfig strict = cfg;
  strict.strict_bounds = true;
  CHECK_THROWS_WITH_AS(run(strict),
                       doctest::Contains("functional growth bound failed"),
                       BoundError);

  // With the measured interaction weight the same collision passes.
  RunConfig weighted = cfg;
  weighted.K_override = 0.0;
  const RunSummary good = run(weighted);
  CHECK(good.growth_all_ok);
  CHECK(good.K_coef > 0.0);
}
