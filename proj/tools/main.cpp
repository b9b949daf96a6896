// Command-line front end: full runs, single Riemann fans, the randomized
// interaction-estimate campaigns, and config validation.
//
// Exit codes: 0 success, 2 config error, 3 mesh-ratio (CFL) violation,
// 4 vacuum, 5 monitored-bound failure under --strict, 1 anything else.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ep1d/config.hpp"
#include "ep1d/errors.hpp"
#include "ep1d/gas.hpp"
#include "ep1d/grid.hpp"
#include "ep1d/interaction_lab.hpp"
#include "ep1d/io.hpp"
#include "ep1d/riemann.hpp"
#include "ep1d/scheme.hpp"

namespace {

using ep1d::format_double;

// With q = 0 the force vanishes identically, the charge imbalance xi carries
// a factor q/e = 0, and the potential reduces to the prescribed left trace,
// so the gas evolves by the plain random-choice scheme (plus relaxation if
// sigma > 0).
bool field_decoupled(const ep1d::RunConfig& cfg) { return cfg.q == 0.0; }

const char* theta_kind_name(const ep1d::ThetaConfig& th) {
  switch (th.kind) {
    case ep1d::ThetaConfig::Kind::van_der_corput: return "van-der-corput";
    case ep1d::ThetaConfig::Kind::prng: return "prng";
    case ep1d::ThetaConfig::Kind::list: return "list";
  }
  return "?";
}

void print_config_summary(const ep1d::RunConfig& cfg) {
  const ep1d::GasContext gas = ep1d::GasContext::make(cfg.gamma);
  const ep1d::GridState g0 = ep1d::discretize_initial(cfg);
  std::cout << "gamma " << format_double(cfg.gamma) << "  (eps "
            << format_double(gas.eps) << ")\n";
  std::cout << "charge/mass q=" << format_double(cfg.q)
            << " m=" << format_double(cfg.m) << " e=" << format_double(cfg.e)
            << "\n";
  std::cout << "grid: dx " << format_double(cfg.dx) << "  K " << g0.K
            << "  L_grid " << format_double(g0.L_grid()) << "  T "
            << format_double(cfg.T) << "\n";
  std::cout << "mesh ratio: "
            << (cfg.lambda > 0.0 ? format_double(cfg.lambda)
                                 : std::string("auto"))
            << "  (safety " << format_double(cfg.cfl_safety) << ")\n";
  std::cout << "sigma: range [" << format_double(cfg.sigma.min_value()) << ", "
            << format_double(cfg.sigma.max_value()) << "]  TV "
            << format_double(cfg.sigma.total_variation()) << "\n";
  std::cout << "mu: range [" << format_double(cfg.mu.min_value()) << ", "
            << format_double(cfg.mu.max_value()) << "]  far ("
            << format_double(cfg.mu.front_value()) << ", "
            << format_double(cfg.mu.back_value()) << ")\n";
  std::cout << "theta: " << theta_kind_name(cfg.theta) << "\n";
  if (field_decoupled(cfg)) std::cout << "field decoupled\n";
}

int cmd_check(const std::string& path) {
  const ep1d::RunConfig cfg = ep1d::load_config_file(path);
  print_config_summary(cfg);
  std::cout << "config ok\n";
  return 0;
}

int cmd_run(const std::string& path, int workers, bool strict,
            const std::string& out_dir) {
  ep1d::RunConfig cfg = ep1d::load_config_file(path);
  if (workers > 0) cfg.workers = workers;
  if (strict) cfg.strict_bounds = true;
  if (!out_dir.empty()) cfg.output.dir = out_dir;
  if (field_decoupled(cfg)) std::cout << "field decoupled\n";

  const ep1d::RunSummary sum = ep1d::run(cfg);

  std::cout << "steps " << sum.nsteps << "  dt " << format_double(sum.dt)
            << "  lambda " << format_double(sum.lambda) << "  K " << sum.K
            << "\n";
  std::cout << "functional: F0 " << format_double(sum.F0) << "  weight "
            << format_double(sum.K_coef) << "  closed bound "
            << format_double(sum.F_closed_bound) << "\n";
  std::cout << "far field: C_T " << format_double(sum.C_T) << "  C'_T "
            << format_double(sum.Cprime_T) << "  E_T "
            << format_double(sum.E_T) << "\n";
  if (sum.density_floor_known)
    std::cout << "density floor " << format_double(sum.rho_floor)
              << "  observed min " << format_double(sum.min_rho_run) << "\n";
  else
    std::cout << "density floor: smallness condition not met  observed min "
              << format_double(sum.min_rho_run) << "\n";
  std::cout << "verdicts: growth " << (sum.growth_all_ok ? "ok" : "FAIL")
            << "  tv " << (sum.tv_bound_all_ok ? "ok" : "FAIL") << "  cone "
            << (sum.cone_all_ok ? "ok" : "FAIL") << "  envelopes "
            << (sum.envelopes_all_ok ? "ok" : "FAIL") << "  mass "
            << (sum.mass_identity_ok ? "ok" : "FAIL") << "  psi-tv "
            << (sum.psi_tv_ok ? "ok" : "FAIL") << "\n";
  std::cout << "diagnostics: " << cfg.output.dir << "/"
            << cfg.output.diagnostics_file << "\n";
  const bool all_ok = sum.growth_all_ok && sum.tv_bound_all_ok &&
                      sum.cone_all_ok && sum.envelopes_all_ok &&
                      sum.mass_identity_ok && sum.psi_tv_ok;
  return all_ok ? 0 : 1;
}

void print_wave(const ep1d::Wave& w) {
  std::cout << "wave" << w.family << " ";
  if (w.kind == ep1d::WaveKind::shock) {
    std::cout << "shock        strength " << format_double(w.strength)
              << "  speed " << format_double(w.head);
  } else {
    std::cout << "rarefaction  strength " << format_double(w.strength)
              << "  head " << format_double(w.head) << "  tail "
              << format_double(w.tail);
  }
  std::cout << "\n";
}

int cmd_riemann(const std::string& input, double gamma, double rho_l,
                double u_l, double rho_r, double u_r, int rays,
                const std::vector<double>& xis) {
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw ep1d::ConfigError("cannot open " + input);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ep1d::ConfigError(input + ": " + e.what());
    }
    try {
      gamma = j.at("gamma").get<double>();
      rho_l = j.at("left").at("rho").get<double>();
      u_l = j.at("left").at("u").get<double>();
      rho_r = j.at("right").at("rho").get<double>();
      u_r = j.at("right").at("u").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ep1d::ConfigError(input + ": " + e.what());
    }
  }
  if (!(gamma > 1.0 && gamma < 2.0))
    throw ep1d::ConfigError("gamma must lie in (1, 2), got " +
                            format_double(gamma));
  if (!(rho_l > 0.0) || !(rho_r > 0.0))
    throw ep1d::ConfigError("densities must be positive");

  const ep1d::GasContext gas = ep1d::GasContext::make(gamma);
  const ep1d::State left{rho_l, u_l};
  const ep1d::State right{rho_r, u_r};
  const ep1d::WaveFan fan = ep1d::solve(gas, left, right);

  const auto print_state = [&](const char* tag, const ep1d::State& st) {
    const ep1d::Invariants inv = ep1d::to_invariants(gas, st);
    std::cout << tag << " rho " << format_double(st.rho) << "  u "
              << format_double(st.u) << "  r " << format_double(inv.r)
              << "  s " << format_double(inv.s) << "\n";
  };
  std::cout << "gamma " << format_double(gamma) << "\n";
  print_state("left  ", fan.left);
  print_state("middle", fan.middle);
  print_state("right ", fan.right);
  std::cout << "region " << ep1d::region_name(fan.region) << "\n";
  print_wave(fan.wave1);
  print_wave(fan.wave2);

  std::vector<double> sample_rays = xis;
  if (rays > 1) {
    const double w = 1.05 * ep1d::max_wave_speed(gas, fan) + 0.1;
    for (int k = 0; k < rays; ++k)
      sample_rays.push_back(-w + 2.0 * w * k / (rays - 1));
  }
  if (!sample_rays.empty()) {
    std::cout << "# xi\trho\tu\n";
    for (double xi : sample_rays) {
      const ep1d::State st = ep1d::sample(gas, fan, xi);
      std::cout << format_double(xi) << "\t" << format_double(st.rho) << "\t"
                << format_double(st.u) << "\n";
    }
  }
  return 0;
}

void print_check_result(const ep1d::CheckResult& res) {
  std::cout << res.name << ": cases " << res.cases << "  failures "
            << res.failures << "  worst violation "
            << format_double(res.worst_violation) << "  min margin "
            << format_double(res.min_margin) << "\n";
  for (const auto& [key, count] : res.tally)
    std::cout << "  " << key << " " << count << "\n";
  for (const auto& [key, count] : res.failed)
    std::cout << "  FAILED " << key << " " << count << "\n";
  for (const auto& f : res.witness_files)
    std::cout << "  witness " << f << "\n";
  std::cout << "  verdict " << (res.pass() ? "pass" : "FAIL") << "\n";
}

int cmd_interactions(const ep1d::LabConfig& lab, const std::string& which) {
  bool all_pass = true;
  const auto consume = [&](const ep1d::CheckResult& res) {
    print_check_result(res);
    all_pass = all_pass && res.pass();
  };

  if (which == "all") {
    for (const ep1d::CheckResult& res : ep1d::run_all_checks(lab))
      consume(res);
  } else if (which == "left-shift") {
    consume(ep1d::check_left_shift(lab));
  } else if (which == "right-shift") {
    consume(ep1d::check_right_shift(lab));
  } else if (which == "case-table") {
    consume(ep1d::check_case_table(lab));
  } else if (which == "shift-monotonicity") {
    const ep1d::InteractionConstant ic = ep1d::check_interaction_constant(lab);
    consume(ic.monotonicity);
    std::cout << "  C_hat " << format_double(ic.C_hat) << "  (half sample "
              << format_double(ic.C_hat_half) << ")\n";
  } else if (which == "curve-properties") {
    consume(ep1d::check_curve_properties(lab));
  } else if (which == "diamond") {
    const ep1d::GasContext gas = ep1d::GasContext::make(lab.gamma);
    const double c_hat = ep1d::estimate_interaction_constant(
        gas, 0.25 * lab.rho_min, 4.0 * lab.rho_max);
    consume(ep1d::check_diamond(lab, 4.0 * gas.eps * c_hat));
  } else {
    throw ep1d::ConfigError("unknown check '" + which + "'");
  }
  std::cout << (all_pass ? "all checks passed" : "CHECK FAILURES") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-D isentropic Euler-Poisson random-choice solver"};
  app.require_subcommand(1);

  // run
  std::string run_config, run_out;
  int run_workers = 0;
  bool run_strict = false;
  CLI::App* sub_run = app.add_subcommand("run", "full splitting-scheme run");
  sub_run->add_option("config", run_config, "configuration file")->required();
  sub_run->add_option("--workers", run_workers, "parallel workers (>=1)");
  sub_run->add_flag("--strict", run_strict,
                    "abort with exit 5 when a monitored bound fails");
  sub_run->add_option("--out", run_out, "override the output directory");

  // riemann
  std::string rp_input;
  double rp_gamma = 1.4, rp_rho_l = 1.0, rp_u_l = 0.0, rp_rho_r = 1.0,
         rp_u_r = 0.0;
  int rp_rays = 0;
  std::vector<double> rp_xis;
  CLI::App* sub_rp =
      app.add_subcommand("riemann", "solve and print a single wave fan");
  sub_rp->add_option("input", rp_input,
                     "JSON file with gamma and left/right states");
  sub_rp->add_option("--gamma", rp_gamma, "adiabatic exponent in (1, 2)");
  sub_rp->add_option("--rho-left", rp_rho_l, "left density");
  sub_rp->add_option("--u-left", rp_u_l, "left velocity");
  sub_rp->add_option("--rho-right", rp_rho_r, "right density");
  sub_rp->add_option("--u-right", rp_u_r, "right velocity");
  sub_rp->add_option("--rays", rp_rays, "sample this many equispaced rays");
  sub_rp->add_option("--xi", rp_xis, "sample at these x/t rays");

  // interactions
  ep1d::LabConfig lab;
  std::string which = "all";
  CLI::App* sub_lab = app.add_subcommand(
      "interactions", "randomized wave-interaction estimate campaigns");
  sub_lab->add_option("--gamma", lab.gamma, "adiabatic exponent in (1, 2)");
  sub_lab->add_option("--rho-min", lab.rho_min, "density range, lower end");
  sub_lab->add_option("--rho-max", lab.rho_max, "density range, upper end");
  sub_lab->add_option("--u-span", lab.u_span, "velocity half-range");
  sub_lab->add_option("--cases", lab.cases, "random cases per check");
  sub_lab->add_option("--quota", lab.quota, "cases per interaction bucket");
  sub_lab->add_option("--empty-attempts", lab.empty_attempts,
                      "attempts per unreachable-case sweep");
  sub_lab->add_option("--seed", lab.seed, "base RNG seed");
  sub_lab->add_option("--workers", lab.workers, "parallel workers (>=1)");
  sub_lab->add_option("--witness-dir", lab.witness_dir,
                      "dump failing cases as JSON files here");
  sub_lab->add_option("--max-witnesses", lab.max_witnesses,
                      "cap on witness files per check");
  sub_lab->add_option("--check", which,
                      "all | left-shift | right-shift | case-table | "
                      "shift-monotonicity | curve-properties | diamond");

  // check
  std::string check_config;
  CLI::App* sub_check =
      app.add_subcommand("check", "validate a configuration file");
  sub_check->add_option("config", check_config, "configuration file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(sub_run))
      return cmd_run(run_config, run_workers, run_strict, run_out);
    if (app.got_subcommand(sub_rp))
      return cmd_riemann(rp_input, rp_gamma, rp_rho_l, rp_u_l, rp_rho_r,
                         rp_u_r, rp_rays, rp_xis);
    if (app.got_subcommand(sub_lab)) return cmd_interactions(lab, which);
    if (app.got_subcommand(sub_check)) return cmd_check(check_config);
  } catch (const ep1d::ConfigError& e) {
    std::cerr << "error (config): " << e.what() << "\n";
    return 2;
  } catch (const ep1d::CflError& e) {
    std::cerr << "error (mesh ratio): " << e.what() << "\n";
    return 3;
  } catch (const ep1d::VacuumError& e) {
    std::cerr << "error (vacuum): " << e.what() << "\n";
    return 4;
  } catch (const ep1d::BoundError& e) {
    std::cerr << "error (bound): " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
