#include "ep1d/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace ep1d {

std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    const double back = std::strtod(buf, nullptr);
    if (back == v || (v != v && back != back)) break;
  }
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.parent_path() /
                       (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string render_snapshot(const GasContext& gas, const GridState& grid,
                            const FieldState& field, double t) {
  std::string out;
  out += "# layer\t" + std::to_string(grid.n) + "\n";
  out += "# t\t" + format_double(t) + "\n";
  out += "# far-\trho=" + format_double(grid.far_minus.rho) +
         "\tu=" + format_double(grid.far_minus.u) + "\n";
  out += "# far+\trho=" + format_double(grid.far_plus.rho) +
         "\tu=" + format_double(grid.far_plus.u) + "\n";
  out += "# x_center\trho\tu\tr\ts\tpsi\txi\n";
  const long half = static_cast<long>(field.xi.size()) / 2;
  const auto xi_at = [&](long j) -> double {
    if (j < -half || j >= half) return 0.0;
    return field.xi[static_cast<std::size_t>(j + half)];
  };
  for (long i = -grid.m; i <= grid.m; i += 2) {
    const State& st = grid.cell_ref(i);
    const Invariants inv = to_invariants(gas, st);
    const double psi = field.psi_cell[static_cast<std::size_t>((i + grid.m) / 2)];
    // Cell i spans the two fine intervals (x_{i-1}, x_i) and (x_i, x_{i+1}).
    const double xi = 0.5 * (xi_at(i - 1) + xi_at(i));
    out += format_double(grid.x_of(i));
    out += '\t';
    out += format_double(st.rho);
    out += '\t';
    out += format_double(st.u);
    out += '\t';
    out += format_double(inv.r);
    out += '\t';
    out += format_double(inv.s);
    out += '\t';
    out += format_double(psi);
    out += '\t';
    out += format_double(xi);
    out += '\n';
  }
  return out;
}

std::string render_diagnostics(const RunSummary& s) {
  std::string out;
  out += "# K\t" + std::to_string(s.K) + "\n";
  out += "# nsteps\t" + std::to_string(s.nsteps) + "\n";
  out += "# dx\t" + format_double(s.dx) + "\tdt\t" + format_double(s.dt) +
         "\tlambda\t" + format_double(s.lambda) + "\n";
  out += "# K_coef\t" + format_double(s.K_coef) + "\tinteraction_c\t" +
         format_double(s.interaction_c) + "\n";
  out += "# C_T\t" + format_double(s.C_T) + "\tCprime_T\t" +
         format_double(s.Cprime_T) + "\tE_T\t" + format_double(s.E_T) + "\n";
  out += "# F0\t" + format_double(s.F0) + "\tF_closed_bound\t" +
         format_double(s.F_closed_bound) + "\n";
  out += "# density_floor_known\t" +
         std::string(s.density_floor_known ? "1" : "0") + "\trho_floor\t" +
         format_double(s.rho_floor) + "\tmin_rho_run\t" +
         format_double(s.min_rho_run) + "\n";
  out +=
      "# n\tt\ttheta\tV\tQ\tF\ttv_u\ttv_r\ttv_s\tmax_speed\tcfl_margin\t"
      "min_rho\tdelta\tgamma\txi_l1\txi_integral\tpsi_tv\tpsi_max\t"
      "mass_residual\tedge_residual\tA1\tB1\tgrowth_ok\ttv_bound_ok\t"
      "cone_ok\tenvelope_ok\n";
  for (const StepReport& r : s.steps) {
    out += std::to_string(r.n);
    const double cols[] = {r.t_next,     r.theta,        r.V,
                           r.Q,          r.F,            r.tv_u,
                           r.tv_r,       r.tv_s,         r.max_speed,
                           r.cfl_margin, r.min_rho,      r.delta,
                           r.gamma_corr, r.xi_l1,        r.xi_integral,
                           r.psi_tv,     r.psi_max_abs,  r.mass_residual,
                           r.edge_residual, r.A1,        r.B1};
    for (double c : cols) {
      out += '\t';
      out += format_double(c);
    }
    const bool flags[] = {r.growth_ok, r.tv_bound_ok, r.cone_ok,
                          r.envelope_ok};
    for (bool f : flags) {
      out += '\t';
      out += f ? '1' : '0';
    }
    out += '\n';
  }
  out += "# growth_all_ok\t" + std::string(s.growth_all_ok ? "1" : "0") + "\n";
  out += "# tv_bound_all_ok\t" + std::string(s.tv_bound_all_ok ? "1" : "0") +
         "\n";
  out += "# cone_all_ok\t" + std::string(s.cone_all_ok ? "1" : "0") + "\n";
  out += "# envelopes_all_ok\t" + std::string(s.envelopes_all_ok ? "1" : "0") +
         "\n";
  out += "# mass_identity_ok\t" + std::string(s.mass_identity_ok ? "1" : "0") +
         "\n";
  out += "# psi_tv_ok\t" + std::string(s.psi_tv_ok ? "1" : "0") + "\n";
  return out;
}

std::string snapshot_path(const OutputConfig& out, long layer) {
  char suffix[32];
  std::snprintf(suffix, sizeof(suffix), "%06ld.tsv", layer);
  return out.dir + "/" + out.snapshot_prefix + suffix;
}

}  // namespace ep1d
