#include "ep1d/gas.hpp"

#include <cmath>
#include <string>

#include "ep1d/errors.hpp"
#include "ep1d/wave_curves.hpp"

namespace ep1d {

GasContext GasContext::make(double gamma) {
  if (!(gamma > 1.0) || !(gamma < 2.0)) {
    throw ConfigError("gamma must lie strictly inside (1, 2), got " +
                      std::to_string(gamma));
  }
  GasContext gas;
  gas.gamma = gamma;
  gas.eps = 0.5 * (gamma - 1.0);
  gas.sqrt_gamma = std::sqrt(gamma);
  return gas;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::I:
      return "I";
    case Region::II:
      return "II";
    case Region::III:
      return "III";
    case Region::IV:
      return "IV";
  }
  return "?";
}

double sound_speed(const GasContext& gas, double rho) {
  return gas.sqrt_gamma * std::pow(rho, gas.eps);
}

std::pair<double, double> eigenvalues(const GasContext& gas, const State& st) {
  const double c = sound_speed(gas, st.rho);
  return {st.u - c, st.u + c};
}

Invariants to_invariants(const GasContext& gas, const State& st) {
  // rho^eps - 1 via expm1 keeps r, s accurate near rho = 1.
  const double w =
      gas.sqrt_gamma * std::expm1(gas.eps * std::log(st.rho)) / gas.eps;
  return {st.u - w, st.u + w};
}

State from_invariants(const GasContext& gas, const Invariants& inv) {
  const double gap = inv.s - inv.r;  // = 2 sqrt(gamma)(rho^eps - 1)/eps
  const double base = 1.0 + gas.eps * gap / (2.0 * gas.sqrt_gamma);
  if (base <= 1e-12) {
    throw VacuumError("invariant pair reaches the vacuum boundary: s - r = " +
                      std::to_string(gap));
  }
  State st;
  st.rho = std::pow(base, 1.0 / gas.eps);
  st.u = 0.5 * (inv.r + inv.s);
  return st;
}

Region classify_region(const GasContext& gas, const State& left,
                       const State& right) {
  if (left.rho == right.rho && left.u == right.u) return Region::III;
  const Invariants il = to_invariants(gas, left);
  const Invariants ir = to_invariants(gas, right);
  const double dr = il.r - ir.r;  // primary drop of a 1-shock
  const double ds = il.s - ir.s;  // primary drop of a 2-shock
  // Region I sits above both shock curves through the left state; II left of
  // the 2-shock curve; IV below the 1-shock curve; III is the complement.
  // Ties land in the more shock-like region.
  if (dr >= 0.0 && ds >= 0.0 && dr >= g2(gas, ds, left.rho) &&
      ds >= g1(gas, dr, left.rho)) {
    return Region::I;
  }
  if (ds >= 0.0 && dr <= g2(gas, ds, left.rho)) return Region::II;
  if (dr >= 0.0 && ds <= g1(gas, dr, left.rho)) return Region::IV;
  return Region::III;
}

}  // namespace ep1d
