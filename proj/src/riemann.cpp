#include "ep1d/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ep1d/detail/newton.hpp"
#include "ep1d/errors.hpp"
#include "ep1d/wave_curves.hpp"

namespace ep1d {
namespace {

struct BranchEval {
  double u;
  double du;  ///< derivative with respect to the middle density
};

/// u along the forward 1-curve through `left`, shock branch above left.rho.
BranchEval forward1(const GasContext& gas, const State& left, double rho) {
  if (rho > left.rho) {
    const double P = std::pow(rho, gas.gamma);
    const double Pl = std::pow(left.rho, gas.gamma);
    const double inv = 1.0 / left.rho - 1.0 / rho;
    const double Pi = (P - Pl) * inv;
    const double root = std::sqrt(Pi);
    const double dPi = gas.gamma * std::pow(rho, gas.gamma - 1.0) * inv +
                       (P - Pl) / (rho * rho);
    return {shock_u(gas, 1, left, rho), -dPi / (2.0 * root)};
  }
  const double c = sound_speed(gas, rho);
  return {rarefaction_u(gas, 1, left, rho), -c / rho};
}

/// u along the backward 2-curve through `right` (the locus of middle states
/// that reach `right` by a forward 2-wave), shock branch above right.rho.
BranchEval backward2(const GasContext& gas, const State& right, double rho) {
  if (rho > right.rho) {
    const double P = std::pow(rho, gas.gamma);
    const double Pr = std::pow(right.rho, gas.gamma);
    const double inv = 1.0 / right.rho - 1.0 / rho;
    const double Pi = (P - Pr) * inv;
    const double root = std::sqrt(Pi);
    const double dPi = gas.gamma * std::pow(rho, gas.gamma - 1.0) * inv +
                       (P - Pr) / (rho * rho);
    return {right.u + root, dPi / (2.0 * root)};
  }
  const double c = sound_speed(gas, rho);
  const double diff = std::pow(right.rho, gas.eps) *
                      std::expm1(gas.eps * std::log(rho / right.rho));
  return {right.u + gas.sqrt_gamma * diff / gas.eps, c / rho};
}

Wave make_wave1(const GasContext& gas, const State& left, const State& mid,
                const Invariants& il, const Invariants& im) {
  Wave w;
  w.family = 1;
  w.strength = std::abs(il.r - im.r);
  if (mid.rho > left.rho) {
    w.kind = WaveKind::shock;
    w.head = w.tail = shock_speed(gas, 1, left, mid);
  } else {
    w.kind = WaveKind::rarefaction;
    w.head = eigenvalues(gas, left).first;
    w.tail = eigenvalues(gas, mid).first;
  }
  return w;
}

Wave make_wave2(const GasContext& gas, const State& mid, const State& right,
                const Invariants& im, const Invariants& ir) {
  Wave w;
  w.family = 2;
  w.strength = std::abs(ir.s - im.s);
  if (mid.rho > right.rho) {
    w.kind = WaveKind::shock;
    w.head = w.tail = shock_speed(gas, 2, mid, right);
  } else {
    w.kind = WaveKind::rarefaction;
    w.head = eigenvalues(gas, mid).second;
    w.tail = eigenvalues(gas, right).second;
  }
  return w;
}

}  // namespace

bool solvable(const GasContext& gas, const State& left, const State& right) {
  const Invariants il = to_invariants(gas, left);
  const Invariants ir = to_invariants(gas, right);
  return il.s - ir.r > -2.0 * gas.sqrt_gamma / gas.eps;
}

WaveFan solve(const GasContext& gas, const State& left, const State& right) {
  WaveFan fan;
  fan.left = left;
  fan.right = right;
  if (left.rho == right.rho && left.u == right.u) {
    // Bitwise-equal data: the solution is the constant state; keep it exact.
    fan.middle = left;
    const auto lam = eigenvalues(gas, left);
    fan.wave1 = {1, WaveKind::rarefaction, 0.0, lam.first, lam.first};
    fan.wave2 = {2, WaveKind::rarefaction, 0.0, lam.second, lam.second};
    fan.region = Region::III;
    return fan;
  }

  const Invariants il = to_invariants(gas, left);
  const Invariants ir = to_invariants(gas, right);
  const double gap = il.s - ir.r;  // 2 sqrt(gamma)/eps * (pe_m - 1) if III
  if (!(gap > -2.0 * gas.sqrt_gamma / gas.eps)) {
    throw VacuumError("Riemann data reaches vacuum: s_l - r_r = " +
                      std::to_string(gap));
  }

  auto mismatch = [&](double rho) {
    const BranchEval a = forward1(gas, left, rho);
    const BranchEval b = backward2(gas, right, rho);
    return std::make_pair(a.u - b.u, a.du - b.du);
  };

  const double rho_min = std::min(left.rho, right.rho);
  double rho_m;
  if (mismatch(rho_min).first <= 0.0) {
    // Both waves are rarefactions: closed-form middle density.
    const double pe = 1.0 + gas.eps * gap / (2.0 * gas.sqrt_gamma);
    if (pe <= 1e-12) {
      throw VacuumError("two-rarefaction middle state at vacuum");
    }
    rho_m = std::pow(pe, 1.0 / gas.eps);
  } else {
    double hi = std::max(left.rho, right.rho);
    while (mismatch(hi).first > 0.0) hi *= 2.0;
    rho_m = detail::newton_bracketed(mismatch, rho_min, hi,
                                     std::sqrt(rho_min * hi), 1e-12, 200);
  }

  fan.middle.rho = rho_m;
  fan.middle.u =
      0.5 * (forward1(gas, left, rho_m).u + backward2(gas, right, rho_m).u);
  const Invariants im = to_invariants(gas, fan.middle);
  fan.wave1 = make_wave1(gas, left, fan.middle, il, im);
  fan.wave2 = make_wave2(gas, fan.middle, right, im, ir);
  fan.region = classify_region(gas, left, right);
  return fan;
}

State sample(const GasContext& gas, const WaveFan& fan, double xi) {
  const Wave& w1 = fan.wave1;
  const Wave& w2 = fan.wave2;
  if (xi < w1.head) return fan.left;
  if (w1.kind == WaveKind::rarefaction && w1.strength > 0.0 &&
      xi <= w1.tail) {
    // Inside the 1-fan: s is constant, u - c = xi.
    const double sL = to_invariants(gas, fan.left).s;
    const double pe = (gas.eps * (sL - xi) + gas.sqrt_gamma) /
                      (gas.sqrt_gamma * (1.0 + gas.eps));
    State st;
    st.rho = std::pow(pe, 1.0 / gas.eps);
    st.u = xi + gas.sqrt_gamma * pe;
    return st;
  }
  if (xi < w2.head) return fan.middle;
  if (w2.kind == WaveKind::rarefaction && w2.strength > 0.0 &&
      xi <= w2.tail) {
    // Inside the 2-fan: r is constant, u + c = xi.
    const double rR = to_invariants(gas, fan.right).r;
    const double pe = (gas.eps * (xi - rR) + gas.sqrt_gamma) /
                      (gas.sqrt_gamma * (1.0 + gas.eps));
    State st;
    st.rho = std::pow(pe, 1.0 / gas.eps);
    st.u = xi - gas.sqrt_gamma * pe;
    return st;
  }
  return fan.right;
}

double max_wave_speed(const GasContext& gas, const WaveFan& fan) {
  double m = std::max(std::abs(fan.wave1.head), std::abs(fan.wave1.tail));
  m = std::max(m, std::max(std::abs(fan.wave2.head), std::abs(fan.wave2.tail)));
  for (const State* st : {&fan.left, &fan.middle, &fan.right}) {
    const auto lam = eigenvalues(gas, *st);
    m = std::max(m, std::max(std::abs(lam.first), std::abs(lam.second)));
  }
  return m;
}

}  // namespace ep1d
