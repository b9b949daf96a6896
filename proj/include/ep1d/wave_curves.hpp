#ifndef EP1D_WAVE_CURVES_HPP
#define EP1D_WAVE_CURVES_HPP

#include "ep1d/gas.hpp"

namespace ep1d {

/// Velocity on the admissible i-shock curve through `left` at density rho.
/// Family 1 requires rho > left.rho (compression from the left), family 2
/// requires rho < left.rho; on both admissible branches the velocity drops:
///   u = u_left - sqrt((rho^gamma - rho_l^gamma)(rho - rho_l)/(rho rho_l)).
/// Throws std::domain_error if rho is on the wrong side for the family.
double shock_u(const GasContext& gas, int family, const State& left,
               double rho);

/// Propagation speed from the mass jump condition,
///   sigma = (rho_r u_r - rho_l u_l) / (rho_r - rho_l).
/// Requires a genuine density jump; throws std::domain_error otherwise.
/// The ratio cancels catastrophically for weak shocks; prefer the
/// family-aware overload whenever the family is known.
double shock_speed(const GasContext& gas, const State& left,
                   const State& right);

/// Same speed through the equivalent cancellation-free form
///   family 1:  sigma = u_r - rho_l^eps h(x)/(e^x - 1),  x = log(rho_r/rho_l),
///   family 2:  sigma = u_l + rho_r^eps h(x)/(e^x - 1),  x = log(rho_l/rho_r),
/// which tends to the characteristic speed of the high-density side as the
/// jump vanishes.  Accurate uniformly in the shock strength, including
/// jumps at round-off scale.  Requires the admissible density ordering for
/// the family (equality allowed); throws std::domain_error otherwise.
double shock_speed(const GasContext& gas, int family, const State& left,
                   const State& right);

/// Velocity on the i-rarefaction curve through `left` at density rho:
///   u = u_left + (-1)^i sqrt(gamma) (rho^eps - rho_l^eps)/eps,
/// valid for (-1)^i (rho - rho_l) > 0 (family 1 expands, family 2 compresses
/// seen from the left).  Throws std::domain_error outside the branch.
double rarefaction_u(const GasContext& gas, int family, const State& left,
                     double rho);

/// Complementary-invariant drop across a 1-shock as a function of the primary
/// drop: with a = r_left - r >= 0 along the 1-shock curve from base density
/// rho_base, returns s_left - s.  g1(0) = 0; 0 <= g1' < 1; g1'' >= 0.
double g1(const GasContext& gas, double a, double rho_base);

/// Same for the 2-shock curve: with a = s_left - s >= 0, returns r_left - r.
double g2(const GasContext& gas, double a, double rho_base);

/// Value together with first and second derivatives with respect to the
/// primary drop, from the closed-form parametric derivatives (no finite
/// differences).
struct CurveDerivatives {
  double value;
  double d1;
  double d2;
};

CurveDerivatives g1_with_derivatives(const GasContext& gas, double a,
                                     double rho_base);
CurveDerivatives g2_with_derivatives(const GasContext& gas, double a,
                                     double rho_base);

/// Backward (non-physical-side) shock curves through `base`: states that
/// connect *to* base by an admissible shock with base on the downstream side.
/// Family 2: r - r0 = g1(s - s0, rho0) parametrized by d = s - s0 > 0.
/// Family 1: s - s0 = g2(r - r0, rho0) parametrized by d = r - r0 > 0.
/// Returns the primitive state at parameter d.
State inverse_shock_curve(const GasContext& gas, int family, const State& base,
                          double d);

namespace curve_detail {

/// Scaled drops along a 1-shock in terms of x = log(density ratio) >= 0:
///   primary  drop / rho_base^eps = A(x) = h(x) + phi(x),
///   opposite drop / rho_base^eps = B(x) = h(x) - phi(x),
/// where h = sqrt((e^x - 1)(e^{gamma x} - 1) e^{-x}) and
/// phi = sqrt(gamma) (e^{eps x} - 1)/eps.  The 2-shock drops are
/// e^{-eps x} A(x) and e^{-eps x} B(x) with x = -log(density ratio).
/// B has a triple zero at x = 0; below `series_switch_x` it is evaluated by
/// an embedded Taylor series exact to machine precision.
double A_of_x(const GasContext& gas, double x);
double B_of_x(const GasContext& gas, double x);
double A_dx(const GasContext& gas, double x);
double B_dx(const GasContext& gas, double x);
double A_dxx(const GasContext& gas, double x);
double B_dxx(const GasContext& gas, double x);

/// Inverse of the monotone primary-drop maps: solve A(x) = y (family 1) or
/// e^{-eps x} A(x) = y (family 2) for x >= 0, to 1e-13 relative.
double invert_primary_1(const GasContext& gas, double y);
double invert_primary_2(const GasContext& gas, double y);

constexpr double series_switch_x = 0.05;

}  // namespace curve_detail

}  // namespace ep1d

#endif
