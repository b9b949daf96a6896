#include "ep1d/wave_curves.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ep1d/detail/newton.hpp"

namespace ep1d {
namespace curve_detail {
namespace {

struct Eval3 {
  double value;
  double d1;
  double d2;
};

/// Coefficients c_k of h(x) = sqrt(gamma) * x * sum_k c_k x^k (exact rational
/// polynomials in eps; generated symbolically, truncation below 1e-15 for
/// x <= 0.06 over the whole gamma range).
std::array<double, 14> h_coeffs(double e) {
  std::array<double, 14> c;
  c[0] = 1.0;
  c[1] = e / 2.0;
  c[2] = ((5.0 * e + 2.0) * e + 1.0) / 24.0;
  c[3] = (((3.0 * e + 2.0) * e + 1.0) * e) / 48.0;
  c[4] = ((((79.0 * e + 68.0) * e + 46.0) * e + 12.0) * e + 3.0) / 5760.0;
  c[5] = (((((27.0 * e + 28.0) * e + 26.0) * e + 12.0) * e + 3.0) * e) /
         11520.0;
  c[6] = ((((((355.0 * e + 498.0) * e + 605.0) * e + 380.0) * e + 125.0) * e +
           18.0) *
              e +
          3.0) /
         967680.0;
  c[7] = (((((((113.0 * e + 218.0) * e + 297.0) * e + 212.0) * e + 83.0) * e +
            18.0) *
               e +
           3.0) *
          e) /
         1935360.0;
  c[8] = ((((((((3053.0 * e + 5432.0) * e + 6516.0) * e + 3896.0) * e +
              1174.0) *
                 e +
             232.0) *
                e +
            132.0) *
               e +
           40.0) *
              e +
          5.0) /
         464486400.0;
  c[9] = (((((((((21.0 * e - 1432.0) * e - 3092.0) * e - 3240.0) * e -
               1810.0) *
                  e -
              488.0) *
                 e +
             12.0) *
                e +
            40.0) *
               e +
           5.0) *
          e) /
         928972800.0;
  c[10] = ((((((((((2295.0 * e + 10782.0) * e + 64679.0) * e + 140168.0) * e +
                 159486.0) *
                    e +
                107444.0) *
                   e +
               45366.0) *
                  e +
              11912.0) *
                 e +
             1579.0) *
                e +
            30.0) *
               e +
           3.0) /
          122624409600.0;
  c[11] = (((((((((((12825.0 * e + 69390.0) * e + 170895.0) * e + 240312.0) *
                      e +
                  211802.0) *
                     e +
                 121348.0) *
                    e +
                45630.0) *
                   e +
               11032.0) *
                  e +
              1469.0) *
                 e +
             30.0) *
                e +
            3.0) *
           e) /
          245248819200.0;
  c[12] =
      ((((((((((((8423253.0 * e + 15527268.0) * e - 50973138.0) * e -
                237199140.0) *
                   e -
               419203553.0) *
                  e -
              429846104.0) *
                 e -
             283409068.0) *
                e -
            124262024.0) *
               e -
           36461053.0) *
              e -
          6966860.0) *
             e -
         692066.0) *
            e +
        1260.0) *
           e +
       105.0) /
      2678117105664000.0;
  c[13] = (((((((((((((-20287103.0 * e - 136077796.0) * e - 406279830.0) * e -
                     715302532.0) *
                        e -
                    825620681.0) *
                       e -
                   656254728.0) *
                      e -
                  366634132.0) *
                     e -
                 144019944.0) *
                    e -
                39094593.0) *
                   e -
               7021460.0) *
                  e -
              697526.0) *
                 e +
             1260.0) *
                e +
            105.0) *
           e) /
          5356234211328000.0;
  return c;
}

/// Coefficients b_k of B(x) = sqrt(gamma) * sum_{k>=3} b_k x^k.  B has a
/// triple zero at x = 0 (cubic contact between the shock curve and the
/// characteristic curve), so direct evaluation h - phi loses all digits for
/// small x; the series keeps full precision.
std::array<double, 15> b_coeffs(double e) {
  std::array<double, 15> b{};
  b[3] = ((e + 2.0) * e + 1.0) / 24.0;
  b[4] = (((e + 2.0) * e + 1.0) * e) / 48.0;
  b[5] = ((((31.0 * e + 68.0) * e + 46.0) * e + 12.0) * e + 3.0) / 5760.0;
  b[6] = (((((11.0 * e + 28.0) * e + 26.0) * e + 12.0) * e + 3.0) * e) /
         11520.0;
  b[7] = ((((((163.0 * e + 498.0) * e + 605.0) * e + 380.0) * e + 125.0) * e +
           18.0) *
              e +
          3.0) /
         967680.0;
  b[8] = (((((((65.0 * e + 218.0) * e + 297.0) * e + 212.0) * e + 83.0) * e +
            18.0) *
               e +
           3.0) *
          e) /
         1935360.0;
  b[9] = ((((((((1773.0 * e + 5432.0) * e + 6516.0) * e + 3896.0) * e +
              1174.0) *
                 e +
             232.0) *
                e +
            132.0) *
               e +
           40.0) *
              e +
          5.0) /
         464486400.0;
  b[10] = (((((((((-235.0 * e - 1432.0) * e - 3092.0) * e - 3240.0) * e -
                1810.0) *
                   e -
               488.0) *
                  e +
              12.0) *
                 e +
             40.0) *
                e +
            5.0) *
           e) /
          928972800.0;
  b[11] = ((((((((((-777.0 * e + 10782.0) * e + 64679.0) * e + 140168.0) * e +
                 159486.0) *
                    e +
                107444.0) *
                   e +
               45366.0) *
                  e +
              11912.0) *
                 e +
             1579.0) *
                e +
            30.0) *
               e +
           3.0) /
          122624409600.0;
  b[12] = (((((((((((12313.0 * e + 69390.0) * e + 170895.0) * e + 240312.0) *
                      e +
                  211802.0) *
                     e +
                 121348.0) *
                    e +
                45630.0) *
                   e +
               11032.0) *
                  e +
              1469.0) *
                 e +
             30.0) *
                e +
            3.0) *
           e) /
          245248819200.0;
  b[13] =
      ((((((((((((7993173.0 * e + 15527268.0) * e - 50973138.0) * e -
                237199140.0) *
                   e -
               419203553.0) *
                  e -
              429846104.0) *
                 e -
             283409068.0) *
                e -
            124262024.0) *
               e -
           36461053.0) *
              e -
          6966860.0) *
             e -
         692066.0) *
            e +
        1260.0) *
           e +
       105.0) /
      2678117105664000.0;
  b[14] = (((((((((((((-20348543.0 * e - 136077796.0) * e - 406279830.0) * e -
                     715302532.0) *
                        e -
                    825620681.0) *
                       e -
                   656254728.0) *
                      e -
                  366634132.0) *
                     e -
                 144019944.0) *
                    e -
                39094593.0) *
                   e -
               7021460.0) *
                  e -
              697526.0) *
                 e +
             1260.0) *
                e +
            105.0) *
           e) /
          5356234211328000.0;
  return b;
}

Eval3 h_series(const GasContext& gas, double x) {
  const auto c = h_coeffs(gas.eps);
  // h = sg*x*P(x), h' = sg*(P + x P') = sg * sum (k+1) c_k x^k,
  // h'' = sg * sum (k+1) k c_k x^{k-1}.
  double p0 = 0.0, p1 = 0.0, p2 = 0.0;
  for (int k = 13; k >= 0; --k) {
    const double kk = static_cast<double>(k);
    p0 = p0 * x + c[static_cast<std::size_t>(k)];
    p1 = p1 * x + (kk + 1.0) * c[static_cast<std::size_t>(k)];
    if (k >= 1) p2 = p2 * x + (kk + 1.0) * kk * c[static_cast<std::size_t>(k)];
  }
  return {gas.sqrt_gamma * x * p0, gas.sqrt_gamma * p1, gas.sqrt_gamma * p2};
}

Eval3 B_series(const GasContext& gas, double x) {
  const auto b = b_coeffs(gas.eps);
  // B = sg*x^3*P(x), B' = sg*x^2 * sum k b_k x^{k-3},
  // B'' = sg*x * sum k (k-1) b_k x^{k-3}.
  double p0 = 0.0, p1 = 0.0, p2 = 0.0;
  for (int k = 14; k >= 3; --k) {
    const double kk = static_cast<double>(k);
    p0 = p0 * x + b[static_cast<std::size_t>(k)];
    p1 = p1 * x + kk * b[static_cast<std::size_t>(k)];
    p2 = p2 * x + kk * (kk - 1.0) * b[static_cast<std::size_t>(k)];
  }
  const double x2 = x * x;
  return {gas.sqrt_gamma * x2 * x * p0, gas.sqrt_gamma * x2 * p1,
          gas.sqrt_gamma * x * p2};
}

/// h = sqrt(w) with w = (1 - e^{-x})(e^{gamma x} - 1), direct form for x away
/// from the origin.
Eval3 h_direct(const GasContext& gas, double x) {
  const double f = -std::expm1(-x);
  const double fp = std::exp(-x);
  const double g = std::expm1(gas.gamma * x);
  const double gp = gas.gamma * (g + 1.0);
  const double w = f * g;
  const double w1 = fp * g + f * gp;
  const double w2 = -fp * g + 2.0 * fp * gp + f * gas.gamma * gp;
  const double h = std::sqrt(w);
  const double h1 = w1 / (2.0 * h);
  return {h, h1, w2 / (2.0 * h) - w1 * w1 / (4.0 * w * h)};
}

Eval3 h_eval(const GasContext& gas, double x) {
  return x < series_switch_x ? h_series(gas, x) : h_direct(gas, x);
}

/// phi = sqrt(gamma) (e^{eps x} - 1)/eps; phi' = sqrt(gamma) e^{eps x}.
Eval3 phi_eval(const GasContext& gas, double x) {
  const double ex = std::exp(gas.eps * x);
  return {gas.sqrt_gamma * std::expm1(gas.eps * x) / gas.eps,
          gas.sqrt_gamma * ex, gas.sqrt_gamma * gas.eps * ex};
}

Eval3 A_eval(const GasContext& gas, double x) {
  const Eval3 h = h_eval(gas, x);
  const Eval3 p = phi_eval(gas, x);
  return {h.value + p.value, h.d1 + p.d1, h.d2 + p.d2};
}

Eval3 B_eval(const GasContext& gas, double x) {
  if (x < series_switch_x) return B_series(gas, x);
  const Eval3 h = h_direct(gas, x);
  const Eval3 p = phi_eval(gas, x);
  return {h.value - p.value, h.d1 - p.d1, h.d2 - p.d2};
}

/// Conjugated drops of the 2-family: At = e^{-eps x} A, Bt = e^{-eps x} B.
Eval3 conjugate(const GasContext& gas, const Eval3& f, double x) {
  const double em = std::exp(-gas.eps * x);
  const double e = gas.eps;
  return {em * f.value, em * (f.d1 - e * f.value),
          em * (f.d2 - 2.0 * e * f.d1 + e * e * f.value)};
}

constexpr double kInvertRtol = 1e-14;
constexpr int kInvertIters = 200;

}  // namespace

double A_of_x(const GasContext& gas, double x) { return A_eval(gas, x).value; }
double B_of_x(const GasContext& gas, double x) { return B_eval(gas, x).value; }
double A_dx(const GasContext& gas, double x) { return A_eval(gas, x).d1; }
double B_dx(const GasContext& gas, double x) { return B_eval(gas, x).d1; }
double A_dxx(const GasContext& gas, double x) { return A_eval(gas, x).d2; }
double B_dxx(const GasContext& gas, double x) { return B_eval(gas, x).d2; }

double invert_primary_1(const GasContext& gas, double y) {
  if (y < 0.0) throw std::domain_error("primary shock drop must be >= 0");
  if (y == 0.0) return 0.0;
  // A is increasing and convex with A'(0) = 2 sqrt(gamma), so x0 below is
  // near-exact for weak shocks and an upper bound in general.  A grows
  // exponentially, so the bracket must be built up from a small width:
  // doubling down from x0 itself would strand Newton on the flat tail.
  const double x0 = y / (2.0 * gas.sqrt_gamma);
  double lo = 0.0;
  double hi = std::min(2.0 * x0, 0.2);
  while (A_of_x(gas, hi) < y) {
    lo = hi;
    hi *= 2.0;
  }
  const double guess = x0 < hi ? std::max(x0, lo) : 0.5 * (lo + hi);
  return detail::newton_bracketed(
      [&](double x) {
        const Eval3 a = A_eval(gas, x);
        return std::make_pair(a.value - y, a.d1);
      },
      lo, hi, guess, kInvertRtol, kInvertIters);
}

double invert_primary_2(const GasContext& gas, double y) {
  if (y < 0.0) throw std::domain_error("primary shock drop must be >= 0");
  if (y == 0.0) return 0.0;
  // e^{-eps x} A(x) vanishes at 0, grows like e^{x/2}, and is strictly
  // increasing: its derivative is e^{-eps x} ((h' - eps h) + sqrt(gamma))
  // and w'/w = coth-type > gamma > 2 eps keeps h' - eps h positive.
  const double x0 = y / (2.0 * gas.sqrt_gamma);
  auto At = [&](double x) { return conjugate(gas, A_eval(gas, x), x); };
  double lo = 0.0;
  double hi = std::min(2.0 * x0, 0.2);
  while (At(hi).value < y) {
    lo = hi;
    hi *= 2.0;
  }
  const double guess = x0 < hi ? std::max(x0, lo) : 0.5 * (lo + hi);
  return detail::newton_bracketed(
      [&](double x) {
        const Eval3 a = At(x);
        return std::make_pair(a.value - y, a.d1);
      },
      lo, hi, guess, kInvertRtol, kInvertIters);
}

}  // namespace curve_detail

namespace {

double rho_pow_eps(const GasContext& gas, double rho) {
  return std::pow(rho, gas.eps);
}

}  // namespace

double shock_u(const GasContext& gas, int family, const State& left,
               double rho) {
  // Velocity drop across the shock is half the sum of the invariant drops:
  // u_l - u = rho_l^eps h(x) (family 1), rho_l^eps e^{-eps x} h(x) (family 2).
  if (family == 1) {
    if (rho < left.rho)
      throw std::domain_error("1-shock requires density increase");
    const double x = std::log(rho / left.rho);
    const double half =
        0.5 * (curve_detail::A_of_x(gas, x) + curve_detail::B_of_x(gas, x));
    return left.u - rho_pow_eps(gas, left.rho) * half;
  }
  if (family == 2) {
    if (rho > left.rho)
      throw std::domain_error("2-shock requires density decrease");
    const double x = std::log(left.rho / rho);
    const double em = std::exp(-gas.eps * x);
    const double half =
        0.5 * em *
        (curve_detail::A_of_x(gas, x) + curve_detail::B_of_x(gas, x));
    return left.u - rho_pow_eps(gas, left.rho) * half;
  }
  throw std::invalid_argument("shock family must be 1 or 2");
}

double shock_speed(const GasContext& /*gas*/, const State& left,
                   const State& right) {
  if (right.rho == left.rho)
    throw std::domain_error("shock speed needs a genuine density jump");
  return (right.rho * right.u - left.rho * left.u) / (right.rho - left.rho);
}

namespace {

/// h(x)/(e^x - 1): both factors vanish linearly at x = 0, so the ratio tends
/// smoothly to sqrt(gamma) and stays fully accurate for any x >= 0.
double speed_factor(const GasContext& gas, double x) {
  if (x <= 0.0) return gas.sqrt_gamma;
  const double h = x < curve_detail::series_switch_x
                       ? gas.sqrt_gamma * x *
                             std::sqrt(-std::expm1(-x) / x *
                                       (std::expm1(gas.gamma * x) /
                                        (gas.gamma * x)))
                       : std::sqrt(-std::expm1(-x) * std::expm1(gas.gamma * x));
  return h / std::expm1(x);
}

}  // namespace

double shock_speed(const GasContext& gas, int family, const State& left,
                   const State& right) {
  if (family == 1) {
    if (right.rho < left.rho)
      throw std::domain_error("1-shock requires density increase");
    const double x = std::log(right.rho / left.rho);
    return right.u - rho_pow_eps(gas, left.rho) * speed_factor(gas, x);
  }
  if (family == 2) {
    if (right.rho > left.rho)
      throw std::domain_error("2-shock requires density decrease");
    const double x = std::log(left.rho / right.rho);
    return left.u + rho_pow_eps(gas, right.rho) * speed_factor(gas, x);
  }
  throw std::invalid_argument("shock family must be 1 or 2");
}

double rarefaction_u(const GasContext& gas, int family, const State& left,
                     double rho) {
  if (family != 1 && family != 2)
    throw std::invalid_argument("rarefaction family must be 1 or 2");
  if (family == 1 && rho > left.rho)
    throw std::domain_error("1-rarefaction requires density decrease");
  if (family == 2 && rho < left.rho)
    throw std::domain_error("2-rarefaction requires density increase");
  const double sign = family == 1 ? -1.0 : 1.0;
  const double diff = rho_pow_eps(gas, left.rho) *
                      std::expm1(gas.eps * std::log(rho / left.rho));
  return left.u + sign * gas.sqrt_gamma * diff / gas.eps;
}

double g1(const GasContext& gas, double a, double rho_base) {
  if (a < 0.0) throw std::domain_error("shock strength must be >= 0");
  if (a == 0.0) return 0.0;
  const double pe = rho_pow_eps(gas, rho_base);
  const double x = curve_detail::invert_primary_1(gas, a / pe);
  return pe * curve_detail::B_of_x(gas, x);
}

double g2(const GasContext& gas, double a, double rho_base) {
  if (a < 0.0) throw std::domain_error("shock strength must be >= 0");
  if (a == 0.0) return 0.0;
  const double pe = rho_pow_eps(gas, rho_base);
  const double x = curve_detail::invert_primary_2(gas, a / pe);
  return pe * std::exp(-gas.eps * x) * curve_detail::B_of_x(gas, x);
}

CurveDerivatives g1_with_derivatives(const GasContext& gas, double a,
                                     double rho_base) {
  if (a < 0.0) throw std::domain_error("shock strength must be >= 0");
  const double pe = rho_pow_eps(gas, rho_base);
  if (a == 0.0) return {0.0, 0.0, 0.0};
  const double x = curve_detail::invert_primary_1(gas, a / pe);
  const double Av = curve_detail::A_dx(gas, x);
  const double Bv = curve_detail::B_dx(gas, x);
  const double Axx = curve_detail::A_dxx(gas, x);
  const double Bxx = curve_detail::B_dxx(gas, x);
  CurveDerivatives out;
  out.value = pe * curve_detail::B_of_x(gas, x);
  out.d1 = Bv / Av;
  out.d2 = (Bxx * Av - Bv * Axx) / (pe * Av * Av * Av);
  return out;
}

CurveDerivatives g2_with_derivatives(const GasContext& gas, double a,
                                     double rho_base) {
  if (a < 0.0) throw std::domain_error("shock strength must be >= 0");
  const double pe = rho_pow_eps(gas, rho_base);
  if (a == 0.0) return {0.0, 0.0, 0.0};
  const double x = curve_detail::invert_primary_2(gas, a / pe);
  const double e = gas.eps;
  const double em = std::exp(-e * x);
  const double Aval = curve_detail::A_of_x(gas, x);
  const double Bval = curve_detail::B_of_x(gas, x);
  const double A1 = curve_detail::A_dx(gas, x);
  const double B1 = curve_detail::B_dx(gas, x);
  const double A2 = curve_detail::A_dxx(gas, x);
  const double B2 = curve_detail::B_dxx(gas, x);
  const double At1 = em * (A1 - e * Aval);
  const double Bt1 = em * (B1 - e * Bval);
  const double At2 = em * (A2 - 2.0 * e * A1 + e * e * Aval);
  const double Bt2 = em * (B2 - 2.0 * e * B1 + e * e * Bval);
  CurveDerivatives out;
  out.value = pe * em * Bval;
  out.d1 = Bt1 / At1;
  out.d2 = (Bt2 * At1 - Bt1 * At2) / (pe * At1 * At1 * At1);
  return out;
}

State inverse_shock_curve(const GasContext& gas, int family, const State& base,
                          double d) {
  if (family != 1 && family != 2)
    throw std::invalid_argument("shock family must be 1 or 2");
  if (d < 0.0) throw std::domain_error("curve parameter must be >= 0");
  if (d == 0.0) return base;
  const double pe = rho_pow_eps(gas, base.rho);
  const Invariants inv0 = to_invariants(gas, base);
  State out;
  if (family == 2) {
    // Left states whose forward 2-shock lands on `base`: measured from the
    // downstream density the drops take the plain (A, B) form.
    const double x = curve_detail::invert_primary_1(gas, d / pe);
    out.rho = base.rho * std::exp(x);
    const double r = inv0.r + pe * curve_detail::B_of_x(gas, x);
    const double s = inv0.s + d;
    out.u = 0.5 * (r + s);
  } else {
    // Left states whose forward 1-shock lands on `base`: conjugated drops.
    const double x = curve_detail::invert_primary_2(gas, d / pe);
    const double em = std::exp(-gas.eps * x);
    out.rho = base.rho * std::exp(-x);
    const double r = inv0.r + d;
    const double s = inv0.s + pe * em * curve_detail::B_of_x(gas, x);
    out.u = 0.5 * (r + s);
  }
  return out;
}

}  // namespace ep1d
