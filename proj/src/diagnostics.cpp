#include "ep1d/diagnostics.hpp"

#include <cmath>

namespace ep1d {

MeshCurve build_mesh_curve(const std::vector<WaveFan>& fans,
                           const std::vector<double>& xs) {
  MeshCurve curve;
  curve.waves.reserve(2 * fans.size());
  for (std::size_t k = 0; k < fans.size(); ++k) {
    const WaveFan& fan = fans[k];
    curve.waves.push_back(
        {xs[k], 1, fan.wave1.kind, fan.wave1.strength});
    curve.waves.push_back(
        {xs[k], 2, fan.wave2.kind, fan.wave2.strength});
  }
  return curve;
}

double glimm_V(const MeshCurve& curve) {
  double v = 0.0;
  for (const MeshWave& w : curve.waves)
    if (w.kind == WaveKind::shock) v += w.strength;
  return v;
}

double glimm_Q(const MeshCurve& curve) {
  // Same-family shock pairs always approach; a 2-shock approaches every
  // 1-shock strictly to its right (same-interface pairs depart).  Suffix
  // sums give the cross-family part in one right-to-left sweep; interfaces
  // are identified by equal positions of consecutive waves.
  double v1 = 0.0, v2 = 0.0, sq1 = 0.0, sq2 = 0.0;
  for (const MeshWave& w : curve.waves) {
    if (w.kind != WaveKind::shock) continue;
    if (w.family == 1) {
      v1 += w.strength;
      sq1 += w.strength * w.strength;
    } else {
      v2 += w.strength;
      sq2 += w.strength * w.strength;
    }
  }
  double cross = 0.0;
  double beta_suffix = 0.0;  // 1-shock mass strictly right of the cursor
  std::size_t i = curve.waves.size();
  while (i > 0) {
    // Consume one interface: waves sharing the same position.
    std::size_t lo = i;
    while (lo > 0 && curve.waves[lo - 1].x == curve.waves[i - 1].x) --lo;
    double beta_here = 0.0;
    for (std::size_t k = lo; k < i; ++k) {
      const MeshWave& w = curve.waves[k];
      if (w.kind != WaveKind::shock) continue;
      if (w.family == 1) {
        beta_here += w.strength;
      } else {
        cross += w.strength * beta_suffix;
      }
    }
    beta_suffix += beta_here;
    i = lo;
  }
  return 0.5 * (v1 * v1 - sq1) + 0.5 * (v2 * v2 - sq2) + cross;
}

double glimm_F(const MeshCurve& curve, double K_coef) {
  return glimm_V(curve) + K_coef * glimm_Q(curve);
}

double total_variation(const GasContext& gas, const GridState& grid,
                       int select) {
  auto value = [&](const State& st) {
    switch (select) {
      case 0:
        return st.u;
      case 1:
        return to_invariants(gas, st).r;
      case 2:
        return to_invariants(gas, st).s;
      default:
        return st.rho;
    }
  };
  double prev = value(grid.far_minus);
  double tv = 0.0;
  for (long i = -grid.m; i <= grid.m; i += 2) {
    const double v = value(grid.cell_ref(i));
    tv += std::abs(v - prev);
    prev = v;
  }
  tv += std::abs(value(grid.far_plus) - prev);
  return tv;
}

GrowthCoefficients growth_coefficients(double sigma_max, double sigma_tv,
                                       double C_T, double Cprime_T,
                                       double psi_max_abs, double psi_tv,
                                       double q_over_m, double lambda,
                                       double L1, double dt) {
  GrowthCoefficients g;
  const double qm = std::abs(q_over_m);
  g.A = 32.0 * sigma_max;
  g.B = 8.0 * (C_T + Cprime_T) * sigma_max +
        8.0 * qm * (psi_max_abs * sigma_max * dt + psi_max_abs);
  const double arg = g.A * lambda * L1;
  const double growth = std::exp(arg);
  // (e^{A lambda L1} - 1)/A, continuous through A = 0.
  const double ramp = g.A > 0.0 ? std::expm1(arg) / g.A : lambda * L1;
  g.A1 = 4.0 * growth * sigma_tv + 16.0 * sigma_max;
  g.B1 = 4.0 * C_T * sigma_tv + 4.0 * g.B * ramp * sigma_tv +
         4.0 * Cprime_T * sigma_max + 4.0 * qm * psi_max_abs * sigma_tv * dt +
         4.0 * qm * psi_tv;
  return g;
}

}  // namespace ep1d
