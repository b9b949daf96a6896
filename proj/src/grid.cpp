#include "ep1d/grid.hpp"

#include <cmath>

#include "ep1d/errors.hpp"

namespace ep1d {

State GridState::at(long i) const {
  if (i < -m) return far_minus;
  if (i > m) return far_plus;
  return cell_ref(i);
}

GridState discretize_initial(const RunConfig& cfg) {
  GridState g;
  g.n = 0;
  g.dx = cfg.dx;
  // Smallest odd K with K*dx >= L; oddness makes +-(L_grid + n*dx) land on a
  // cell edge of every layer, so the cone boundary never cuts a cell.
  long K = static_cast<long>(std::ceil(cfg.L / cfg.dx - 1e-9));
  if (K < 1) K = 1;
  if (K % 2 == 0) ++K;
  g.K = K;
  g.m = K + 1;  // layer 0 stores even centers |i| <= K + 1
  g.cells.resize(static_cast<std::size_t>(g.m) + 1);
  for (long i = -g.m; i <= g.m; i += 2) g.cell_ref(i) = cfg.initial(g.x_of(i));
  g.far_minus = cfg.initial.values.front();
  g.far_plus = cfg.initial.values.back();
  return g;
}

FineGrid make_fine_grid(const RunConfig& cfg, long K, long nsteps) {
  FineGrid f;
  f.dx = cfg.dx;
  f.half = K + nsteps + 2;  // covers every cell any layer can store
  const std::size_t count = static_cast<std::size_t>(2 * f.half);
  f.mu.resize(count);
  f.sigma.resize(count);
  for (long j = -f.half; j < f.half; ++j) {
    // Segment boundaries are grid-aligned, so the midpoint value is the exact
    // value of the profile on the whole interval.
    const double xm = (static_cast<double>(j) + 0.5) * cfg.dx;
    f.mu[static_cast<std::size_t>(j + f.half)] = cfg.mu(xm);
    f.sigma[static_cast<std::size_t>(j + f.half)] = cfg.sigma(xm);
  }
  return f;
}

}  // namespace ep1d
