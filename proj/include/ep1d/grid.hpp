#ifndef EP1D_GRID_HPP
#define EP1D_GRID_HPP

#include <cstddef>
#include <vector>

#include "ep1d/config.hpp"
#include "ep1d/gas.hpp"

namespace ep1d {

/// Staggered-cell state at one time layer.  Layer n stores cell averages at
/// centers x_i = i*dx for all i with i == n (mod 2) and |i| <= m, where
/// m = K + n + 1 and K = L_grid/dx is odd.  Cells outside the stored span are
/// implicitly the constant far-field states of the current layer, so the data
/// agrees with the far-field recursion outside the cone |x| < L_grid + n*dx.
struct GridState {
  long n = 0;          ///< time layer index
  long K = 0;          ///< L_grid / dx (odd by construction)
  long m = 0;          ///< stored centers satisfy |i| <= m, i == n (mod 2)
  double dx = 0.0;
  std::vector<State> cells;  ///< cells[(i + m) / 2]
  State far_minus;     ///< state on x < -(L_grid + n*dx)
  State far_plus;      ///< state on x > +(L_grid + n*dx)

  double L_grid() const { return dx * static_cast<double>(K); }
  double x_of(long i) const { return dx * static_cast<double>(i); }
  bool stores(long i) const { return i >= -m && i <= m && ((i - n) % 2) == 0; }
  /// State of cell i (parity n); centers beyond the span yield far values.
  State at(long i) const;
  State& cell_ref(long i) { return cells[static_cast<std::size_t>((i + m) / 2)]; }
  const State& cell_ref(long i) const {
    return cells[static_cast<std::size_t>((i + m) / 2)];
  }
};

/// dx-resolution samples of the stationary coefficients.  Interval j covers
/// (x_j, x_{j+1}); index j runs over [-half, half-1], stored at j + half.
/// Values are the profile sampled at the interval midpoint, which is exact
/// for breakpoints aligned to the grid (enforced at configuration time).
struct FineGrid {
  long half = 0;  ///< intervals j in [-half, half-1]
  double dx = 0.0;
  std::vector<double> mu;
  std::vector<double> sigma;

  double mu_at(long j) const { return mu[static_cast<std::size_t>(j + half)]; }
  double sigma_at(long j) const {
    return sigma[static_cast<std::size_t>(j + half)];
  }
  /// Layer-n density of the interval (x_j, x_{j+1}): the staggered cell whose
  /// center has parity n and contains the interval.
  static long cell_of_interval(long j, long n) {
    return ((j % 2 + 2) % 2 == (n % 2 + 2) % 2) ? j : j + 1;
  }
};

/// Chooses K = smallest odd integer with K*dx >= L and builds both the layer-0
/// grid (sampling the initial profile at cell centers) and the fine grid
/// (sized to cover [-L_grid - nsteps*dx, L_grid + nsteps*dx]).
GridState discretize_initial(const RunConfig& cfg);
FineGrid make_fine_grid(const RunConfig& cfg, long K, long nsteps);

}  // namespace ep1d

#endif
