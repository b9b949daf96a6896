#ifndef EP1D_CONFIG_HPP
#define EP1D_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ep1d/gas.hpp"

namespace ep1d {

/// Piecewise-constant scalar profile: values[k] on [breaks[k-1], breaks[k]),
/// values.front() on (-inf, breaks[0]), values.back() on [breaks.back(), inf).
/// Left-closed sampling keeps cell sampling at breakpoints deterministic.
struct PiecewiseConstant {
  std::vector<double> breaks;  ///< strictly increasing; may be empty
  std::vector<double> values;  ///< size breaks.size() + 1

  double operator()(double x) const;
  double front_value() const { return values.front(); }
  double back_value() const { return values.back(); }
  double total_variation() const;
  double max_abs() const;
  double min_value() const;
  double max_value() const;
};

/// Piecewise-constant (rho, u) profile with shared breakpoints.
struct PiecewiseState {
  std::vector<double> breaks;
  std::vector<State> values;  ///< size breaks.size() + 1

  State operator()(double x) const;
};

/// Continuous piecewise-linear curve of t (used for the left far-field
/// potential trace); constant extrapolation outside [times.front(),
/// times.back()].  Empty times means identically `constant`.
struct PiecewiseLinear {
  std::vector<double> times;   ///< strictly increasing
  std::vector<double> values;  ///< same size as times
  double constant = 0.0;

  double operator()(double t) const;
};

struct ThetaConfig {
  enum class Kind { van_der_corput, prng, list };
  Kind kind = Kind::van_der_corput;
  std::uint64_t seed = 0;       ///< prng only
  std::vector<double> values;   ///< list only, each in [-1, 1]
};

struct OutputConfig {
  std::vector<double> snapshot_times;  ///< snapped to the nearest t_n
  std::string dir = ".";
  std::string snapshot_prefix = "snapshot";
  std::string diagnostics_file = "diagnostics.txt";
};

struct RunConfig {
  double gamma = 1.1;
  double q = 1.0, m = 1.0, e = 1.0;

  double L = 1.0;       ///< far-field radius of the data (snapped up to odd K*dx)
  double dx = 0.01;
  double T = 1.0;
  double lambda = 0.0;  ///< dt/dx; <= 0 selects the automatic estimate
  double cfl_safety = 2.0;  ///< inflation factor on the initial speed estimate

  PiecewiseState initial;     ///< (rho0, u0)
  PiecewiseConstant sigma;    ///< relaxation coefficient, >= 0
  PiecewiseConstant mu;       ///< background density, >= 0, far values > 0
  PiecewiseLinear psi_minus;  ///< left far-field potential trace

  ThetaConfig theta;

  double K_override = 0.0;    ///< > 0 replaces the measured functional weight
  bool strict_bounds = false; ///< abort (exit 5) on monitored bound violation
  int workers = 1;

  OutputConfig output;
};

/// Parses the structured plain-text (JSON) configuration.  Every violated
/// hypothesis is reported by name in the ConfigError message.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

}  // namespace ep1d

#endif
