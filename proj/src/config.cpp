#include "ep1d/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ep1d/errors.hpp"

namespace ep1d {

using nlohmann::json;

double PiecewiseConstant::operator()(double x) const {
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  return values[static_cast<std::size_t>(it - breaks.begin())];
}

double PiecewiseConstant::total_variation() const {
  double tv = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k)
    tv += std::abs(values[k] - values[k - 1]);
  return tv;
}

double PiecewiseConstant::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double PiecewiseConstant::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double PiecewiseConstant::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

State PiecewiseState::operator()(double x) const {
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  return values[static_cast<std::size_t>(it - breaks.begin())];
}

double PiecewiseLinear::operator()(double t) const {
  if (times.empty()) return constant;
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times.begin());
  const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
  return values[k - 1] + w * (values[k] - values[k - 1]);
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void require(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

double get_number(const json& j, const std::string& key, double fallback,
                  bool required = false) {
  if (!j.contains(key)) {
    if (required) fail("missing required key '" + key + "'");
    return fallback;
  }
  const json& v = j.at(key);
  require(v.is_number(), "'" + key + "' must be a number");
  const double x = v.get<double>();
  require(std::isfinite(x), "'" + key + "' must be finite");
  return x;
}

std::vector<double> get_array(const json& j, const std::string& key,
                              const std::string& where) {
  require(j.contains(key), where + " is missing '" + key + "'");
  const json& v = j.at(key);
  require(v.is_array(), where + "." + key + " must be an array");
  std::vector<double> out;
  for (const auto& item : v) {
    require(item.is_number(), where + "." + key + " entries must be numbers");
    const double x = item.get<double>();
    require(std::isfinite(x), where + "." + key + " entries must be finite");
    out.push_back(x);
  }
  return out;
}

void check_breaks(const std::vector<double>& breaks, double L, double dx,
                  const std::string& where) {
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    if (k > 0)
      require(breaks[k] > breaks[k - 1],
              where + ".breaks must be strictly increasing");
    require(std::abs(breaks[k]) <= L + 1e-12 * L,
            where + ".breaks must lie inside [-L, L]");
    // Grid alignment keeps the discretized coefficients exact: every segment
    // boundary must sit on a mesh point.
    const double q = breaks[k] / dx;
    require(std::abs(q - std::round(q)) <= 1e-9,
            where + ".breaks must be integer multiples of dx");
  }
}

PiecewiseConstant parse_piecewise(const json& j, const std::string& where) {
  require(j.is_object(), where + " must be an object {breaks, values}");
  PiecewiseConstant pc;
  pc.breaks = get_array(j, "breaks", where);
  pc.values = get_array(j, "values", where);
  require(pc.values.size() == pc.breaks.size() + 1,
          where + ".values must have exactly one more entry than breaks");
  return pc;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    fail(std::string("configuration is not valid JSON: ") + err.what());
  }
  require(j.is_object(), "configuration root must be an object");

  static const std::set<std::string> known = {
      "gamma",  "charge", "domain",      "initial", "sigma",  "mu",
      "psi_minus", "theta",  "diagnostics", "output",  "workers"};
  for (const auto& item : j.items())
    require(known.count(item.key()) != 0,
            "unknown configuration key '" + item.key() + "'");

  RunConfig cfg;
  cfg.gamma = get_number(j, "gamma", 0.0, /*required=*/true);
  require(cfg.gamma > 1.0 && cfg.gamma < 2.0,
          "gamma must lie strictly inside (1, 2)");

  if (j.contains("charge")) {
    const json& c = j.at("charge");
    require(c.is_object(), "'charge' must be an object");
    cfg.q = get_number(c, "q", cfg.q);
    cfg.m = get_number(c, "m", cfg.m);
    cfg.e = get_number(c, "e", cfg.e);
  }
  require(cfg.m > 0.0, "charge.m must be positive");
  require(cfg.e > 0.0, "charge.e must be positive");

  require(j.contains("domain"), "missing required key 'domain'");
  {
    const json& d = j.at("domain");
    require(d.is_object(), "'domain' must be an object");
    cfg.L = get_number(d, "L", 0.0, true);
    cfg.dx = get_number(d, "dx", 0.0, true);
    cfg.T = get_number(d, "T", 0.0, true);
    cfg.lambda = get_number(d, "lambda", cfg.lambda);
    cfg.cfl_safety = get_number(d, "cfl_safety", cfg.cfl_safety);
    require(cfg.L > 0.0, "domain.L must be positive");
    require(cfg.dx > 0.0 && cfg.dx <= cfg.L,
            "domain.dx must satisfy 0 < dx <= L");
    require(cfg.T > 0.0, "domain.T must be positive");
    require(cfg.cfl_safety >= 1.0, "domain.cfl_safety must be >= 1");
  }

  require(j.contains("initial"), "missing required key 'initial'");
  {
    const json& ini = j.at("initial");
    require(ini.is_object(), "'initial' must be an object {breaks, rho, u}");
    cfg.initial.breaks = get_array(ini, "breaks", "initial");
    const auto rho = get_array(ini, "rho", "initial");
    const auto u = get_array(ini, "u", "initial");
    require(rho.size() == cfg.initial.breaks.size() + 1 &&
                u.size() == rho.size(),
            "initial.rho and initial.u must have one more entry than breaks");
    for (std::size_t k = 0; k < rho.size(); ++k) {
      require(rho[k] > 0.0, "initial densities must be positive");
      cfg.initial.values.push_back({rho[k], u[k]});
    }
    check_breaks(cfg.initial.breaks, cfg.L, cfg.dx, "initial");
  }

  require(j.contains("sigma"), "missing required key 'sigma'");
  cfg.sigma = parse_piecewise(j.at("sigma"), "sigma");
  check_breaks(cfg.sigma.breaks, cfg.L, cfg.dx, "sigma");
  require(cfg.sigma.min_value() >= 0.0, "sigma values must be >= 0");

  require(j.contains("mu"), "missing required key 'mu'");
  cfg.mu = parse_piecewise(j.at("mu"), "mu");
  check_breaks(cfg.mu.breaks, cfg.L, cfg.dx, "mu");
  require(cfg.mu.min_value() >= 0.0, "mu values must be >= 0");
  require(cfg.mu.front_value() > 0.0 && cfg.mu.back_value() > 0.0,
          "far-field mu values must be positive");

  // Charge neutrality at infinity: the initial density must match the
  // background outside the data interval, or the initial imbalance has
  // unbounded support and the potential is not well defined.
  require(cfg.initial.values.front().rho == cfg.mu.front_value(),
          "initial.rho on the far left must equal mu there");
  require(cfg.initial.values.back().rho == cfg.mu.back_value(),
          "initial.rho on the far right must equal mu there");

  if (j.contains("psi_minus")) {
    const json& p = j.at("psi_minus");
    if (p.is_number()) {
      cfg.psi_minus.constant = p.get<double>();
    } else {
      require(p.is_object(), "'psi_minus' must be a number or {times, values}");
      cfg.psi_minus.times = get_array(p, "times", "psi_minus");
      cfg.psi_minus.values = get_array(p, "values", "psi_minus");
      require(cfg.psi_minus.times.size() == cfg.psi_minus.values.size() &&
                  !cfg.psi_minus.times.empty(),
              "psi_minus.times and psi_minus.values must match and be "
              "non-empty");
      for (std::size_t k = 1; k < cfg.psi_minus.times.size(); ++k)
        require(cfg.psi_minus.times[k] > cfg.psi_minus.times[k - 1],
                "psi_minus.times must be strictly increasing");
    }
  }

  if (j.contains("theta")) {
    const json& t = j.at("theta");
    require(t.is_object(), "'theta' must be an object");
    const std::string kind = t.value("kind", "van_der_corput");
    if (kind == "van_der_corput") {
      cfg.theta.kind = ThetaConfig::Kind::van_der_corput;
    } else if (kind == "prng") {
      cfg.theta.kind = ThetaConfig::Kind::prng;
      cfg.theta.seed = static_cast<std::uint64_t>(
          get_number(t, "seed", 0.0, /*required=*/true));
    } else if (kind == "list") {
      cfg.theta.kind = ThetaConfig::Kind::list;
      cfg.theta.values = get_array(t, "values", "theta");
      require(!cfg.theta.values.empty(), "theta.values must be non-empty");
      for (double v : cfg.theta.values)
        require(v >= -1.0 && v <= 1.0, "theta.values must lie in [-1, 1]");
    } else {
      fail("theta.kind must be van_der_corput, prng, or list");
    }
  }

  if (j.contains("diagnostics")) {
    const json& d = j.at("diagnostics");
    require(d.is_object(), "'diagnostics' must be an object");
    cfg.K_override = get_number(d, "K_override", cfg.K_override);
    if (d.contains("strict_bounds")) {
      require(d.at("strict_bounds").is_boolean(),
              "diagnostics.strict_bounds must be a boolean");
      cfg.strict_bounds = d.at("strict_bounds").get<bool>();
    }
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    require(o.is_object(), "'output' must be an object");
    if (o.contains("dir")) cfg.output.dir = o.at("dir").get<std::string>();
    if (o.contains("snapshot_prefix"))
      cfg.output.snapshot_prefix = o.at("snapshot_prefix").get<std::string>();
    if (o.contains("diagnostics_file"))
      cfg.output.diagnostics_file = o.at("diagnostics_file").get<std::string>();
    if (o.contains("snapshot_times"))
      cfg.output.snapshot_times = get_array(o, "snapshot_times", "output");
    for (double t : cfg.output.snapshot_times)
      require(t >= 0.0, "output.snapshot_times must be >= 0");
  }

  if (j.contains("workers")) {
    const double w = get_number(j, "workers", 1.0);
    require(w >= 1.0 && w == std::floor(w) && w <= 1024.0,
            "workers must be a positive integer");
    cfg.workers = static_cast<int>(w);
  }

  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open configuration file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ep1d
