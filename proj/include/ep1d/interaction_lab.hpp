#ifndef EP1D_INTERACTION_LAB_HPP
#define EP1D_INTERACTION_LAB_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ep1d/gas.hpp"

namespace ep1d {

/// Randomized verification batches for the wave-interaction estimates.  All
/// sampling is deterministic: case k derives its generator from (seed, k), so
/// results are independent of the worker count.
struct LabConfig {
  double gamma = 1.4;
  double rho_min = 0.2;   ///< sampled density range (strictly positive)
  double rho_max = 5.0;
  double u_span = 2.0;    ///< velocities sampled from [-u_span, u_span]
  std::size_t cases = 100000;          ///< accepted cases per check
  std::size_t quota = 5000;            ///< accepted cases per target bucket
  std::size_t empty_attempts = 1000000;  ///< draws when showing emptiness
  std::uint64_t seed = 20260814;
  int workers = 1;
  std::string witness_dir;  ///< failures dumped as JSON here when non-empty
  std::size_t max_witnesses = 16;
};

struct CheckResult {
  std::string name;
  std::size_t cases = 0;      ///< accepted (in-hypothesis) samples
  std::size_t failures = 0;
  double worst_violation = 0.0;  ///< max of (lhs - rhs)/scale over cases
  double min_margin = 0.0;       ///< min of rhs - lhs (tightness indicator)
  std::map<std::string, std::size_t> tally;   ///< per-bucket accepted counts
  std::map<std::string, std::size_t> failed;  ///< per-bucket failure counts
  std::vector<std::string> witness_files;
  bool pass() const { return failures == 0; }
};

/// Shifting the left state up along a forward 2-curve by d > 0 from a
/// two-shock configuration keeps both reflected strengths within +d.
CheckResult check_left_shift(const LabConfig& lab);

/// Shifting the right state up along a backward 1-curve by d > 0, when the
/// shifted pair still solves with two shocks, keeps both strengths within +d.
CheckResult check_right_shift(const LabConfig& lab);

/// Full case table of the two-sided comparison: every reachable (before,
/// after) region pair obeys its strength inequality / signed equality; the
/// two unreachable pairs and seven unreachable sub-cases stay empty under
/// exhaustive random search.
CheckResult check_case_table(const LabConfig& lab);

/// Monotonicity of the reflected-strength function in the base density and
/// the uniform bound  g(a, rho') - g(a, rho) <= C*eps*(s - s')*a  on shift
/// pairs; reports the smallest admissible C and its stability under sample
/// doubling.
struct InteractionConstant {
  CheckResult monotonicity;
  double C_hat = 0.0;       ///< measured constant (full sample)
  double C_hat_half = 0.0;  ///< same from half the sample (stability probe)
};
InteractionConstant check_interaction_constant(const LabConfig& lab);

/// Deterministic sweep used at scheme startup to size the functional weight.
double estimate_interaction_constant(const GasContext& gas, double rho_min,
                                     double rho_max);

/// Convexity-type facts about the reflected-strength curves: value/slope at
/// zero, positivity, monotone increasing, convexity (second differences),
/// slope below one on the sampled range, and the exact reflection identity
/// relating the backward and forward curves.
CheckResult check_curve_properties(const LabConfig& lab);

/// Local functional decay across a synthetic interaction diamond: outgoing
/// F does not exceed incoming F plus twice the total shift magnitude; with
/// no shifts it does not increase.  Cases are filtered to K*F(in) <= 1/4.
CheckResult check_diamond(const LabConfig& lab, double K_coef);

/// Runs every batch above and returns the results in a fixed order.
std::vector<CheckResult> run_all_checks(const LabConfig& lab);

}  // namespace ep1d

#endif
