#ifndef EP1D_ERRORS_HPP
#define EP1D_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ep1d {

/// Invalid or inconsistent run configuration (bad gamma, malformed segments,
/// violated far-field hypotheses, ...).  CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A state reached the vacuum boundary: the two Riemann invariants satisfy
/// s - r <= -2*sqrt(gamma)/eps (up to guard tolerance), so no positive
/// density corresponds to them.  CLI exit code 4.
struct VacuumError : std::runtime_error {
  explicit VacuumError(const std::string& what) : std::runtime_error(what) {}
};

/// Wave speeds overran the mesh ratio (lambda * max|speed| >= 1), or the mass
/// corrector went negative, which the positivity argument ties to the mesh
/// ratio bound.  CLI exit code 3.
struct CflError : std::runtime_error {
  explicit CflError(const std::string& what) : std::runtime_error(what) {}
};

/// A monitored a-priori bound failed while abort-on-violation was enabled.
/// CLI exit code 5.
struct BoundError : std::runtime_error {
  explicit BoundError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ep1d

#endif
