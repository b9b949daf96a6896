#ifndef EP1D_THETA_HPP
#define EP1D_THETA_HPP

#include <cstdint>
#include <vector>

#include "ep1d/config.hpp"

namespace ep1d {

/// Deterministic sampling sequence theta_n in [-1, 1], one value per time
/// step.  The default is the base-2 van der Corput sequence rescaled from
/// [0, 1) to [-1, 1): theta_n = 2*vdc(n) - 1 with vdc(0) = 0, which is
/// equidistributed and gives reproducible runs without a seed.
class ThetaSequence {
 public:
  explicit ThetaSequence(const ThetaConfig& cfg);

  /// theta for step n (drawing layer n -> n+1); any order, any repetition.
  double value(std::size_t n) const;

  /// Base-2 radical inverse of n (van der Corput), in [0, 1).
  static double van_der_corput(std::uint64_t n);

 private:
  ThetaConfig cfg_;
  mutable std::vector<double> cache_;  ///< prng values, extended on demand
};

}  // namespace ep1d

#endif
