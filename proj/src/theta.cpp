#include "ep1d/theta.hpp"

#include <random>
#include <string>

#include "ep1d/errors.hpp"

namespace ep1d {

ThetaSequence::ThetaSequence(const ThetaConfig& cfg) : cfg_(cfg) {
  if (cfg_.kind == ThetaConfig::Kind::list) {
    for (double v : cfg_.values) {
      if (!(v >= -1.0 && v <= 1.0)) {
        throw ConfigError("theta list entry outside [-1, 1]: " +
                          std::to_string(v));
      }
    }
  }
}

double ThetaSequence::van_der_corput(std::uint64_t n) {
  // Reverse the binary digits of n across the radix point.
  double v = 0.0;
  double base = 0.5;
  while (n != 0) {
    if (n & 1u) v += base;
    base *= 0.5;
    n >>= 1u;
  }
  return v;
}

double ThetaSequence::value(std::size_t n) const {
  switch (cfg_.kind) {
    case ThetaConfig::Kind::van_der_corput:
      // Index from 1 so the sequence starts 0, -1/2, 1/2, -3/4, 1/4, ...
      // and never touches the cell-boundary value -1.
      return 2.0 * van_der_corput(static_cast<std::uint64_t>(n) + 1u) - 1.0;
    case ThetaConfig::Kind::list: {
      if (cfg_.values.empty())
        throw ConfigError("theta list is empty");
      return cfg_.values[n % cfg_.values.size()];
    }
    case ThetaConfig::Kind::prng: {
      // Values are cached so value(n) is a pure function of (seed, n) and
      // any access order replays the same draw sequence.
      if (n >= cache_.size()) {
        std::mt19937_64 rng(cfg_.seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (std::size_t k = 0; k <= n; ++k) {
          const double v = dist(rng);
          if (k >= cache_.size()) cache_.push_back(v);
        }
      }
      return cache_[n];
    }
  }
  throw ConfigError("unknown theta sequence kind");
}

}  // namespace ep1d
