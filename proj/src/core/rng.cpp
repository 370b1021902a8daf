#include "core/rng.hpp"

#include <cmath>

namespace cddm {

double NoiseStream::gaussian() {
  if (has_cache_) {
    has_cache_ = false;
    return cache_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cache_ = v * f;
  has_cache_ = true;
  return u * f;
}

}  // namespace cddm
