#pragma once

#include <cstdint>

namespace cddm {

// splitmix64 step; also used to derive stream states from (seed, id) pairs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** with splitmix-derived state. Small, fast, and fully owned by
// this library so streams are identical across platforms and build modes.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// Per-trial noise stream. Streams are keyed by (seed, stream_id), so ensembles
// are reproducible and independent of trial execution order.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream_id)
      : eng_(mix(seed, stream_id)), cache_(0.0), has_cache_(false) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(eng_.next() >> 11) * 0x1.0p-53; }

  // standard normal via Marsaglia polar; one value cached across calls
  double gaussian();

  void fill_gaussian(double* dst, int n) {
    for (int i = 0; i < n; ++i) dst[i] = gaussian();
  }

 private:
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL + (stream_id << 1));
    std::uint64_t a = splitmix64(sm);
    std::uint64_t b = splitmix64(sm);
    return a ^ (b + stream_id);
  }

  Xoshiro256 eng_;
  double cache_;
  bool has_cache_;
};

}  // namespace cddm
