#pragma once

#include <cmath>
#include <cstdint>

namespace dusff {

// Counter-based keyed random stream (splitmix64 over a per-stream key).
// Streams keyed by (seed, stream_id) are independent and never share state,
// so parallel sampling is bitwise reproducible regardless of scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    state_ = mix(seed ^ mix(0x9E3779B97F4A7C15ull * (stream_id + 1)));
  }

  explicit RngStream(std::uint64_t seed) : RngStream(seed, 0) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller (self-contained, so results do not depend
  // on the standard library's distribution implementation).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double c = std::cos(6.283185307179586476925286766559 * u2);
    double s = std::sin(6.283185307179586476925286766559 * u2);
    spare_ = r * s;
    have_spare_ = true;
    return r * c;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dusff
