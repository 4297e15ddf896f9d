#ifndef FBPAUG_RNG_HPP
#define FBPAUG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fbpaug {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream for one work item.
///
/// Engine: std::mt19937_64 seeded with splitmix64(splitmix64(master) + index).
/// Uniforms use the top 53 bits of one engine draw. Normals use one
/// Box-Muller draw per call (cosine branch, two uniforms), so the sequence is
/// identical on every platform and never depends on library distributions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t index = 0)
      : engine_(splitmix64(splitmix64(master_seed) + index)) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    const int k = lo + static_cast<int>(std::floor(uniform() * span));
    return k > hi ? hi : k;
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal(double mean = 0.0, double stddev = 1.0) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fbpaug

#endif  // FBPAUG_RNG_HPP
