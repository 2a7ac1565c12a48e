#ifndef G2LAB_RNG_HPP
#define G2LAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <span>

namespace g2lab {

// Counter-based random streams: the state for (seed, stream, counter) is a
// pure hash of the triple, so trial i's draws never depend on how many draws
// trial i-1 consumed or on which thread produced it. Mixing is SplitMix64
// (Steele/Lea/Flood finalizer), which also serves as the per-draw generator.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter)
      : state_(derive(seed, stream, counter)) {}

  explicit RandomStream(std::uint64_t seed) : RandomStream(seed, 0, 0) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0, n); n must be > 0. Modulo bias is < n/2^64, irrelevant
  // at the draw counts used here.
  std::uint64_t uniform_below(std::uint64_t n) { return next_u64() % n; }

  double exponential(double mean) {
    // -mean * log(1 - u); u in [0,1) keeps the argument in (0,1].
    return -mean * std::log1p(-uniform());
  }

  double normal(double mean, double sigma) {
    // Box-Muller, one deviate per call (the discarded sine branch keeps the
    // draw count per call fixed, which matters for counter reproducibility).
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(6.283185307179586476925286766559 * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Index into a discrete distribution given by cumulative weights ending
  // at ~1. Returns the last index if roundoff leaves the draw above the
  // final cumulative weight.
  std::size_t categorical(std::span<const double> cumulative) {
    const double u = uniform();
    for (std::size_t i = 0; i + 1 < cumulative.size(); ++i) {
      if (u < cumulative[i]) return i;
    }
    return cumulative.empty() ? 0 : cumulative.size() - 1;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
    std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ull);
    h = mix(h ^ (stream + 0xd1b54a32d192ed03ull));
    h = mix(h ^ (counter + 0x8cb92ba72f3d8dd7ull));
    return h;
  }

  std::uint64_t state_;
};

// Fixed stream tags so different consumers of one master seed never collide.
namespace streams {
inline constexpr std::uint64_t detection = 1;
inline constexpr std::uint64_t field_sampling = 2;
inline constexpr std::uint64_t scenario_sweep = 3;
inline constexpr std::uint64_t lhv_models = 4;
inline constexpr std::uint64_t counting = 5;
}  // namespace streams

}  // namespace g2lab

#endif
