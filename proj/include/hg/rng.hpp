#ifndef HG_RNG_HPP
#define HG_RNG_HPP

#include <cstdint>

namespace hg {

// Counter-based generator: value(seed, k) = mix64(seed + (k+1) * GOLDEN)
// with the splitmix64 finalizer as mix64. Sample k of a stream depends only
// on (seed, k), so sample sets are reproducible across implementations and
// worker counts. Doubles take the top 53 bits.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  static std::uint64_t at(std::uint64_t seed, std::uint64_t k) {
    return mix64(seed + (k + 1) * 0x9E3779B97F4A7C15ull);
  }

  std::uint64_t next_u64() { return at(seed_, counter_++); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // Uniform index in [0, m).
  std::size_t pick(std::size_t m) {
    return static_cast<std::size_t>(next_u64() % m);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace hg

#endif
