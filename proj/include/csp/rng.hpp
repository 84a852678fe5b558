#pragma once

#include <cstdint>
#include <random>

namespace csp {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled draw helpers. std::uniform_*_distribution is
// implementation-defined, so the helpers below keep generated streams stable
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in (0, 1); never returns 0 so log/pow users stay finite.
  double next_canonical() {
    for (;;) {
      const double v = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (v > 0.0) return v;
    }
  }

  // Uniform index in [0, n).
  std::size_t next_index(std::size_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // rejection keeps it unbiased
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream for a substream id, so task sets can be
// generated in any order (or in parallel) without changing their content.
inline Rng make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = seed;
  (void)splitmix64(s);
  s ^= 0x6C62272E07BB0142ULL + a;
  (void)splitmix64(s);
  s ^= 0x27D4EB2F165667C5ULL + b;
  return Rng(splitmix64(s));
}

}  // namespace csp
