// Seeded deterministic RNG. Every operation that samples takes one of these
// explicitly; there is no global randomness. Experiments derive one substream
// per shot index so that results are independent of shard partitioning and
// of how many draws an individual shot consumes.

#pragma once

#include <cstdint>

namespace epistate {

namespace detail {
// Fixed 64-bit avalanche (splitmix64 finalizer).
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class SeededRng {
  public:
    explicit SeededRng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Fair boolean, one draw.
    bool next_bool() { return next_unit() < 0.5; }

  private:
    uint64_t state_;
};

// Substream `index` of a master seed. Used for per-shot streams and for
// auxiliary streams (bootstrap resampling, test corpora).
inline SeededRng derive_rng(uint64_t seed, uint64_t index) {
    return SeededRng(detail::mix64(seed ^ detail::mix64(index + 0x632BE59BD9B4E019ULL)));
}

}  // namespace epistate
