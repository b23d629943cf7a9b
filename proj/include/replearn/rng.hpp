#pragma once

#include <cstdint>

namespace replearn {

/// SplitMix64 generator (Steele, Lea & Flood 2014).  Small, fast, and fully
/// specified, so streams are identical across platforms.  One independent
/// stream per simulated path is derived from (seed, path_id).
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// Stream constructor: mixes the path id into the seed before use.
    SplitMix64(std::uint64_t seed, std::uint64_t path_id)
        : state_(mix(seed + 0x9E3779B97F4A7C15ULL * (path_id + 1))) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double prob) { return next_double() < prob; }

  private:
    static std::uint64_t mix(std::uint64_t x) {
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t state_;
};

}  // namespace replearn
