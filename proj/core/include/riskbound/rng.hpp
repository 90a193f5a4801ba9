#pragma once

#include <cstdint>

namespace riskbound {

// 64-bit finalizer used for all seed derivation (splitmix64 mixing step).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based sub-seed: stream `index` of master `seed`. Parallel and
// serial evaluation of the same (seed, index) pair see identical streams.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64((index + 1) * 0x9E3779B97F4A7C15ULL));
}

// SplitMix64 generator. Small state, full 2^64 period, and cheap to seed,
// which is what the per-trial substream contract needs.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        return mix64(z);
    }

    // Uniform double in the open interval (0, 1): (k + 0.5) * 2^-53 with k
    // the top 53 bits. Never returns 0 or 1, so inverse-CDF transforms are
    // safe without special cases.
    double next_unit() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace riskbound
