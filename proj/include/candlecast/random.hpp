#pragma once

#include <cstdint>
#include <random>

namespace candlecast {

/// Seedable generator with a fully specified algorithm: 64-bit Mersenne
/// Twister (std::mt19937_64) for the bit stream, 53-bit mantissa fill for
/// uniforms and the Box-Muller transform for normals. Unlike the
/// std::*_distribution adaptors, every step here is defined independently of
/// the standard library vendor, so other implementations can reproduce it.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (lo, hi].
    double uniform_left_open(double lo, double hi) { return lo + (hi - lo) * (1.0 - uniform()); }

    /// Standard normal.
    double normal();

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace candlecast
