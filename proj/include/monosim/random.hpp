#pragma once

#include <cstdint>
#include <random>

namespace monosim {

/// Platform-independent uniform draws: std::mt19937_64 (fully specified by
/// the standard) with the top 53 bits mapped to [0, 1). The standard
/// distributions are avoided because their algorithms are unspecified.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [-half_width, +half_width).
    double symmetric(double half_width) { return half_width * (2.0 * unit() - 1.0); }

private:
    std::mt19937_64 engine_;
};

}  // namespace monosim
