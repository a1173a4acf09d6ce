#pragma once

// Shared helpers for the unit tests: random data and brute-force oracles
// that do not touch the library's FFT path.

#include "monosim/random.hpp"
#include "monosim/signal.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace testing {

inline monosim::StackedTrajectory random_trajectory(monosim::UniformSource& rng, std::size_t channels, std::size_t n,
                                                    double h, double amplitude = 1.0) {
    monosim::StackedTrajectory z(channels, n, h);
    for (auto& v : z.data()) v = rng.symmetric(amplitude);
    return z;
}

inline monosim::PeriodicSignal random_signal(monosim::UniformSource& rng, std::size_t n, double h) {
    std::vector<double> s(n);
    for (auto& v : s) v = rng.symmetric(1.0);
    return {std::move(s), h};
}

/// O(N^2) forward DFT, X[k] = sum_t x[t] exp(-2 pi i k t / N).
inline std::vector<std::complex<double>> direct_dft(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double theta = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(theta), std::sin(theta));
        }
        out[k] = acc;
    }
    return out;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

}  // namespace testing
