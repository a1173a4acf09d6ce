#pragma once

// Difference-of-monotone Douglas-Rachford iteration for
//   S(x) + M1(x) - M2(x) = 0
// with S the lossless operator (resolvent in the frequency domain), M1 the
// dissipative resistive part (resolvent in the time domain) and M2 the
// active part (evaluated forward):
//
//   x+ = J_{aS}(z)
//   z+ = z - x+ + J_{aM1}(2 x+ - z + a M2(x+))

#include "monosim/lossless.hpp"
#include "monosim/resistive.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace monosim {

struct Problem {
    LosslessOperator lossless;
    MixedMonotoneResistive resistive;
    std::size_t num_samples = 0;
    double sample_step = 0.0;
    /// Smallest eigenvalue of M2, attached by the builders.
    std::optional<double> m2_min_eigenvalue;

    [[nodiscard]] std::size_t channels() const noexcept { return lossless.channels(); }
    [[nodiscard]] double period() const noexcept { return sample_step * static_cast<double>(num_samples); }

    void validate() const;
};

struct SeededUniform {
    std::uint64_t seed = 0;
    double amplitude = 1.0;
};

/// Voltage channels get amplitude * sin(2 pi t / T), current channels the
/// same wave advanced by a quarter period.
struct SingleHarmonic {
    double amplitude = 1.0;
};

struct GivenInit {
    StackedTrajectory trajectory;
};

using Initialization = std::variant<SeededUniform, SingleHarmonic, GivenInit>;

struct DmdrConfig {
    double alpha = 0.1;
    std::size_t max_iterations = 20000;
    double tolerance = 1e-6;
    Initialization init = SeededUniform{};

    void validate() const;
};

struct SolveReport {
    std::size_t iterations = 0;
    bool converged = false;
    /// Relative change ||z+ - z|| / max(||z||, 1e-12), one entry per iteration.
    std::vector<double> residual_history;
    double setup_seconds = 0.0;
    double iterate_seconds = 0.0;
    /// Inclusion residual of the returned x, evaluated once after the loop.
    double inclusion_residual = 0.0;
    std::optional<double> m2_min_eigenvalue;
    std::vector<std::string> warnings;
};

struct SolveResult {
    StackedTrajectory x;
    StackedTrajectory z;
    SolveReport report;
};

struct StepResult {
    StackedTrajectory x;
    StackedTrajectory z;
};

StackedTrajectory initialize(const Problem& p, const DmdrConfig& cfg);

/// One iteration with an arbitrary resolvent for the lossless part.
/// `resolvent_s` maps z to (I + alpha S)^{-1} z.
template <class Resolvent>
StepResult dmdr_step(const Resolvent& resolvent_s, const MixedMonotoneResistive& r, double alpha,
                     const StackedTrajectory& z) {
    StackedTrajectory x = resolvent_s(z);
    StackedTrajectory w = apply_m2(r, x);
    {
        const auto xs = x.data();
        const auto zs = z.data();
        auto ws = w.data();
        for (std::size_t j = 0; j < ws.size(); ++j) ws[j] = 2.0 * xs[j] - zs[j] + alpha * ws[j];
    }
    StackedTrajectory z_next = apply_m1_resolvent(r, alpha, w);
    {
        const auto xs = x.data();
        const auto zs = z.data();
        auto out = z_next.data();
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += zs[j] - xs[j];
    }
    return {std::move(x), std::move(z_next)};
}

StepResult dmdr_step(const Problem& p, const FactorizedResolvent& f, const StackedTrajectory& z, double alpha);

/// ||S x + M1 x - M2 x||_2 / sqrt(total entries).
double residual(const Problem& p, const StackedTrajectory& x);

/// Runs the iteration from z0 until the relative change of z drops below the
/// tolerance or max_iterations is reached. Timing and residual fields other
/// than the history are left to the caller.
template <class Resolvent>
SolveResult iterate(const Resolvent& resolvent_s, const MixedMonotoneResistive& r, const DmdrConfig& cfg,
                    StackedTrajectory z0) {
    SolveResult out{StackedTrajectory{}, std::move(z0), SolveReport{}};
    auto& report = out.report;
    report.residual_history.reserve(cfg.max_iterations);
    const auto start = std::chrono::steady_clock::now();

    for (std::size_t j = 0; j < cfg.max_iterations; ++j) {
        auto step = dmdr_step(resolvent_s, r, cfg.alpha, out.z);
        double diff2 = 0.0;
        bool finite = true;
        const auto a = step.z.data();
        const auto b = out.z.data();
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = a[k] - b[k];
            diff2 += d * d;
            finite = finite && std::isfinite(a[k]);
        }
        const double change = std::sqrt(diff2) / std::max(l2_norm(b), 1e-12);
        report.residual_history.push_back(change);
        report.iterations = j + 1;
        out.x = std::move(step.x);
        out.z = std::move(step.z);
        if (!finite) {
            report.warnings.push_back("iteration " + std::to_string(j + 1) + " produced non-finite values");
            break;
        }
        if (change < cfg.tolerance) {
            report.converged = true;
            break;
        }
    }
    report.iterate_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

/// Factorizes the lossless resolvent once, initializes z and iterates.
/// Non-convergence is reported through SolveReport::converged, not thrown.
SolveResult solve(const Problem& p, const DmdrConfig& cfg);

}  // namespace monosim
