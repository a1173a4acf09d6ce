#include "monosim/dmdr.hpp"

#include "monosim/error.hpp"
#include "monosim/random.hpp"

#include <numbers>

namespace monosim {

void Problem::validate() const {
    lossless.validate();
    resistive.validate();
    if (resistive.channels() != lossless.channels()) {
        throw DimensionError("lossless part has " + std::to_string(lossless.channels()) +
                             " channels, resistive part has " + std::to_string(resistive.channels()));
    }
    if (num_samples < 2) throw ConfigError("discretization.num_samples", "must be >= 2");
    if (!(sample_step > 0.0) || !std::isfinite(sample_step)) {
        throw ConfigError("discretization.sample_step", "must be > 0");
    }
}

void DmdrConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("solver.alpha", "must be > 0");
    if (!(tolerance > 0.0)) throw ConfigError("solver.tolerance", "must be > 0");
    if (max_iterations < 1) throw ConfigError("solver.max_iterations", "must be >= 1");
    if (const auto* u = std::get_if<SeededUniform>(&init); u && !(u->amplitude >= 0.0)) {
        throw ConfigError("solver.amplitude", "must be >= 0");
    }
    if (const auto* h = std::get_if<SingleHarmonic>(&init); h && !(h->amplitude >= 0.0)) {
        throw ConfigError("solver.amplitude", "must be >= 0");
    }
}

StackedTrajectory initialize(const Problem& p, const DmdrConfig& cfg) {
    const std::size_t n = p.num_samples;
    StackedTrajectory z(p.channels(), n, p.sample_step);

    if (const auto* u = std::get_if<SeededUniform>(&cfg.init)) {
        UniformSource rng(u->seed);
        for (auto& v : z.data()) v = rng.symmetric(u->amplitude);
    } else if (const auto* h = std::get_if<SingleHarmonic>(&cfg.init)) {
        for (std::size_t c = 0; c < z.channels(); ++c) {
            const double phase = c < p.lossless.voltage_channels() ? 0.0 : 0.5 * std::numbers::pi;
            for (std::size_t t = 0; t < n; ++t) {
                const double theta = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
                z(c, t) = h->amplitude * std::sin(theta + phase);
            }
        }
    } else {
        const auto& given = std::get<GivenInit>(cfg.init).trajectory;
        if (!given.same_shape(z)) {
            throw DimensionError("initial trajectory must have " + std::to_string(z.channels()) + " channels x " +
                                 std::to_string(n) + " samples at step " + format_double(p.sample_step));
        }
        z = given;
    }
    return z;
}

StepResult dmdr_step(const Problem& p, const FactorizedResolvent& f, const StackedTrajectory& z, double alpha) {
    return dmdr_step([&](const StackedTrajectory& v) { return apply_resolvent(f, v); }, p.resistive, alpha, z);
}

double residual(const Problem& p, const StackedTrajectory& x) {
    const auto s = apply_forward(p.lossless, x);
    const auto m1 = apply_m1(p.resistive, x);
    const auto m2 = apply_m2(p.resistive, x);
    double sum = 0.0;
    for (std::size_t j = 0; j < x.total(); ++j) {
        const double r = s.data()[j] + m1.data()[j] - m2.data()[j];
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(x.total()));
}

SolveResult solve(const Problem& p, const DmdrConfig& cfg) {
    p.validate();
    cfg.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const auto factorized = setup_resolvent(p.lossless, cfg.alpha, p.num_samples, p.sample_step);
    const double m2_min = p.m2_min_eigenvalue ? *p.m2_min_eigenvalue : check_m2_monotone(p.resistive);
    auto z0 = initialize(p, cfg);
    const double setup = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto result = iterate([&](const StackedTrajectory& z) { return apply_resolvent(factorized, z); }, p.resistive,
                          cfg, std::move(z0));
    auto& report = result.report;
    report.setup_seconds = setup;
    report.m2_min_eigenvalue = m2_min;

    if (m2_min < -1e-9) {
        report.warnings.insert(report.warnings.begin(),
                               "M2 is not monotone (smallest eigenvalue " + format_double(m2_min) +
                                   "); the iteration has no convergence guarantee");
    }
    if (!report.converged) {
        const double last = report.residual_history.empty() ? 0.0 : report.residual_history.back();
        report.warnings.push_back("did not converge in " + std::to_string(report.iterations) +
                                  " iterations (last relative change " + format_double(last) + ", tolerance " +
                                  format_double(cfg.tolerance) + ")");
    }
    report.inclusion_residual = residual(p, result.x);
    return result;
}

}  // namespace monosim
