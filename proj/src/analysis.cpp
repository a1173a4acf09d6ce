#include "monosim/analysis.hpp"

#include "monosim/error.hpp"

#include <algorithm>
#include <chrono>

namespace monosim {

double peak_to_peak(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

SynchronyMetrics synchrony_metrics(const StackedTrajectory& x, std::size_t cells) {
    if (cells == 0 || cells > x.channels()) {
        throw DimensionError("synchrony metrics need 1.." + std::to_string(x.channels()) + " cells");
    }
    SynchronyMetrics m;
    m.cells = cells;
    m.min_peak_to_peak = peak_to_peak(x.channel(0));
    m.max_peak_to_peak = m.min_peak_to_peak;

    std::vector<PeriodicSignal> v;
    v.reserve(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        v.push_back(x.signal(c));
        const double ptp = peak_to_peak(x.channel(c));
        m.min_peak_to_peak = std::min(m.min_peak_to_peak, ptp);
        m.max_peak_to_peak = std::max(m.max_peak_to_peak, ptp);
    }
    for (std::size_t a = 0; a < cells; ++a) {
        for (std::size_t b = a + 1; b < cells; ++b) m.max_lag_samples = std::max(m.max_lag_samples, circular_lag(v[a], v[b]));
    }
    m.max_lag_fraction = static_cast<double>(m.max_lag_samples) / static_cast<double>(x.num_samples());
    return m;
}

Comparison compare(const RunConfig& cfg) {
    const auto& spec = cfg.network;
    const auto problem = build_network(spec);

    Comparison out;
    out.dmdr = solve(problem, cfg.solver);
    out.dmdr_seconds = out.dmdr.report.setup_seconds + out.dmdr.report.iterate_seconds;
    out.dmdr_period = problem.period();

    const auto t0 = std::chrono::steady_clock::now();
    const double t_end = cfg.reference.t_end ? *cfg.reference.t_end : 20.0 * problem.period();
    const auto run = ab2_integrate(spec, cfg.reference.ab2_step, t_end, cfg.reference.init_state);
    out.reference = steady_state_extract(run, problem.num_samples, problem.sample_step,
                                         ExtractWindow{cfg.reference.transient_fraction, 1.0});
    out.reference_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.reference_period = out.reference.period;
    out.period_relative_difference = std::abs(out.dmdr_period - out.reference_period) / out.reference_period;

    const auto& x = out.dmdr.x;
    std::vector<PeriodicSignal> dmdr_signals;
    for (std::size_t c = 0; c < x.channels(); ++c) dmdr_signals.push_back(x.signal(c));
    out.alignment = circular_align(dmdr_signals, out.reference.signals);
    out.relative_error = out.alignment.error;

    out.reference_aligned = StackedTrajectory(x.channels(), x.num_samples(), x.sample_step());
    const auto shift = static_cast<std::ptrdiff_t>(out.alignment.shift);
    for (std::size_t c = 0; c < x.channels(); ++c) {
        out.reference_aligned.set_signal(c, rotate(out.reference.signals[c], shift));
    }
    if (spec.size() > 1) {
        out.dmdr_synchrony = synchrony_metrics(x, spec.size());
        out.reference_synchrony = synchrony_metrics(out.reference_aligned, spec.size());
    }
    return out;
}

}  // namespace monosim
