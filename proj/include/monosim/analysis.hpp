#pragma once

// Post-processing of solved orbits: amplitude and synchrony metrics, and the
// DMDR-versus-AB2 comparison behind the `compare` command.

#include "monosim/dmdr.hpp"
#include "monosim/netbuild.hpp"
#include "monosim/reference.hpp"

#include <optional>

namespace monosim {

double peak_to_peak(std::span<const double> x);

struct SynchronyMetrics {
    std::size_t cells = 0;
    /// Largest circular cross-correlation peak lag over all voltage pairs.
    std::size_t max_lag_samples = 0;
    double max_lag_fraction = 0.0;  ///< max_lag_samples / num_samples
    double min_peak_to_peak = 0.0;  ///< over voltage channels
    double max_peak_to_peak = 0.0;
};

/// Treats channels [0, cells) as the voltages of a cell network.
SynchronyMetrics synchrony_metrics(const StackedTrajectory& x, std::size_t cells);

struct Comparison {
    SolveResult dmdr;
    SteadyState reference;
    /// Reference orbit rotated onto the DMDR orbit (same channel order).
    StackedTrajectory reference_aligned;
    Alignment alignment;  ///< common shift over all channels
    double relative_error = 0.0;
    double dmdr_period = 0.0;
    double reference_period = 0.0;
    double period_relative_difference = 0.0;
    double dmdr_seconds = 0.0;       ///< setup + iterate
    double reference_seconds = 0.0;  ///< integration + extraction
    std::optional<SynchronyMetrics> dmdr_synchrony;
    std::optional<SynchronyMetrics> reference_synchrony;
};

/// Solves the configured problem with DMDR, integrates the same circuit with
/// AB2 and phase-aligns the two orbits. Throws NotOscillatoryError when the
/// reference run has no oscillation.
Comparison compare(const RunConfig& cfg);

}  // namespace monosim
