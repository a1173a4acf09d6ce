#pragma once

// Timing of the lossless resolvent: frequency path versus a dense
// matrix-vector product with the same operator.

#include "monosim/lossless.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace monosim {

struct BenchRow {
    std::size_t size = 0;               ///< num_samples
    double freq_ns = 0.0;               ///< apply_resolvent, per call
    std::optional<double> dense_ns;     ///< dense matvec, per call; absent above the dense limit
};

struct BenchOptions {
    double alpha = 0.1;
    double sample_step = 0.1;
    /// Largest stacked dimension (channels * num_samples) timed densely.
    std::size_t dense_limit = 8192;
    /// Minimum wall time per timing batch.
    double min_batch_seconds = 0.05;
    int batches = 5;
};

/// Dense (I + alpha S)^{-1} assembled column by column from impulse
/// responses of the factorized resolvent (the operator is block circulant).
Eigen::MatrixXd dense_from_impulses(const FactorizedResolvent& f);

/// Benchmarks the given single-cell operator (cap, ind, interconnect taken
/// from `op`) at one size. Per-call times are the minimum over batches.
BenchRow bench_resolvent(const LosslessOperator& op, std::size_t num_samples, const BenchOptions& opts = {});

/// Least-squares slope of log(time) against log(size).
double loglog_slope(const std::vector<double>& sizes, const std::vector<double>& times);

}  // namespace monosim
