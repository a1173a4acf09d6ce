#pragma once

// Independent oracles: an Adams-Bashforth (AB2) time integrator, steady-state
// extraction from its output, a dense time-domain resolvent and a bisection
// prox. None of these share code paths with the frequency-domain solver.

#include "monosim/lossless.hpp"
#include "monosim/netbuild.hpp"
#include "monosim/resistive.hpp"
#include "monosim/signal.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace monosim {

/// Time-domain trajectory, channel-major. Sample k is at time k * step.
class IntegrationRun {
public:
    IntegrationRun(std::size_t channels, double step, double total);

    [[nodiscard]] std::size_t channels() const noexcept { return channels_; }
    /// ceil(total / step) + 1
    [[nodiscard]] std::size_t length() const noexcept { return length_; }
    [[nodiscard]] double step() const noexcept { return step_; }
    [[nodiscard]] double total() const noexcept { return total_; }

    [[nodiscard]] std::span<const double> channel(std::size_t c) const noexcept {
        return {data_.data() + c * length_, length_};
    }
    [[nodiscard]] std::span<double> channel(std::size_t c) noexcept { return {data_.data() + c * length_, length_}; }

private:
    std::size_t channels_;
    std::size_t length_;
    double step_;
    double total_;
    std::vector<double> data_;
};

/// dx = f(x) for an autonomous system.
using VectorField = std::function<void(std::span<const double> x, std::span<double> dx)>;

/// AB2 with one forward-Euler bootstrap step:
///   x1 = x0 + h f(x0);  x_{k+1} = x_k + h (3/2 f(x_k) - 1/2 f(x_{k-1})).
/// Throws NumericError on non-finite state.
IntegrationRun ab2_integrate(const VectorField& f, std::span<const double> init_state, double step, double t_end);

/// The coupled cell equations
///   C_k v_k' = v_k - v_k^3/3 - i_k + sum_{j != k} (v_j - v_k) / Rc_kj
///   L_k i_k' = v_k - R_k i_k
/// State order (v_1..v_n, i_1..i_n). Empty init_state means v = 1, i = 0.
IntegrationRun ab2_integrate(const NetworkSpec& spec, double step, double t_end, std::span<const double> init_state);

struct SteadyState {
    std::vector<PeriodicSignal> signals;  ///< one per run channel
    double period = 0.0;                  ///< seconds
    std::vector<double> crossings;        ///< upward mean crossings of channel 0 used for the estimate
};

/// Fraction of the run used for extraction.
struct ExtractWindow {
    double begin = 0.8;
    double end = 1.0;
};

/// Estimates the period from upward mean crossings of channel 0 inside the
/// window (linear interpolation, averaged over cycles), then resamples one
/// detected period starting at the first crossing onto num_samples points
/// (spacing period / num_samples). Signals carry `sample_step` as their grid
/// step. Throws NotOscillatoryError when fewer than two crossings are found.
SteadyState steady_state_extract(const IntegrationRun& run, std::size_t num_samples, double sample_step,
                                 ExtractWindow window = {});

/// Periodic backward-difference matrix: (D x)[t] = (x[t] - x[t-1]) / h.
Eigen::MatrixXd dense_circulant_derivative(std::size_t num_samples, double sample_step);

/// Time-domain matrix of S on channel-major stacked vectors, always built
/// with the backward-difference matrix above.
Eigen::MatrixXd dense_lossless_matrix(const LosslessOperator& op, std::size_t num_samples, double sample_step);

/// (I + alpha S)^{-1} by dense LU. Throws DimensionError when
/// num_samples * channels exceeds 4096.
Eigen::MatrixXd dense_resolvent_oracle(const LosslessOperator& op, double alpha, std::size_t num_samples,
                                       double sample_step);

/// Pure bisection on [-|z| - 2, |z| + 2] until |x + alpha f(x) - z| <= 1e-13
/// (or the bracket collapses to adjacent doubles).
double prox_bisection_oracle(const ScalarChannel& channel, double alpha, double z);

}  // namespace monosim
