#pragma once

// Static resistive operators. M1 is diagonal and dissipative and is only
// accessed through its resolvent; M2 is linear, symmetric, and applied
// forward at every time instant.

#include "monosim/signal.hpp"

#include <Eigen/Dense>

#include <vector>

namespace monosim {

/// A monotone scalar map applied pointwise in time.
struct ScalarChannel {
    enum class Kind {
        CubicPlusLinear,  ///< x^3/3 + coeff * x (coeff = conductance g >= 0)
        Linear,           ///< coeff * x (coeff = resistance r >= 0)
    };

    Kind kind = Kind::Linear;
    double coeff = 0.0;

    static ScalarChannel cubic(double g) { return {Kind::CubicPlusLinear, g}; }
    static ScalarChannel linear(double r) { return {Kind::Linear, r}; }

    [[nodiscard]] double apply(double x) const noexcept {
        return kind == Kind::Linear ? coeff * x : x * x * x / 3.0 + coeff * x;
    }
    [[nodiscard]] double slope(double x) const noexcept {
        return kind == Kind::Linear ? coeff : x * x + coeff;
    }

    void validate() const;

    bool operator==(const ScalarChannel&) const = default;
};

/// Unique x with x + alpha * f(x) = z. Linear channels use the closed form;
/// cubic channels use Newton's method safeguarded by a bisection bracket.
/// Odd in z: prox_channel(k, a, -z) == -prox_channel(k, a, z) bit for bit.
double prox_channel(const ScalarChannel& channel, double alpha, double z);

struct MixedMonotoneResistive {
    std::vector<ScalarChannel> m1;  ///< one per stacked channel
    Eigen::MatrixXd m2;             ///< channels x channels, symmetric

    [[nodiscard]] std::size_t channels() const noexcept { return m1.size(); }

    /// Checks shapes, channel invariants and symmetry of m2 (1e-12).
    /// Positive semidefiniteness is measured separately by check_m2_monotone.
    void validate() const;
};

StackedTrajectory apply_m1_resolvent(const MixedMonotoneResistive& r, double alpha, const StackedTrajectory& z);

/// Forward channelwise map of M1 (used for residuals).
StackedTrajectory apply_m1(const MixedMonotoneResistive& r, const StackedTrajectory& x);

/// y[., t] = m2 * x[., t] for every sample t.
StackedTrajectory apply_m2(const MixedMonotoneResistive& r, const StackedTrajectory& x);

/// Smallest eigenvalue of m2. Throws DimensionError if m2 is not symmetric
/// within 1e-12. Negative values mean M2 is not monotone.
double check_m2_monotone(const MixedMonotoneResistive& r);

}  // namespace monosim
