#pragma once

// The LTI lossless operator (capacitors, inductors, interconnection) and its
// resolvent, applied per frequency bin after an FFT.
//
// Channel order is fixed: all voltage channels first, then all current
// channels. With N the (currents x voltages) interconnection matrix,
//
//   S(v, i) = ( diag(C) D v + N^T i ,  -N v + diag(L) D i ).
//
// A single FitzHugh-Nagumo cell uses N = [[+1]], giving the rows
// C D v + i and -v + L D i.

#include "monosim/signal.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace monosim {

enum class DerivativeModel {
    CirculantBackwardEuler,  ///< exact eigenvalues of the periodic backward-difference matrix
    Spectral,                ///< i * omega_k (Nyquist bin set to 0 for even N)
};

const char* to_string(DerivativeModel m) noexcept;

/// Signed coupling between current channels (rows) and voltage channels
/// (columns); entries are -1, 0 or +1.
class Interconnect {
public:
    Interconnect() = default;
    Interconnect(std::size_t rows, std::size_t cols);

    static Interconnect identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] int at(std::size_t r, std::size_t c) const noexcept { return entries_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, int value);

    bool operator==(const Interconnect&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int8_t> entries_;
};

struct LosslessOperator {
    std::vector<double> cap;    ///< Farads, one per voltage channel
    std::vector<double> ind;    ///< Henrys, one per current channel
    Interconnect interconnect;  ///< ind.size() x cap.size()
    DerivativeModel derivative_model = DerivativeModel::CirculantBackwardEuler;

    [[nodiscard]] std::size_t voltage_channels() const noexcept { return cap.size(); }
    [[nodiscard]] std::size_t current_channels() const noexcept { return ind.size(); }
    [[nodiscard]] std::size_t channels() const noexcept { return cap.size() + ind.size(); }

    /// Throws DimensionError / ConfigError if an invariant is violated.
    void validate() const;
};

/// Eigenvalues of the discrete derivative under the DFT, one per bin.
std::vector<Complex> derivative_eigenvalues(std::size_t num_samples, double sample_step, DerivativeModel model);

/// Per-bin factorizations of (I + alpha S)(j omega_k), reused across
/// iterations. Channels that couple only in pairs (one voltage, one current)
/// are stored as closed-form 2x2 inverses; larger coupled groups fall back to
/// a dense LU per bin. Immutable after construction.
class FactorizedResolvent {
public:
    FactorizedResolvent(const LosslessOperator& op, double alpha, std::size_t num_samples, double sample_step);

    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] std::size_t num_samples() const noexcept { return num_samples_; }
    [[nodiscard]] double sample_step() const noexcept { return sample_step_; }
    [[nodiscard]] std::size_t channels() const noexcept { return channels_; }

    /// Number of independent channel groups and whether every group has at
    /// most two channels (closed-form fast path everywhere).
    [[nodiscard]] std::size_t group_count() const noexcept { return groups_.size(); }
    [[nodiscard]] bool fully_decoupled() const noexcept;

    /// Dense (channels x channels) inverse at bin k, assembled from the
    /// stored factorization.
    [[nodiscard]] Eigen::MatrixXcd bin_inverse(std::size_t k) const;

    /// Solves (I + alpha S) x = z bin by bin on channel-major spectra in place.
    void solve_spectra(std::span<Complex> spectra) const;

private:
    struct Group {
        std::vector<std::size_t> channels;
        // size 1: inv[k] holds 1 entry; size 2: 4 entries row-major.
        std::vector<Complex> closed_form;
        std::vector<Eigen::PartialPivLU<Eigen::MatrixXcd>> lu;
    };

    double alpha_;
    std::size_t num_samples_;
    double sample_step_;
    std::size_t channels_;
    std::vector<Group> groups_;
};

FactorizedResolvent setup_resolvent(const LosslessOperator& op, double alpha, std::size_t num_samples,
                                    double sample_step);

/// x = (I + alpha S)^{-1} z via FFT, per-bin solve, inverse FFT.
StackedTrajectory apply_resolvent(const FactorizedResolvent& f, const StackedTrajectory& z);

/// S x, with the derivative applied per frequency bin.
StackedTrajectory apply_forward(const LosslessOperator& op, const StackedTrajectory& x);

}  // namespace monosim
