#pragma once

// Periodic sampled signals on a uniform grid and their discrete spectra.
//
// Transform convention (fixed project-wide):
//   forward  X[k] = sum_t x[t] exp(-2 pi i k t / N)      (unnormalized)
//   inverse  x[t] = (1/N) sum_k X[k] exp(+2 pi i k t / N)
// so that  h * sum_t |x[t]|^2 == (h / N) * sum_k |X[k]|^2.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace monosim {

using Complex = std::complex<double>;

/// One period of a T-periodic trajectory, T = size() * sample_step().
class PeriodicSignal {
public:
    PeriodicSignal(std::vector<double> samples, double sample_step);

    static PeriodicSignal zeros(std::size_t num_samples, double sample_step);

    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] double sample_step() const noexcept { return step_; }
    [[nodiscard]] double period() const noexcept { return step_ * static_cast<double>(samples_.size()); }

    [[nodiscard]] std::span<const double> samples() const noexcept { return samples_; }
    [[nodiscard]] std::span<double> samples() noexcept { return samples_; }

    double operator[](std::size_t t) const noexcept { return samples_[t]; }
    double& operator[](std::size_t t) noexcept { return samples_[t]; }

    /// Sample at an arbitrary (possibly negative or >= N) index, wrapped modulo N.
    [[nodiscard]] double at_wrapped(std::ptrdiff_t t) const noexcept;

private:
    std::vector<double> samples_;
    double step_;
};

/// Full complex DFT of a periodic signal (no half-spectrum packing).
class Spectrum {
public:
    Spectrum(std::vector<Complex> bins, double sample_step);

    [[nodiscard]] std::size_t size() const noexcept { return bins_.size(); }
    [[nodiscard]] double sample_step() const noexcept { return step_; }
    [[nodiscard]] std::span<const Complex> bins() const noexcept { return bins_; }
    [[nodiscard]] std::span<Complex> bins() noexcept { return bins_; }

    Complex operator[](std::size_t k) const noexcept { return bins_[k]; }
    Complex& operator[](std::size_t k) noexcept { return bins_[k]; }

private:
    std::vector<Complex> bins_;
    double step_;
};

/// h * sum_t u[t] y[t].
double inner_product(const PeriodicSignal& u, const PeriodicSignal& y);

Spectrum to_spectrum(const PeriodicSignal& s);

/// Throws NumericError when the imaginary residue of the inverse transform
/// exceeds 1e-6 of the real part's norm (the spectrum was not conjugate
/// symmetric).
PeriodicSignal from_spectrum(const Spectrum& sp);

/// Returns `s` advanced by `shift` samples: out[t] = s[(t + shift) mod N].
PeriodicSignal rotate(const PeriodicSignal& s, std::ptrdiff_t shift);

struct Alignment {
    std::size_t shift = 0;  ///< rotate(b, shift) best matches a
    double error = 0.0;     ///< ||a - rotate(b, shift)|| / ||a||
};

/// Circular shift of `b` maximizing its correlation with `a`.
Alignment circular_align(const PeriodicSignal& a, const PeriodicSignal& b);

/// Multi-channel variant: one common shift for all channels, chosen from
/// the summed correlation; error is measured over all channels stacked.
Alignment circular_align(std::span<const PeriodicSignal> a, std::span<const PeriodicSignal> b);

/// Smallest circular distance min(shift, N - shift) of the correlation peak.
std::size_t circular_lag(const PeriodicSignal& a, const PeriodicSignal& b);

// ---------------------------------------------------------------------------
// StackedTrajectory
// ---------------------------------------------------------------------------

/// Several periodic channels on a common grid, stored channel-major.
/// Problems built by this library order channels as all voltages, then all
/// currents.
class StackedTrajectory {
public:
    StackedTrajectory() = default;
    StackedTrajectory(std::size_t channels, std::size_t num_samples, double sample_step);

    [[nodiscard]] std::size_t channels() const noexcept { return channels_; }
    [[nodiscard]] std::size_t num_samples() const noexcept { return samples_; }
    [[nodiscard]] double sample_step() const noexcept { return step_; }
    [[nodiscard]] std::size_t total() const noexcept { return data_.size(); }

    [[nodiscard]] std::span<const double> channel(std::size_t c) const noexcept {
        return {data_.data() + c * samples_, samples_};
    }
    [[nodiscard]] std::span<double> channel(std::size_t c) noexcept {
        return {data_.data() + c * samples_, samples_};
    }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::span<double> data() noexcept { return data_; }

    double operator()(std::size_t c, std::size_t t) const noexcept { return data_[c * samples_ + t]; }
    double& operator()(std::size_t c, std::size_t t) noexcept { return data_[c * samples_ + t]; }

    [[nodiscard]] PeriodicSignal signal(std::size_t c) const;
    void set_signal(std::size_t c, const PeriodicSignal& s);

    [[nodiscard]] bool same_shape(const StackedTrajectory& o) const noexcept {
        return channels_ == o.channels_ && samples_ == o.samples_ && step_ == o.step_;
    }

    bool operator==(const StackedTrajectory&) const = default;

private:
    std::size_t channels_ = 0;
    std::size_t samples_ = 0;
    double step_ = 0.0;
    std::vector<double> data_;
};

double inner_product(const StackedTrajectory& u, const StackedTrajectory& y);

/// Plain Euclidean norm over all entries (no sample-step weighting).
double l2_norm(std::span<const double> x);

/// out = a*x + b*y, shapes must match.
StackedTrajectory combine(double a, const StackedTrajectory& x, double b, const StackedTrajectory& y);

// ---------------------------------------------------------------------------
// CSV trajectory format: header `time,<name_1>,...`, row k has time k*h.
// ---------------------------------------------------------------------------

void write_csv(std::ostream& out, std::span<const std::string> names, std::span<const PeriodicSignal> columns);
void write_csv(std::ostream& out, std::span<const std::string> names, const StackedTrajectory& x);

struct CsvTable {
    std::vector<std::string> names;
    std::vector<PeriodicSignal> columns;
};

/// Reads the CSV trajectory format back; the sample step is taken from the
/// time column.
CsvTable read_csv(std::istream& in);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace monosim
