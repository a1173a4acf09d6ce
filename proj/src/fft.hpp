#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace monosim::detail {

/// Cached FFTW plans for one transform length. Execution is thread-safe;
/// plans are created once per length under a global lock.
class FftPlan {
public:
    static const FftPlan& get(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    /// Unnormalized forward transform, out-of-place.
    void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
    /// Unnormalized backward transform (no 1/N), out-of-place.
    void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

    /// Real input, full complex output (r2c half spectrum mirrored by
    /// conjugate symmetry).
    void forward_real(std::span<const double> in, std::span<std::complex<double>> out) const;

    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan();

private:
    explicit FftPlan(std::size_t n);

    std::size_t n_;
    void* forward_plan_ = nullptr;
    void* backward_plan_ = nullptr;
    void* real_plan_ = nullptr;
    void* real_inverse_plan_ = nullptr;

    friend double inverse_to_real(const FftPlan&, std::span<const std::complex<double>>, std::span<double>,
                                  std::span<std::complex<double>>);
};

/// Inverse transform of one channel with 1/N scaling; writes the real part
/// to `out` and returns the squared norm of the discarded imaginary part.
/// The real part is the c2r transform of the Hermitian part of `in`; the
/// imaginary part's norm follows from its anti-Hermitian part by Parseval.
/// `scratch` needs n/2 + 1 entries.
double inverse_to_real(const FftPlan& plan, std::span<const std::complex<double>> in, std::span<double> out,
                       std::span<std::complex<double>> scratch);

}  // namespace monosim::detail
