#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace monosim::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const std::complex<double>* p) {
    // FFTW's new-array execute API takes non-const input; out-of-place plans
    // never write to it.
    return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
    std::vector<std::complex<double>> a(n), b(n);
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    backward_plan_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
    std::vector<double> r(n);
    real_plan_ = fftw_plan_dft_r2c_1d(len, r.data(), as_fftw(b.data()), flags);
    real_inverse_plan_ = fftw_plan_dft_c2r_1d(len, as_fftw(b.data()), r.data(), flags);
}

FftPlan::~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(real_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(real_inverse_plan_));
}

const FftPlan& FftPlan::get(std::size_t n) {
    // The mutex must outlive the cache: construct it first.
    std::mutex& m = planner_mutex();
    static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
    std::lock_guard lock(m);
    auto& slot = cache[n];
    if (!slot) slot.reset(new FftPlan(n));
    return *slot;
}

void FftPlan::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in.data()), as_fftw(out.data()));
}

void FftPlan::backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
    fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(in.data()), as_fftw(out.data()));
}

void FftPlan::forward_real(std::span<const double> in, std::span<std::complex<double>> out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(real_plan_), const_cast<double*>(in.data()), as_fftw(out.data()));
    for (std::size_t k = n_ / 2 + 1; k < n_; ++k) out[k] = std::conj(out[n_ - k]);
}

double inverse_to_real(const FftPlan& plan, std::span<const std::complex<double>> in, std::span<double> out,
                       std::span<std::complex<double>> scratch) {
    const std::size_t n = plan.size();
    double anti2 = 0.0;
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const std::complex<double> mirror = std::conj(in[(n - k) % n]);
        scratch[k] = 0.5 * (in[k] + mirror);
        const double a = std::norm(0.5 * (in[k] - mirror));
        // bins k and n - k carry the same anti-Hermitian magnitude
        anti2 += (k == 0 || 2 * k == n) ? a : 2.0 * a;
    }
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan.real_inverse_plan_), as_fftw(scratch.data()), out.data());
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : out) v *= scale;
    return anti2 / static_cast<double>(n);
}

}  // namespace monosim::detail
