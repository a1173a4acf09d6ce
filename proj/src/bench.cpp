#include "monosim/bench.hpp"

#include "monosim/error.hpp"
#include "monosim/random.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace monosim {

namespace {

template <class Fn>
double time_per_call_ns(Fn&& fn, const BenchOptions& opts) {
    using clock = std::chrono::steady_clock;
    fn();  // warm-up (plan creation, caches)

    std::size_t reps = 1;
    for (;;) {
        const auto t0 = clock::now();
        for (std::size_t r = 0; r < reps; ++r) fn();
        const double s = std::chrono::duration<double>(clock::now() - t0).count();
        if (s >= opts.min_batch_seconds || reps >= (std::size_t{1} << 24)) break;
        reps *= 2;
    }
    double best = std::numeric_limits<double>::infinity();
    for (int b = 0; b < opts.batches; ++b) {
        const auto t0 = clock::now();
        for (std::size_t r = 0; r < reps; ++r) fn();
        const double s = std::chrono::duration<double>(clock::now() - t0).count();
        best = std::min(best, s / static_cast<double>(reps));
    }
    return best * 1e9;
}

}  // namespace

Eigen::MatrixXd dense_from_impulses(const FactorizedResolvent& f) {
    const std::size_t n = f.num_samples(), m = f.channels();
    const auto dim = static_cast<Eigen::Index>(n * m);
    Eigen::MatrixXd dense(dim, dim);
    for (std::size_t cin = 0; cin < m; ++cin) {
        StackedTrajectory impulse(m, n, f.sample_step());
        impulse(cin, 0) = 1.0;
        const auto response = apply_resolvent(f, impulse);
        for (std::size_t s = 0; s < n; ++s) {
            const auto col = static_cast<Eigen::Index>(cin * n + s);
            for (std::size_t cout = 0; cout < m; ++cout) {
                for (std::size_t t = 0; t < n; ++t) {
                    dense(static_cast<Eigen::Index>(cout * n + t), col) = response(cout, (t + n - s) % n);
                }
            }
        }
    }
    return dense;
}

BenchRow bench_resolvent(const LosslessOperator& op, std::size_t num_samples, const BenchOptions& opts) {
    const auto f = setup_resolvent(op, opts.alpha, num_samples, opts.sample_step);
    StackedTrajectory z(op.channels(), num_samples, opts.sample_step);
    UniformSource rng(num_samples);
    for (auto& v : z.data()) v = rng.symmetric(1.0);

    BenchRow row;
    row.size = num_samples;
    StackedTrajectory sink;
    row.freq_ns = time_per_call_ns([&] { sink = apply_resolvent(f, z); }, opts);

    if (z.total() <= opts.dense_limit) {
        const Eigen::MatrixXd dense = dense_from_impulses(f);
        const Eigen::Map<const Eigen::VectorXd> zv(z.data().data(), static_cast<Eigen::Index>(z.total()));
        Eigen::VectorXd out(zv.size());
        row.dense_ns = time_per_call_ns([&] { out.noalias() = dense * zv; }, opts);
    }
    return row;
}

double loglog_slope(const std::vector<double>& sizes, const std::vector<double>& times) {
    if (sizes.size() != times.size() || sizes.size() < 2) {
        throw DimensionError("log-log fit needs at least two (size, time) pairs");
    }
    double mx = 0.0, my = 0.0;
    const auto k = static_cast<double>(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        mx += std::log(sizes[i]) / k;
        my += std::log(times[i]) / k;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const double dx = std::log(sizes[i]) - mx;
        sxy += dx * (std::log(times[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace monosim
