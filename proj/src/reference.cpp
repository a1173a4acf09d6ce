#include "monosim/reference.hpp"

#include "monosim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace monosim {

IntegrationRun::IntegrationRun(std::size_t channels, double step, double total)
    : channels_(channels), length_(0), step_(step), total_(total) {
    if (channels == 0) throw DimensionError("integration run needs at least one channel");
    if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("ab2_step", "must be > 0");
    if (!(total > step) || !std::isfinite(total)) throw ConfigError("t_end", "must exceed the integration step");
    length_ = static_cast<std::size_t>(std::ceil(total / step)) + 1;
    data_.assign(channels_ * length_, 0.0);
}

IntegrationRun ab2_integrate(const VectorField& f, std::span<const double> init_state, double step, double t_end) {
    IntegrationRun run(init_state.size(), step, t_end);
    const std::size_t m = run.channels();
    std::vector<double> x(init_state.begin(), init_state.end());
    std::vector<double> f_prev(m), f_curr(m);

    auto store = [&](std::size_t k) {
        for (std::size_t c = 0; c < m; ++c) {
            if (!std::isfinite(x[c])) {
                throw NumericError("AB2 integration produced a non-finite state at t = " +
                                   format_double(static_cast<double>(k) * step));
            }
            run.channel(c)[k] = x[c];
        }
    };

    store(0);
    f(x, f_prev);
    for (std::size_t c = 0; c < m; ++c) x[c] += step * f_prev[c];
    store(1);
    for (std::size_t k = 2; k < run.length(); ++k) {
        f(x, f_curr);
        for (std::size_t c = 0; c < m; ++c) x[c] += step * (1.5 * f_curr[c] - 0.5 * f_prev[c]);
        std::swap(f_prev, f_curr);
        store(k);
    }
    return run;
}

IntegrationRun ab2_integrate(const NetworkSpec& spec, double step, double t_end, std::span<const double> init_state) {
    spec.validate();
    const std::size_t n = spec.size();
    const auto ni = static_cast<Eigen::Index>(n);

    std::vector<double> init(init_state.begin(), init_state.end());
    if (init.empty()) {
        init.assign(2 * n, 0.0);
        std::fill(init.begin(), init.begin() + static_cast<std::ptrdiff_t>(n), 1.0);
    }
    if (init.size() != 2 * n) {
        throw DimensionError("initial state has " + std::to_string(init.size()) + " entries, expected " +
                             std::to_string(2 * n));
    }

    // Coupling conductances G (zero diagonal) and their row sums.
    Eigen::MatrixXd conductance = Eigen::MatrixXd::Zero(ni, ni);
    for (Eigen::Index a = 0; a < ni; ++a) {
        for (Eigen::Index b = 0; b < ni; ++b) {
            if (a != b) conductance(a, b) = 1.0 / spec.coupling(a, b);
        }
    }
    const Eigen::VectorXd row_sum = conductance.rowwise().sum();
    Eigen::VectorXd coupled(ni);

    VectorField field = [&](std::span<const double> x, std::span<double> dx) {
        const Eigen::Map<const Eigen::VectorXd> v(x.data(), ni);
        if (n > 1) coupled.noalias() = conductance * v;
        for (std::size_t k = 0; k < n; ++k) {
            const double vk = x[k], ik = x[n + k];
            const auto& cell = spec.cells[k];
            double current = vk - vk * vk * vk / 3.0 - ik;
            if (n > 1) current += coupled(static_cast<Eigen::Index>(k)) - row_sum(static_cast<Eigen::Index>(k)) * vk;
            dx[k] = current / cell.capacitance;
            dx[n + k] = (vk - cell.resistance * ik) / cell.inductance;
        }
    };
    return ab2_integrate(field, init, step, t_end);
}

SteadyState steady_state_extract(const IntegrationRun& run, std::size_t num_samples, double sample_step,
                                  ExtractWindow window) {
    if (num_samples < 2) throw ConfigError("num_samples", "must be >= 2");
    if (!(window.begin >= 0.0 && window.begin < window.end && window.end <= 1.0)) {
        throw ConfigError("transient_fraction", "extraction window must satisfy 0 <= begin < end <= 1");
    }
    const std::size_t last = run.length() - 1;
    const auto first = static_cast<std::size_t>(std::floor(window.begin * static_cast<double>(last)));
    const auto stop = static_cast<std::size_t>(std::floor(window.end * static_cast<double>(last)));
    const auto lead = run.channel(0);
    const double h = run.step();

    const double mean = std::accumulate(lead.begin() + static_cast<std::ptrdiff_t>(first),
                                        lead.begin() + static_cast<std::ptrdiff_t>(stop) + 1, 0.0) /
                        static_cast<double>(stop - first + 1);

    SteadyState out;
    for (std::size_t k = first; k < stop; ++k) {
        const double a = lead[k] - mean, b = lead[k + 1] - mean;
        if (a < 0.0 && b >= 0.0) out.crossings.push_back((static_cast<double>(k) + a / (a - b)) * h);
    }
    if (out.crossings.size() < 2) {
        throw NotOscillatoryError("reference run is not oscillatory: " + std::to_string(out.crossings.size()) +
                                  " upward mean crossing(s) in the extraction window");
    }
    out.period = (out.crossings.back() - out.crossings.front()) / static_cast<double>(out.crossings.size() - 1);

    const double t0 = out.crossings.front();
    for (std::size_t c = 0; c < run.channels(); ++c) {
        const auto x = run.channel(c);
        std::vector<double> samples(num_samples);
        for (std::size_t k = 0; k < num_samples; ++k) {
            const double t = t0 + out.period * static_cast<double>(k) / static_cast<double>(num_samples);
            const double pos = t / h;
            const auto i = std::min(static_cast<std::size_t>(pos), last - 1);
            const double w = pos - static_cast<double>(i);
            samples[k] = (1.0 - w) * x[i] + w * x[i + 1];
        }
        out.signals.emplace_back(std::move(samples), sample_step);
    }
    return out;
}

Eigen::MatrixXd dense_circulant_derivative(std::size_t num_samples, double sample_step) {
    const auto n = static_cast<Eigen::Index>(num_samples);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index t = 0; t < n; ++t) {
        d(t, t) += 1.0 / sample_step;
        d(t, (t + n - 1) % n) -= 1.0 / sample_step;
    }
    return d;
}

Eigen::MatrixXd dense_lossless_matrix(const LosslessOperator& op, std::size_t num_samples, double sample_step) {
    op.validate();
    const auto n = static_cast<Eigen::Index>(num_samples);
    const auto nv = static_cast<Eigen::Index>(op.voltage_channels());
    const auto nc = static_cast<Eigen::Index>(op.current_channels());
    const Eigen::MatrixXd d = dense_circulant_derivative(num_samples, sample_step);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

    Eigen::MatrixXd s = Eigen::MatrixXd::Zero((nv + nc) * n, (nv + nc) * n);
    for (Eigen::Index a = 0; a < nv; ++a) s.block(a * n, a * n, n, n) = op.cap[static_cast<std::size_t>(a)] * d;
    for (Eigen::Index r = 0; r < nc; ++r) {
        s.block((nv + r) * n, (nv + r) * n, n, n) = op.ind[static_cast<std::size_t>(r)] * d;
        for (Eigen::Index a = 0; a < nv; ++a) {
            const int e = op.interconnect.at(static_cast<std::size_t>(r), static_cast<std::size_t>(a));
            if (e == 0) continue;
            s.block(a * n, (nv + r) * n, n, n) = e * eye;         // N^T i in the voltage rows
            s.block((nv + r) * n, a * n, n, n) = -e * eye;        // -N v in the current rows
        }
    }
    return s;
}

Eigen::MatrixXd dense_resolvent_oracle(const LosslessOperator& op, double alpha, std::size_t num_samples,
                                       double sample_step) {
    const std::size_t dim = num_samples * op.channels();
    if (dim > 4096) {
        throw DimensionError("dense resolvent oracle limited to 4096 unknowns, got " + std::to_string(dim));
    }
    if (!(alpha >= 0.0)) throw ConfigError("alpha", "must be >= 0");
    const auto di = static_cast<Eigen::Index>(dim);
    const Eigen::MatrixXd a =
        Eigen::MatrixXd::Identity(di, di) + alpha * dense_lossless_matrix(op, num_samples, sample_step);
    return a.partialPivLu().inverse();
}

double prox_bisection_oracle(const ScalarChannel& channel, double alpha, double z) {
    auto g = [&](double x) { return x + alpha * channel.apply(x) - z; };
    double lo = -std::abs(z) - 2.0, hi = std::abs(z) + 2.0;
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (std::abs(gm) <= 1e-13 || mid == lo || mid == hi) return mid;
        if (gm > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

}  // namespace monosim
