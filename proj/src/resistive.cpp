#include "monosim/resistive.hpp"

#include "monosim/error.hpp"
#include "parallel.hpp"

#include <cmath>
#include <string>

namespace monosim {

namespace {

constexpr int kProxMaxIterations = 200;

void check_shape(const MixedMonotoneResistive& r, const StackedTrajectory& x, const char* what) {
    if (x.channels() != r.channels()) {
        throw DimensionError(std::string(what) + ": trajectory has " + std::to_string(x.channels()) +
                             " channels, resistive operator has " + std::to_string(r.channels()));
    }
}

// Root of x + alpha (x^3/3 + g x) = a for a >= 0.
double cubic_prox_nonnegative(double g, double alpha, double a) {
    auto residual = [&](double x) { return x + alpha * (x * x * x / 3.0 + g * x) - a; };
    const double tol = 1e-12 * std::max(1.0, a);

    double lo = -a - 1.0, hi = a + 1.0;
    double x = a;
    for (int it = 0; it < kProxMaxIterations; ++it) {
        const double fx = residual(x);
        if (std::abs(fx) <= tol) return x;
        if (fx > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        double next = x - fx / (1.0 + alpha * (x * x + g));
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) return x;  // bracket collapsed to adjacent doubles
        x = next;
    }
    throw NumericError("prox_channel: guarded Newton did not converge for z = " + format_double(a));
}

}  // namespace

void ScalarChannel::validate() const {
    if (!(coeff >= 0.0) || !std::isfinite(coeff)) {
        throw ConfigError("m1", kind == Kind::Linear ? "resistance must be >= 0" : "conductance must be >= 0");
    }
}

double prox_channel(const ScalarChannel& channel, double alpha, double z) {
    if (!(alpha > 0.0)) throw ConfigError("alpha", "must be > 0");
    if (channel.kind == ScalarChannel::Kind::Linear) return z / (1.0 + alpha * channel.coeff);
    if (z == 0.0) return 0.0;
    const double x = cubic_prox_nonnegative(channel.coeff, alpha, std::abs(z));
    return z < 0.0 ? -x : x;
}

void MixedMonotoneResistive::validate() const {
    for (const auto& c : m1) c.validate();
    const auto n = static_cast<Eigen::Index>(m1.size());
    if (m2.rows() != n || m2.cols() != n) {
        throw DimensionError("m2 must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!m2.allFinite()) throw ConfigError("m2", "entries must be finite");
    if (n > 0 && (m2 - m2.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw DimensionError("m2 is not symmetric");
    }
}

StackedTrajectory apply_m1_resolvent(const MixedMonotoneResistive& r, double alpha, const StackedTrajectory& z) {
    check_shape(r, z, "apply_m1_resolvent");
    StackedTrajectory x(z.channels(), z.num_samples(), z.sample_step());
    const auto total = static_cast<std::ptrdiff_t>(z.total());
    const std::size_t n = z.num_samples();
    const auto in = z.data();
    auto out = x.data();
#pragma omp parallel for num_threads(detail::threads_for(z.total(), 16384)) schedule(static)
    for (std::ptrdiff_t j = 0; j < total; ++j) {
        const auto idx = static_cast<std::size_t>(j);
        out[idx] = prox_channel(r.m1[idx / n], alpha, in[idx]);
    }
    return x;
}

StackedTrajectory apply_m1(const MixedMonotoneResistive& r, const StackedTrajectory& x) {
    check_shape(r, x, "apply_m1");
    StackedTrajectory y(x.channels(), x.num_samples(), x.sample_step());
    for (std::size_t c = 0; c < x.channels(); ++c) {
        const auto in = x.channel(c);
        auto out = y.channel(c);
        for (std::size_t t = 0; t < in.size(); ++t) out[t] = r.m1[c].apply(in[t]);
    }
    return y;
}

StackedTrajectory apply_m2(const MixedMonotoneResistive& r, const StackedTrajectory& x) {
    check_shape(r, x, "apply_m2");
    const auto n = static_cast<Eigen::Index>(x.num_samples());
    const auto ch = static_cast<Eigen::Index>(x.channels());

    // Only channels touched by m2 take part in the product; the rest are zero.
    std::vector<Eigen::Index> active;
    for (Eigen::Index c = 0; c < ch; ++c) {
        if (r.m2.row(c).any() || r.m2.col(c).any()) active.push_back(c);
    }
    StackedTrajectory y(x.channels(), x.num_samples(), x.sample_step());
    if (active.empty()) return y;

    const auto na = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd sub(na, na);
    for (Eigen::Index a = 0; a < na; ++a) {
        for (Eigen::Index b = 0; b < na; ++b) sub(a, b) = r.m2(active[a], active[b]);
    }
    // Column-major (samples x channels) views match the channel-major storage.
    Eigen::Map<const Eigen::MatrixXd> xin(x.data().data(), n, ch);
    Eigen::Map<Eigen::MatrixXd> yout(y.data().data(), n, ch);
    Eigen::MatrixXd xa(n, na);
    for (Eigen::Index a = 0; a < na; ++a) xa.col(a) = xin.col(active[a]);
    const Eigen::MatrixXd ya = xa * sub.transpose();
    for (Eigen::Index a = 0; a < na; ++a) yout.col(active[a]) = ya.col(a);
    return y;
}

double check_m2_monotone(const MixedMonotoneResistive& r) {
    if (r.m2.rows() != r.m2.cols() || r.m2.rows() == 0) throw DimensionError("m2 must be square and non-empty");
    if ((r.m2 - r.m2.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw DimensionError("m2 is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r.m2, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericError("check_m2_monotone: eigensolver failed");
    return eig.eigenvalues().minCoeff();
}

}  // namespace monosim
