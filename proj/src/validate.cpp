#include "monosim/validate.hpp"

#include "monosim/lossless.hpp"
#include "monosim/netbuild.hpp"
#include "monosim/random.hpp"
#include "monosim/reference.hpp"
#include "monosim/resistive.hpp"
#include "monosim/signal.hpp"

#include <algorithm>
#include <cmath>

namespace monosim {

namespace {

StackedTrajectory random_trajectory(UniformSource& rng, std::size_t channels, std::size_t n, double h, double amp) {
    StackedTrajectory z(channels, n, h);
    for (auto& v : z.data()) v = rng.symmetric(amp);
    return z;
}

std::vector<LosslessOperator> test_operators(std::uint64_t seed) {
    std::vector<LosslessOperator> ops;
    ops.push_back(build_fhn_cell(CellParams{}, 8, 0.1).lossless);
    ops.push_back(build_network(sample_heterogeneous(NominalValues{}, 0.2, 3, seed, {8, 0.1})).lossless);

    // Interconnect coupling one voltage to two currents: exercises the
    // per-bin LU path.
    LosslessOperator coupled;
    coupled.cap = {1.0, 0.5};
    coupled.ind = {2.0, 3.0};
    coupled.interconnect = Interconnect(2, 2);
    coupled.interconnect.set(0, 0, 1);
    coupled.interconnect.set(1, 0, -1);
    coupled.interconnect.set(1, 1, 1);
    ops.push_back(coupled);
    return ops;
}

LosslessOperator flipped(LosslessOperator op) {
    for (std::size_t r = 0; r < op.interconnect.rows(); ++r) {
        for (std::size_t c = 0; c < op.interconnect.cols(); ++c) op.interconnect.set(r, c, -op.interconnect.at(r, c));
    }
    return op;
}

SuiteResult dense_resolvent_suite(const ValidationOptions& opts) {
    SuiteResult res{"dense_resolvent", false, 0.0, 1e-9, ""};
    UniformSource rng(opts.seed);
    for (const auto& op : test_operators(opts.seed)) {
        const auto fast_op = opts.flip_interconnect_sign ? flipped(op) : op;
        for (std::size_t n : {8, 16, 32}) {
            for (double alpha : {0.05, 0.1, 0.5}) {
                const double h = 0.1;
                const auto dense = dense_resolvent_oracle(op, alpha, n, h);
                const auto f = setup_resolvent(fast_op, alpha, n, h);
                for (int trial = 0; trial < 10; ++trial) {
                    const auto z = random_trajectory(rng, op.channels(), n, h, 1.0);
                    const auto x = apply_resolvent(f, z);
                    const Eigen::Map<const Eigen::VectorXd> zv(z.data().data(), static_cast<Eigen::Index>(z.total()));
                    const Eigen::VectorXd expected = dense * zv;
                    for (std::size_t j = 0; j < x.total(); ++j) {
                        res.max_error = std::max(res.max_error, std::abs(x.data()[j] - expected(static_cast<Eigen::Index>(j))));
                    }
                }
            }
        }
    }
    res.passed = res.max_error <= res.tolerance;
    res.detail = "max abs difference over 3 circuits x N in {8,16,32} x alpha in {0.05,0.1,0.5} x 10 inputs";
    return res;
}

SuiteResult consistency_suite(const ValidationOptions& opts) {
    SuiteResult res{"resolvent_consistency", false, 0.0, 1e-8, ""};
    UniformSource rng(opts.seed + 1);
    for (const auto& op : test_operators(opts.seed)) {
        for (auto model : {DerivativeModel::CirculantBackwardEuler, DerivativeModel::Spectral}) {
            auto m = op;
            m.derivative_model = model;
            const auto f = setup_resolvent(m, 0.1, 139, 0.1);
            for (int trial = 0; trial < 10; ++trial) {
                const auto z = random_trajectory(rng, m.channels(), 139, 0.1, 1.0);
                const auto x = apply_resolvent(f, z);
                const auto back = combine(1.0, x, 0.1, apply_forward(m, x));
                const auto diff = combine(1.0, back, -1.0, z);
                res.max_error = std::max(res.max_error, l2_norm(diff.data()) / l2_norm(z.data()));
            }
        }
    }
    res.passed = res.max_error <= res.tolerance;
    res.detail = "relative ||x + alpha S x - z|| / ||z||, both derivative models, N = 139";
    return res;
}

SuiteResult prox_suite(const ValidationOptions& opts) {
    SuiteResult res{"prox_bisection", false, 0.0, 1e-10, ""};
    UniformSource rng(opts.seed + 2);
    for (int trial = 0; trial < 200; ++trial) {
        const bool cubic = trial % 2 == 0;
        const double coeff = 20.0 * rng.unit();
        const auto ch = cubic ? ScalarChannel::cubic(coeff) : ScalarChannel::linear(coeff);
        const double alpha = 0.01 + 0.99 * rng.unit();
        const double z = rng.symmetric(10.0);
        res.max_error =
            std::max(res.max_error, std::abs(prox_channel(ch, alpha, z) - prox_bisection_oracle(ch, alpha, z)));
    }
    res.passed = res.max_error <= res.tolerance;
    res.detail = "200 random cases, g or r in [0, 20], alpha in [0.01, 1], z in [-10, 10]";
    return res;
}

SuiteResult firm_suite(const ValidationOptions& opts) {
    SuiteResult res{"firm_nonexpansive", false, 0.0, 1e-9, ""};
    UniformSource rng(opts.seed + 3);
    auto violation = [](const StackedTrajectory& z1, const StackedTrajectory& z2, const StackedTrajectory& j1,
                        const StackedTrajectory& j2) {
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t k = 0; k < z1.total(); ++k) {
            const double dj = j1.data()[k] - j2.data()[k];
            lhs += dj * dj;
            rhs += (z1.data()[k] - z2.data()[k]) * dj;
        }
        return lhs - rhs;
    };

    const auto net = build_network(sample_heterogeneous(NominalValues{}, 0.2, 3, opts.seed, {64, 0.1}));
    const auto f = setup_resolvent(net.lossless, 0.1, 64, 0.1);
    for (int trial = 0; trial < 100; ++trial) {
        const auto z1 = random_trajectory(rng, net.channels(), 64, 0.1, 3.0);
        const auto z2 = random_trajectory(rng, net.channels(), 64, 0.1, 3.0);
        res.max_error = std::max(res.max_error, violation(z1, z2, apply_resolvent(f, z1), apply_resolvent(f, z2)));
        res.max_error = std::max(res.max_error, violation(z1, z2, apply_m1_resolvent(net.resistive, 0.1, z1),
                                                          apply_m1_resolvent(net.resistive, 0.1, z2)));
    }
    res.passed = res.max_error <= res.tolerance;
    res.detail = "max of ||Jz1 - Jz2||^2 - <z1 - z2, Jz1 - Jz2> for J of S and M1, 100 pairs";
    return res;
}

SuiteResult ab2_suite() {
    SuiteResult res{"ab2_order", false, 0.0, 0.5, ""};
    const VectorField decay = [](std::span<const double> x, std::span<double> dx) { dx[0] = -x[0]; };
    const std::vector<double> init{1.0};
    auto error_at_one = [&](double h) {
        const auto run = ab2_integrate(decay, init, h, 1.0);
        return std::abs(run.channel(0).back() - std::exp(-1.0));
    };
    const double coarse = error_at_one(0.01), fine = error_at_one(0.005);
    const double ratio = coarse / fine;
    res.max_error = std::abs(ratio - 4.0);
    res.passed = ratio >= 3.5 && ratio <= 4.5;
    res.detail = "error ratio " + format_double(ratio) + " (h = 0.01 vs 0.005 on v' = -v, t = 1); error at h = 0.01 is " +
                 format_double(coarse);
    return res;
}

}  // namespace

std::vector<SuiteResult> run_validation(const ValidationOptions& opts) {
    return {dense_resolvent_suite(opts), consistency_suite(opts), prox_suite(opts), firm_suite(opts), ab2_suite()};
}

}  // namespace monosim
