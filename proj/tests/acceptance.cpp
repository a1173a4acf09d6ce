// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "monosim/analysis.hpp"
#include "monosim/bench.hpp"
#include "monosim/dmdr.hpp"
#include "monosim/netbuild.hpp"
#include "monosim/reference.hpp"
#include "monosim/resistive.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace monosim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string load(const char* name) {
    std::ifstream in(std::string(MONOSIM_CONFIG_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome resolvent_oracle() {
    const auto t0 = Clock::now();
    UniformSource rng(101);
    std::vector<LosslessOperator> ops;
    ops.push_back(build_fhn_cell(CellParams{}, 8, 0.1).lossless);
    ops.push_back(build_network(sample_heterogeneous(NominalValues{}, 0.2, 3, 7)).lossless);
    double worst = 0.0;
    for (const auto& op : ops) {
        for (std::size_t n : {8, 16, 32}) {
            for (double alpha : {0.05, 0.1, 0.5}) {
                const auto f = setup_resolvent(op, alpha, n, 0.1);
                const Eigen::MatrixXd dense = dense_resolvent_oracle(op, alpha, n, 0.1);
                for (int trial = 0; trial < 50; ++trial) {
                    const auto z = testing::random_trajectory(rng, op.channels(), n, 0.1);
                    const auto x = apply_resolvent(f, z);
                    const Eigen::Map<const Eigen::VectorXd> zv(z.data().data(), static_cast<Eigen::Index>(z.total()));
                    const Eigen::VectorXd expect = dense * zv;
                    for (std::size_t j = 0; j < x.total(); ++j) {
                        worst = std::max(worst, std::abs(x.data()[j] - expect(static_cast<Eigen::Index>(j))));
                    }
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && secs < 5.0, "max_abs_error=" + fmt("%.3e", worst) + " (<= 1e-9), " +
                                             fmt("%.2f", secs) + " s (< 5 s)"};
}

Outcome prox_correctness() {
    UniformSource rng(103);
    double worst = 0.0, max_g = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const double coeff = 20.0 * rng.unit();
        const auto ch = rng.unit() < 0.5 ? ScalarChannel::cubic(coeff) : ScalarChannel::linear(coeff);
        if (ch.kind == ScalarChannel::Kind::CubicPlusLinear) max_g = std::max(max_g, coeff);
        const double alpha = 0.01 + 0.99 * rng.unit();
        const double z = rng.symmetric(10.0);
        worst = std::max(worst, std::abs(prox_channel(ch, alpha, z) - prox_bisection_oracle(ch, alpha, z)));
    }
    return {worst <= 1e-10, "max_abs_error=" + fmt("%.3e", worst) + " (<= 1e-10) over 200 cases, largest g " +
                                fmt("%.2f", max_g)};
}

Outcome fhn_single() {
    const auto t0 = Clock::now();
    const auto cfg = parse_config(load("fhn_single.json"));
    const auto cmp = compare(cfg);
    const double secs = seconds_since(t0);
    const double ptp = peak_to_peak(cmp.dmdr.x.channel(0));
    const bool ok = cmp.dmdr.report.converged && ptp >= 1.0 && cmp.relative_error <= 0.05 &&
                    std::abs(cmp.period_relative_difference) <= 0.05 && secs <= 60.0;
    return {ok, std::string("converged=") + (cmp.dmdr.report.converged ? "true" : "false") + " after " +
                    std::to_string(cmp.dmdr.report.iterations) + " iterations (last change " +
                    fmt("%.3e", cmp.dmdr.report.residual_history.back()) + "), ptp=" + fmt("%.3f", ptp) +
                    " (>= 1), rel_l2=" + fmt("%.4f", cmp.relative_error) + " (<= 0.05), period dmdr " +
                    fmt("%.3f", cmp.dmdr_period) + " s vs ab2 " + fmt("%.3f", cmp.reference_period) + " s (" +
                    fmt("%.4f", std::abs(cmp.period_relative_difference)) + " <= 0.05), " + fmt("%.1f", secs) +
                    " s (<= 60 s)"};
}

Outcome scaling() {
    const auto t0 = Clock::now();
    const auto op = build_fhn_cell(CellParams{}, 8, 0.1).lossless;
    std::vector<double> sizes, times;
    std::optional<double> freq4096, dense4096;
    for (std::size_t n : {512, 1024, 2048, 4096, 8192}) {
        const auto row = bench_resolvent(op, n);
        sizes.push_back(static_cast<double>(n));
        times.push_back(row.freq_ns);
        if (n == 4096) {
            freq4096 = row.freq_ns;
            dense4096 = row.dense_ns;
        }
    }
    const double slope = loglog_slope(sizes, times);
    const double secs = seconds_since(t0);
    const bool faster = freq4096 && dense4096 && *freq4096 < *dense4096;
    return {slope < 1.5 && faster && secs <= 300.0,
            "slope=" + fmt("%.3f", slope) + " (< 1.5), N=4096 freq " + fmt("%.0f", freq4096.value_or(0.0)) +
                " ns vs dense " + (dense4096 ? fmt("%.0f", *dense4096) : std::string("absent")) + " ns, " +
                fmt("%.1f", secs) + " s (<= 300 s)"};
}

Outcome network() {
    const auto t0 = Clock::now();
    const auto cfg = parse_config(load("fhn_network_100.json"));
    const auto p = build_network(cfg.network);
    const auto sol = solve(p, cfg.solver);
    const double secs = seconds_since(t0);
    const auto sync = synchrony_metrics(sol.x, cfg.network.size());
    const bool ok = sol.report.converged && sync.min_peak_to_peak >= 1.0 && sync.max_lag_fraction <= 0.05 &&
                    secs <= 600.0;
    return {ok, std::string("converged=") + (sol.report.converged ? "true" : "false") + " after " +
                    std::to_string(sol.report.iterations) + " iterations (last change " +
                    fmt("%.3e", sol.report.residual_history.back()) + "), min ptp=" +
                    fmt("%.3f", sync.min_peak_to_peak) + " (>= 1), max lag " + fmt("%.4f", sync.max_lag_fraction) +
                    " of the period (<= 0.05), " + fmt("%.1f", secs) + " s (<= 600 s)"};
}

Outcome monotonicity() {
    const auto t0 = Clock::now();
    UniformSource rng(107);
    double worst_firm = -1e300, worst_cycle = -1e300, worst_linear = 0.0;

    const auto net = build_network(sample_heterogeneous(NominalValues{}, 0.2, 3, 11, {64, 0.1}));
    const auto f = setup_resolvent(net.lossless, 0.1, 64, 0.1);
    const std::size_t ch = net.channels();
    for (int trial = 0; trial < 100; ++trial) {
        const auto z1 = testing::random_trajectory(rng, ch, 64, 0.1, 3.0);
        const auto z2 = testing::random_trajectory(rng, ch, 64, 0.1, 3.0);
        const auto dz = combine(1.0, z1, -1.0, z2);
        const auto ds = combine(1.0, apply_resolvent(f, z1), -1.0, apply_resolvent(f, z2));
        const auto dm = combine(1.0, apply_m1_resolvent(net.resistive, 0.1, z1), -1.0,
                                apply_m1_resolvent(net.resistive, 0.1, z2));
        for (const auto* d : {&ds, &dm}) {
            const double gap = testing::dot(d->data(), d->data()) - testing::dot(dz.data(), d->data());
            worst_firm = std::max(worst_firm, gap / std::max(1.0, testing::dot(dz.data(), dz.data())));
        }
    }
    for (int trial = 0; trial < 100; ++trial) {
        const double coeff = 20.0 * rng.unit();
        const auto m = rng.unit() < 0.5 ? ScalarChannel::cubic(coeff) : ScalarChannel::linear(coeff);
        const double u[3] = {rng.symmetric(5.0), rng.symmetric(5.0), rng.symmetric(5.0)};
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) sum += (m.apply(u[(i + 1) % 3]) - m.apply(u[i])) * u[i];
        worst_cycle = std::max(worst_cycle, sum);
    }
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = testing::random_trajectory(rng, ch, 64, 0.1);
        const auto y = testing::random_trajectory(rng, ch, 64, 0.1);
        const double a = rng.symmetric(3.0), b = rng.symmetric(3.0);
        const auto lhs = apply_m2(net.resistive, combine(a, x, b, y));
        const auto rhs = combine(a, apply_m2(net.resistive, x), b, apply_m2(net.resistive, y));
        worst_linear = std::max(worst_linear, testing::max_abs_diff(lhs.data(), rhs.data()));
    }

    // homogeneous 100-cell coupling (Rc = 5): the voltage block is 0.8 I + 0.2 J
    NetworkSpec homo;
    homo.cells.assign(100, CellParams{});
    homo.coupling = Eigen::MatrixXd::Constant(100, 100, 5.0);
    homo.discretization = {16, 0.1};
    const auto hp = build_network(homo);
    MixedMonotoneResistive vblock;
    vblock.m1.assign(100, ScalarChannel::linear(1.0));
    vblock.m2 = hp.resistive.m2.topLeftCorner(100, 100);
    const double lambda = check_m2_monotone(vblock);

    const double secs = seconds_since(t0);
    const bool ok = worst_firm <= 1e-9 && worst_cycle <= 1e-12 && worst_linear <= 1e-12 &&
                    std::abs(lambda - 0.8) <= 1e-10 && secs < 30.0;
    return {ok, "firm gap " + fmt("%.2e", worst_firm) + " (<= 1e-9), 3-cycle " + fmt("%.2e", worst_cycle) +
                    " (<= 1e-12), M2 linearity " + fmt("%.2e", worst_linear) + " (<= 1e-12), min eig " +
                    fmt("%.12f", lambda) + " (0.8), " + fmt("%.2f", secs) + " s (< 30 s)"};
}

Outcome ab2_order() {
    const VectorField decay = [](std::span<const double> x, std::span<double> dx) { dx[0] = -x[0]; };
    const double init[1] = {1.0};
    auto err = [&](double h) {
        const auto run = ab2_integrate(decay, init, h, 1.0);
        return std::abs(run.channel(0)[run.length() - 1] - std::exp(-1.0));
    };
    const double ratio = err(0.01) / err(0.005);
    return {ratio >= 3.5 && ratio <= 4.5, "error ratio=" + fmt("%.4f", ratio) + " (in [3.5, 4.5])"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"1 resolvent oracle equivalence", resolvent_oracle},
        {"2 prox correctness", prox_correctness},
        {"3 FHN single-cell reproduction", fhn_single},
        {"4 resolvent scaling", scaling},
        {"5 100-cell network reproduction", network},
        {"6 monotonicity properties", monotonicity},
        {"7 AB2 order", ab2_order},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.passed) ++failures;
        std::printf("%s  %s: %s\n", o.passed ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
