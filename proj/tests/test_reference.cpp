#include <catch2/catch_amalgamated.hpp>

#include "monosim/error.hpp"
#include "monosim/reference.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace monosim;
using Catch::Approx;

namespace {

const VectorField kDecay = [](std::span<const double> x, std::span<double> dx) { dx[0] = -x[0]; };

double decay_error(double h) {
    const double init[1] = {1.0};
    const auto run = ab2_integrate(kDecay, init, h, 1.0);
    return std::abs(run.channel(0)[run.length() - 1] - std::exp(-1.0));
}

IntegrationRun sine_run(double period, double step, double total) {
    IntegrationRun run(1, step, total);
    auto ch = run.channel(0);
    for (std::size_t k = 0; k < run.length(); ++k) {
        ch[k] = std::sin(2.0 * std::numbers::pi * static_cast<double>(k) * step / period);
    }
    return run;
}

NetworkSpec single_cell_spec() {
    NetworkSpec spec;
    spec.cells = {CellParams{}};
    spec.coupling = Eigen::MatrixXd::Zero(1, 1);
    spec.discretization = {556, 0.1, DerivativeModel::CirculantBackwardEuler};
    return spec;
}

}  // namespace

TEST_CASE("integration run layout", "[reference]") {
    const IntegrationRun run(3, 0.1, 1.0);
    CHECK(run.length() == 11);
    CHECK(run.channels() == 3);
    CHECK(IntegrationRun(1, 0.3, 1.0).length() == 5);
}

TEST_CASE("AB2 tracks exponential decay", "[reference]") {
    const double init[1] = {1.0};
    const auto run = ab2_integrate(kDecay, init, 0.01, 1.0);
    CHECK(run.channel(0)[0] == 1.0);
    CHECK(run.channel(0)[1] == Approx(0.99));
    CHECK(run.channel(0)[run.length() - 1] == Approx(std::exp(-1.0)).margin(1e-3));
}

TEST_CASE("AB2 is second order", "[reference][oracle]") {
    const double ratio = decay_error(0.01) / decay_error(0.005);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("AB2 rejects divergent runs", "[reference]") {
    const VectorField blowup = [](std::span<const double> x, std::span<double> dx) { dx[0] = x[0] * x[0]; };
    const double init[1] = {1.0};
    CHECK_THROWS_AS(ab2_integrate(blowup, init, 0.1, 100.0), NumericError);
}

TEST_CASE("FHN started at rest stays at rest", "[reference]") {
    const double init[2] = {0.0, 0.0};
    const auto run = ab2_integrate(single_cell_spec(), 0.01, 50.0, init);
    for (std::size_t c = 0; c < 2; ++c) {
        for (double v : run.channel(c)) CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(steady_state_extract(run, 64, 0.1), NotOscillatoryError);
}

TEST_CASE("period of a pure sine", "[reference]") {
    const auto run = sine_run(10.0, 0.01, 200.0);
    const auto ss = steady_state_extract(run, 100, 0.1);
    CHECK(ss.period == Approx(10.0).margin(0.01));
    CHECK(ss.crossings.size() >= 3);
    REQUIRE(ss.signals.size() == 1);
    // resampled from an upward crossing: starts near 0, peaks a quarter later
    CHECK(ss.signals[0][0] == Approx(0.0).margin(1e-3));
    CHECK(ss.signals[0][25] == Approx(1.0).margin(1e-3));
    CHECK(ss.signals[0].sample_step() == 0.1);
}

TEST_CASE("constant run is not oscillatory", "[reference]") {
    IntegrationRun run(1, 0.1, 100.0);
    for (auto& v : run.channel(0)) v = 3.0;
    CHECK_THROWS_AS(steady_state_extract(run, 64, 0.1), NotOscillatoryError);
}

TEST_CASE("FHN limit cycle period is stable", "[reference]") {
    const double init[2] = {1.0, 0.0};
    const auto run = ab2_integrate(single_cell_spec(), 0.01, 1200.0, init);
    const auto ss = steady_state_extract(run, 556, 0.1);
    REQUIRE(ss.crossings.size() >= 3);
    for (std::size_t k = 1; k < ss.crossings.size(); ++k) {
        const double cycle = ss.crossings[k] - ss.crossings[k - 1];
        CHECK(cycle == Approx(ss.period).epsilon(0.01));
    }
    double lo = 1e300, hi = -1e300;
    for (double v : ss.signals[0].samples()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi - lo >= 3.0);

    // moving the window by one period changes the resampled orbit by at most
    // about one sample of phase
    const double frac = ss.period / run.total();
    const auto shifted = steady_state_extract(run, 556, 0.1, {0.8 - frac, 1.0 - frac});
    CHECK(shifted.period == Approx(ss.period).epsilon(0.01));
    const auto al = circular_align(ss.signals[0], shifted.signals[0]);
    const std::size_t lag = std::min(al.shift, 556 - al.shift);
    CHECK(lag <= 1);
}

TEST_CASE("dense derivative is the periodic backward difference", "[reference][oracle]") {
    const auto d = dense_circulant_derivative(4, 0.5);
    Eigen::MatrixXd expect(4, 4);
    expect << 2, 0, 0, -2, -2, 2, 0, 0, 0, -2, 2, 0, 0, 0, -2, 2;
    CHECK((d - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dense resolvent oracle", "[reference][oracle]") {
    LosslessOperator cap_only;
    cap_only.cap = {1.0};
    cap_only.interconnect = Interconnect(0, 1);

    // alpha = 0 is the identity
    const auto id = dense_resolvent_oracle(cap_only, 0.0, 6, 0.1);
    CHECK((id - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-15);

    // N = 4, C = 1, h = 1, alpha = 1: I + D is 2 on the diagonal, -1 below
    // (cyclic). Its inverse is circulant with first column 2^{3-k} / 15.
    const auto inv = dense_resolvent_oracle(cap_only, 1.0, 4, 1.0);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const int k = ((r - c) % 4 + 4) % 4;
            CHECK(inv(r, c) == Approx(std::pow(2.0, 3 - k) / 15.0).margin(1e-14));
        }
    }

    LosslessOperator cell;
    cell.cap = {1.0};
    cell.ind = {20.0};
    cell.interconnect = Interconnect::identity(1);
    const auto s = dense_lossless_matrix(cell, 16, 0.1);
    const auto r = dense_resolvent_oracle(cell, 0.3, 16, 0.1);
    const Eigen::MatrixXd prod = r * (Eigen::MatrixXd::Identity(32, 32) + 0.3 * s);
    CHECK((prod - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff() <= 1e-10);

    CHECK_THROWS_AS(dense_resolvent_oracle(cell, 0.1, 2049, 0.1), DimensionError);
}

TEST_CASE("dense lossless matrix has the interconnect blocks", "[reference][oracle]") {
    LosslessOperator cell;
    cell.cap = {2.0};
    cell.ind = {3.0};
    cell.interconnect = Interconnect::identity(1);
    const auto s = dense_lossless_matrix(cell, 5, 0.1);
    const auto d = dense_circulant_derivative(5, 0.1);
    CHECK((s.topLeftCorner(5, 5) - 2.0 * d).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((s.bottomRightCorner(5, 5) - 3.0 * d).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((s.topRightCorner(5, 5) - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s.bottomLeftCorner(5, 5) + Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bisection prox oracle", "[reference][oracle]") {
    CHECK(prox_bisection_oracle(ScalarChannel::linear(1.0), 0.1, 1.0) == Approx(1.0 / 1.1).margin(1e-13));
    CHECK(prox_bisection_oracle(ScalarChannel::cubic(0.0), 0.1, 0.0) == Approx(0.0).margin(1e-13));
    const double x = prox_bisection_oracle(ScalarChannel::cubic(2.0), 0.5, -4.0);
    CHECK(x + 0.5 * (x * x * x / 3.0 + 2.0 * x) == Approx(-4.0).margin(1e-13));
}
