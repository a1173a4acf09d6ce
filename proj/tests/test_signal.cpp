#include <catch2/catch_amalgamated.hpp>

#include "monosim/error.hpp"
#include "monosim/signal.hpp"
#include "support.hpp"

#include <numbers>
#include <sstream>

using namespace monosim;
using Catch::Approx;

namespace {

PeriodicSignal sine(std::size_t n, double h, double cycles, double phase = 0.0) {
    std::vector<double> s(n);
    for (std::size_t t = 0; t < n; ++t) {
        s[t] = std::sin(2.0 * std::numbers::pi * cycles * static_cast<double>(t) / static_cast<double>(n) + phase);
    }
    return {std::move(s), h};
}

}  // namespace

TEST_CASE("inner product of constants over one period", "[signal]") {
    const PeriodicSignal one(std::vector<double>(10, 1.0), 0.1);
    CHECK(inner_product(one, one) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sine and cosine are orthogonal over a full period", "[signal]") {
    const auto s = sine(64, 0.1, 1.0);
    const auto c = sine(64, 0.1, 1.0, 0.5 * std::numbers::pi);
    CHECK(std::abs(inner_product(s, c)) <= 1e-12);
}

TEST_CASE("inner product matches direct summation", "[signal]") {
    UniformSource rng(3);
    const auto u = testing::random_signal(rng, 64, 0.25);
    const auto y = testing::random_signal(rng, 64, 0.25);
    double sum = 0.0;
    for (std::size_t t = 0; t < 64; ++t) sum += u[t] * y[t];
    CHECK(inner_product(u, y) == 0.25 * sum);
}

TEST_CASE("inner product is symmetric and bilinear", "[signal][property]") {
    UniformSource rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = testing::random_signal(rng, 37, 0.1);
        const auto v = testing::random_signal(rng, 37, 0.1);
        const auto w = testing::random_signal(rng, 37, 0.1);
        const double a = rng.symmetric(3.0), b = rng.symmetric(3.0);
        std::vector<double> mix(37);
        for (std::size_t t = 0; t < 37; ++t) mix[t] = a * u[t] + b * v[t];
        const PeriodicSignal m(mix, 0.1);
        CHECK(inner_product(u, v) == inner_product(v, u));
        CHECK(inner_product(m, w) == Approx(a * inner_product(u, w) + b * inner_product(v, w)).margin(1e-12));
    }
}

TEST_CASE("inner product rejects mismatched grids", "[signal]") {
    const auto a = PeriodicSignal::zeros(8, 0.1);
    CHECK_THROWS_AS(inner_product(a, PeriodicSignal::zeros(9, 0.1)), DimensionError);
    CHECK_THROWS_AS(inner_product(a, PeriodicSignal::zeros(8, 0.2)), DimensionError);
}

TEST_CASE("signal invariants are enforced", "[signal]") {
    CHECK_THROWS_AS(PeriodicSignal(std::vector<double>{1.0}, 0.1), DimensionError);
    CHECK_THROWS_AS(PeriodicSignal(std::vector<double>{1.0, 2.0}, 0.0), DimensionError);
}

TEST_CASE("spectrum of a constant is a DC spike", "[signal]") {
    const PeriodicSignal c(std::vector<double>(12, 2.5), 0.1);
    const auto sp = to_spectrum(c);
    CHECK(sp[0].real() == Approx(12 * 2.5));
    for (std::size_t k = 1; k < 12; ++k) CHECK(std::abs(sp[k]) <= 1e-12);
}

TEST_CASE("spectrum of a unit impulse is flat", "[signal]") {
    std::vector<double> d(10, 0.0);
    d[0] = 1.0;
    const auto sp = to_spectrum(PeriodicSignal(d, 0.1));
    for (std::size_t k = 0; k < 10; ++k) CHECK(std::abs(sp[k] - Complex(1.0, 0.0)) <= 1e-14);
}

TEST_CASE("forward transform matches the direct DFT", "[signal]") {
    UniformSource rng(5);
    for (std::size_t n : {2, 3, 7, 16, 139}) {
        const auto s = testing::random_signal(rng, n, 0.1);
        const auto sp = to_spectrum(s);
        const auto ref = testing::direct_dft(s.samples());
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(sp[k] - ref[k]) <= 1e-11 * static_cast<double>(n));
    }
}

TEST_CASE("round trip is the identity for composite and prime lengths", "[signal][property]") {
    UniformSource rng(7);
    for (std::size_t n : {2, 3, 4, 139, 556, 1024}) {
        const auto s = testing::random_signal(rng, n, 0.1);
        const auto back = from_spectrum(to_spectrum(s));
        std::vector<double> diff(n);
        for (std::size_t t = 0; t < n; ++t) diff[t] = back[t] - s[t];
        CHECK(l2_norm(diff) <= 1e-10 * l2_norm(s.samples()));

        // reverse direction: spectrum -> signal -> spectrum
        const auto sp = to_spectrum(s);
        const auto sp2 = to_spectrum(from_spectrum(sp));
        double d2 = 0.0, r2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            d2 += std::norm(sp2[k] - sp[k]);
            r2 += std::norm(sp[k]);
        }
        CHECK(std::sqrt(d2) <= 1e-10 * std::sqrt(r2));
    }
}

TEST_CASE("zero spectrum gives the zero signal", "[signal]") {
    const Spectrum sp(std::vector<Complex>(9), 0.1);
    const auto s = from_spectrum(sp);
    for (std::size_t t = 0; t < 9; ++t) CHECK(s[t] == 0.0);
}

TEST_CASE("broken conjugate symmetry is rejected", "[signal]") {
    UniformSource rng(9);
    auto sp = to_spectrum(testing::random_signal(rng, 16, 0.1));
    sp[1] += 1.0;
    CHECK_THROWS_AS(from_spectrum(sp), NumericError);
}

TEST_CASE("Parseval holds under the project convention", "[signal][property]") {
    UniformSource rng(13);
    for (std::size_t n : {5, 64, 556}) {
        const auto u = testing::random_signal(rng, n, 0.1);
        const auto sp = to_spectrum(u);
        double energy = 0.0;
        for (std::size_t k = 0; k < n; ++k) energy += std::norm(sp[k]);
        energy *= 0.1 / static_cast<double>(n);
        CHECK(inner_product(u, u) == Approx(energy).epsilon(1e-9));
    }
}

TEST_CASE("circular alignment recovers rotations", "[signal]") {
    UniformSource rng(17);
    const auto a = testing::random_signal(rng, 50, 0.1);

    const auto same = circular_align(a, a);
    CHECK(same.shift == 0);
    CHECK(same.error == 0.0);

    // b[t] = a[t - 7]: rotating b forward by 7 restores a.
    const auto b = rotate(a, -7);
    const auto al = circular_align(a, b);
    CHECK(al.shift == 7);
    CHECK(al.error <= 1e-15);
    CHECK(circular_lag(a, b) == 7);
    CHECK(circular_lag(b, a) == 7);
}

TEST_CASE("circular alignment error under small noise", "[signal]") {
    UniformSource rng(19);
    const auto a = sine(200, 0.1, 1.0);
    std::vector<double> noisy(200);
    for (std::size_t t = 0; t < 200; ++t) noisy[t] = a[t] + rng.symmetric(1e-3);
    const auto al = circular_align(a, PeriodicSignal(noisy, 0.1));
    CHECK(al.shift == 0);
    CHECK(al.error <= 2e-3);
}

TEST_CASE("multi-channel alignment uses one shift", "[signal]") {
    UniformSource rng(23);
    std::vector<PeriodicSignal> a{testing::random_signal(rng, 40, 0.1), testing::random_signal(rng, 40, 0.1)};
    std::vector<PeriodicSignal> b{rotate(a[0], 11), rotate(a[1], 11)};
    const auto al = circular_align(a, b);
    CHECK(al.shift == 40 - 11);
    CHECK(al.error <= 1e-15);
}

TEST_CASE("stacked trajectory accessors", "[signal]") {
    StackedTrajectory x(3, 4, 0.5);
    x(2, 3) = 7.0;
    CHECK(x.channel(2)[3] == 7.0);
    CHECK(x.data()[11] == 7.0);
    CHECK(x.signal(2)[3] == 7.0);
    x.set_signal(0, PeriodicSignal(std::vector<double>{1, 2, 3, 4}, 0.5));
    CHECK(x(0, 1) == 2.0);
    CHECK_THROWS_AS(x.set_signal(1, PeriodicSignal::zeros(5, 0.5)), DimensionError);
}

TEST_CASE("CSV trajectory round trip", "[signal]") {
    UniformSource rng(29);
    const auto x = testing::random_trajectory(rng, 2, 6, 0.1);
    const std::vector<std::string> names{"v", "i"};
    std::stringstream csv;
    write_csv(csv, names, x);

    std::string header;
    std::getline(std::stringstream(csv.str()), header);
    CHECK(header == "time,v,i");

    const auto table = read_csv(csv);
    REQUIRE(table.names == names);
    REQUIRE(table.columns.size() == 2);
    CHECK(table.columns[0].sample_step() == Approx(0.1));
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t t = 0; t < 6; ++t) CHECK(table.columns[c][t] == x(c, t));
    }
}
