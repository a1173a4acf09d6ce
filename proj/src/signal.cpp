#include "monosim/signal.hpp"

#include "fft.hpp"
#include "monosim/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace monosim {

namespace {

void check_grid(std::size_t n, double h) {
    if (n < 2) throw DimensionError("periodic signal needs at least 2 samples, got " + std::to_string(n));
    if (!(h > 0.0) || !std::isfinite(h)) throw DimensionError("sample step must be positive and finite");
}

void check_same(const PeriodicSignal& a, const PeriodicSignal& b, const char* what) {
    if (a.size() != b.size() || a.sample_step() != b.sample_step()) {
        throw DimensionError(std::string(what) + ": signals differ in length or sample step (" +
                             std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
}

// Circular cross-correlation c[s] = sum_t a[t] b[t + s], accumulated over
// channel pairs.
std::vector<double> correlation(std::span<const PeriodicSignal> a, std::span<const PeriodicSignal> b) {
    const std::size_t n = a.front().size();
    const auto& plan = detail::FftPlan::get(n);
    std::vector<Complex> acc(n), fa(n), fb(n);
    for (std::size_t c = 0; c < a.size(); ++c) {
        plan.forward_real(a[c].samples(), fa);
        plan.forward_real(b[c].samples(), fb);
        for (std::size_t k = 0; k < n; ++k) acc[k] += std::conj(fa[k]) * fb[k];
    }
    std::vector<double> out(n);
    std::vector<Complex> scratch(n);
    detail::inverse_to_real(plan, acc, out, scratch);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// PeriodicSignal / Spectrum
// ---------------------------------------------------------------------------

PeriodicSignal::PeriodicSignal(std::vector<double> samples, double sample_step)
    : samples_(std::move(samples)), step_(sample_step) {
    check_grid(samples_.size(), step_);
}

PeriodicSignal PeriodicSignal::zeros(std::size_t num_samples, double sample_step) {
    return PeriodicSignal(std::vector<double>(num_samples, 0.0), sample_step);
}

double PeriodicSignal::at_wrapped(std::ptrdiff_t t) const noexcept {
    const auto n = static_cast<std::ptrdiff_t>(samples_.size());
    return samples_[static_cast<std::size_t>(((t % n) + n) % n)];
}

Spectrum::Spectrum(std::vector<Complex> bins, double sample_step) : bins_(std::move(bins)), step_(sample_step) {
    check_grid(bins_.size(), step_);
}

double inner_product(const PeriodicSignal& u, const PeriodicSignal& y) {
    check_same(u, y, "inner_product");
    double sum = 0.0;
    for (std::size_t t = 0; t < u.size(); ++t) sum += u[t] * y[t];
    return u.sample_step() * sum;
}

Spectrum to_spectrum(const PeriodicSignal& s) {
    std::vector<Complex> bins(s.size());
    detail::FftPlan::get(s.size()).forward_real(s.samples(), bins);
    return Spectrum(std::move(bins), s.sample_step());
}

PeriodicSignal from_spectrum(const Spectrum& sp) {
    const auto& plan = detail::FftPlan::get(sp.size());
    std::vector<double> out(sp.size());
    std::vector<Complex> scratch(sp.size());
    const double imag2 = detail::inverse_to_real(plan, sp.bins(), out, scratch);
    const double real_norm = l2_norm(out);
    if (std::sqrt(imag2) > 1e-6 * real_norm) {
        throw NumericError("inverse transform left an imaginary residue of " + format_double(std::sqrt(imag2)) +
                           " (real norm " + format_double(real_norm) + "); spectrum is not conjugate symmetric");
    }
    return PeriodicSignal(std::move(out), sp.sample_step());
}

PeriodicSignal rotate(const PeriodicSignal& s, std::ptrdiff_t shift) {
    std::vector<double> out(s.size());
    for (std::size_t t = 0; t < s.size(); ++t) out[t] = s.at_wrapped(static_cast<std::ptrdiff_t>(t) + shift);
    return PeriodicSignal(std::move(out), s.sample_step());
}

Alignment circular_align(const PeriodicSignal& a, const PeriodicSignal& b) {
    return circular_align(std::span(&a, 1), std::span(&b, 1));
}

Alignment circular_align(std::span<const PeriodicSignal> a, std::span<const PeriodicSignal> b) {
    if (a.size() != b.size() || a.empty()) throw DimensionError("circular_align: channel counts differ or are zero");
    for (std::size_t c = 0; c < a.size(); ++c) {
        check_same(a[c], b[c], "circular_align");
        check_same(a[c], a[0], "circular_align");
    }
    const auto corr = correlation(a, b);
    const auto best = static_cast<std::size_t>(std::max_element(corr.begin(), corr.end()) - corr.begin());

    double diff2 = 0.0, ref2 = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        for (std::size_t t = 0; t < a[c].size(); ++t) {
            const double d = a[c][t] - b[c].at_wrapped(static_cast<std::ptrdiff_t>(t + best));
            diff2 += d * d;
            ref2 += a[c][t] * a[c][t];
        }
    }
    const double err = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);
    return {best, err};
}

std::size_t circular_lag(const PeriodicSignal& a, const PeriodicSignal& b) {
    const auto shift = circular_align(a, b).shift;
    return std::min(shift, a.size() - shift);
}

// ---------------------------------------------------------------------------
// StackedTrajectory
// ---------------------------------------------------------------------------

StackedTrajectory::StackedTrajectory(std::size_t channels, std::size_t num_samples, double sample_step)
    : channels_(channels), samples_(num_samples), step_(sample_step), data_(channels * num_samples, 0.0) {
    check_grid(num_samples, sample_step);
}

PeriodicSignal StackedTrajectory::signal(std::size_t c) const {
    const auto ch = channel(c);
    return PeriodicSignal(std::vector<double>(ch.begin(), ch.end()), step_);
}

void StackedTrajectory::set_signal(std::size_t c, const PeriodicSignal& s) {
    if (s.size() != samples_ || s.sample_step() != step_) throw DimensionError("set_signal: grid mismatch");
    std::copy(s.samples().begin(), s.samples().end(), channel(c).begin());
}

double inner_product(const StackedTrajectory& u, const StackedTrajectory& y) {
    if (!u.same_shape(y)) throw DimensionError("inner_product: trajectory shapes differ");
    double sum = 0.0;
    for (std::size_t j = 0; j < u.total(); ++j) sum += u.data()[j] * y.data()[j];
    return u.sample_step() * sum;
}

double l2_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

StackedTrajectory combine(double a, const StackedTrajectory& x, double b, const StackedTrajectory& y) {
    if (!x.same_shape(y)) throw DimensionError("combine: trajectory shapes differ");
    StackedTrajectory out(x.channels(), x.num_samples(), x.sample_step());
    for (std::size_t j = 0; j < x.total(); ++j) out.data()[j] = a * x.data()[j] + b * y.data()[j];
    return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, std::span<const std::string> names, std::span<const PeriodicSignal> columns) {
    if (names.size() != columns.size()) throw DimensionError("write_csv: names and columns differ in count");
    if (columns.empty()) throw DimensionError("write_csv: no columns");
    for (const auto& c : columns) check_same(c, columns[0], "write_csv");

    out << "time";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    const double h = columns[0].sample_step();
    for (std::size_t k = 0; k < columns[0].size(); ++k) {
        out << format_double(static_cast<double>(k) * h);
        for (const auto& c : columns) out << ',' << format_double(c[k]);
        out << '\n';
    }
}

void write_csv(std::ostream& out, std::span<const std::string> names, const StackedTrajectory& x) {
    std::vector<PeriodicSignal> cols;
    cols.reserve(x.channels());
    for (std::size_t c = 0; c < x.channels(); ++c) cols.push_back(x.signal(c));
    write_csv(out, names, cols);
}

CsvTable read_csv(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    auto parse = [](const std::string& s, std::size_t row) {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw ConfigError("csv", "row " + std::to_string(row) + ": cannot parse '" + s + "'");
        }
        return v;
    };

    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv", "empty input");
    auto header = split(line);
    if (header.size() < 2 || header[0] != "time") throw ConfigError("csv", "header must start with 'time'");

    std::vector<double> times;
    std::vector<std::vector<double>> cols(header.size() - 1);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) throw ConfigError("csv", "row " + std::to_string(row) + ": wrong column count");
        times.push_back(parse(cells[0], row));
        for (std::size_t c = 1; c < cells.size(); ++c) cols[c - 1].push_back(parse(cells[c], row));
    }
    if (times.size() < 2) throw ConfigError("csv", "need at least two rows");
    const double h = times[1] - times[0];

    CsvTable table;
    table.names.assign(header.begin() + 1, header.end());
    for (auto& c : cols) table.columns.emplace_back(std::move(c), h);
    return table;
}

}  // namespace monosim
