#include "monosim/lossless.hpp"

#include "fft.hpp"
#include "monosim/error.hpp"
#include "parallel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace monosim {

namespace {

// Channel-major spectra of every channel of x.
std::vector<Complex> to_spectra(const StackedTrajectory& x) {
    const std::size_t n = x.num_samples();
    const auto& plan = detail::FftPlan::get(n);
    std::vector<Complex> out(x.channels() * n);
    const auto channels = static_cast<std::ptrdiff_t>(x.channels());
#pragma omp parallel for num_threads(detail::threads_for(x.total())) schedule(static)
    for (std::ptrdiff_t c = 0; c < channels; ++c) {
        plan.forward_real(x.channel(static_cast<std::size_t>(c)), std::span(out).subspan(static_cast<std::size_t>(c) * n, n));
    }
    return out;
}

// Inverse of to_spectra. Throws when the discarded imaginary part is not
// negligible relative to the real result; `floor` absorbs round-off when the
// result itself is (near) zero.
void from_spectra(std::span<const Complex> spectra, StackedTrajectory& out, double floor, const char* what) {
    const std::size_t n = out.num_samples();
    const auto& plan = detail::FftPlan::get(n);
    const auto channels = static_cast<std::ptrdiff_t>(out.channels());
    double imag2 = 0.0;
#pragma omp parallel for num_threads(detail::threads_for(out.total())) schedule(static) reduction(+ : imag2)
    for (std::ptrdiff_t c = 0; c < channels; ++c) {
        std::vector<Complex> scratch(n);
        const auto ch = static_cast<std::size_t>(c);
        imag2 += detail::inverse_to_real(plan, spectra.subspan(ch * n, n), out.channel(ch), scratch);
    }
    const double real_norm = l2_norm(out.data());
    if (std::sqrt(imag2) > 1e-6 * real_norm + floor) {
        throw NumericError(std::string(what) + ": imaginary residue " + format_double(std::sqrt(imag2)) +
                           " exceeds 1e-6 of the real norm " + format_double(real_norm));
    }
}

void check_grid(const LosslessOperator& op, const StackedTrajectory& x, const char* what) {
    if (x.channels() != op.channels()) {
        throw DimensionError(std::string(what) + ": trajectory has " + std::to_string(x.channels()) +
                             " channels, operator has " + std::to_string(op.channels()));
    }
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

const char* to_string(DerivativeModel m) noexcept {
    switch (m) {
        case DerivativeModel::CirculantBackwardEuler: return "circulant_backward_euler";
        case DerivativeModel::Spectral: return "spectral";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Interconnect / LosslessOperator
// ---------------------------------------------------------------------------

Interconnect::Interconnect(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

Interconnect Interconnect::identity(std::size_t n) {
    Interconnect m(n, n);
    for (std::size_t k = 0; k < n; ++k) m.set(k, k, 1);
    return m;
}

void Interconnect::set(std::size_t r, std::size_t c, int value) {
    if (value < -1 || value > 1) throw ConfigError("interconnect", "entries must be -1, 0 or +1");
    entries_[r * cols_ + c] = static_cast<std::int8_t>(value);
}

void LosslessOperator::validate() const {
    for (std::size_t j = 0; j < cap.size(); ++j) {
        if (!(cap[j] > 0.0) || !std::isfinite(cap[j])) throw ConfigError("cap[" + std::to_string(j) + "]", "must be > 0");
    }
    for (std::size_t j = 0; j < ind.size(); ++j) {
        if (!(ind[j] > 0.0) || !std::isfinite(ind[j])) throw ConfigError("ind[" + std::to_string(j) + "]", "must be > 0");
    }
    if (interconnect.rows() != ind.size() || interconnect.cols() != cap.size()) {
        throw DimensionError("interconnect must be " + std::to_string(ind.size()) + "x" + std::to_string(cap.size()));
    }
}

// ---------------------------------------------------------------------------
// Derivative eigenvalues
// ---------------------------------------------------------------------------

std::vector<Complex> derivative_eigenvalues(std::size_t num_samples, double sample_step, DerivativeModel model) {
    if (num_samples < 2) throw DimensionError("derivative_eigenvalues: need at least 2 samples");
    if (!(sample_step > 0.0)) throw DimensionError("derivative_eigenvalues: sample step must be > 0");

    const double n = static_cast<double>(num_samples);
    std::vector<Complex> lambda(num_samples);
    for (std::size_t k = 0; k < num_samples; ++k) {
        if (k == 0) continue;
        if (model == DerivativeModel::CirculantBackwardEuler) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / n;
            // 1 - exp(-i theta), written to keep the real part exact near theta = 0
            const double s = std::sin(0.5 * theta);
            lambda[k] = Complex(2.0 * s * s, std::sin(theta)) / sample_step;
        } else {
            if (2 * k == num_samples) continue;  // Nyquist: derivative is zero on the grid
            const double freq = 2 * k < num_samples ? static_cast<double>(k) : static_cast<double>(k) - n;
            lambda[k] = Complex(0.0, 2.0 * std::numbers::pi * freq / (n * sample_step));
        }
    }
    return lambda;
}

// ---------------------------------------------------------------------------
// FactorizedResolvent
// ---------------------------------------------------------------------------

FactorizedResolvent::FactorizedResolvent(const LosslessOperator& op, double alpha, std::size_t num_samples,
                                         double sample_step)
    : alpha_(alpha), num_samples_(num_samples), sample_step_(sample_step), channels_(op.channels()) {
    op.validate();
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha", "must be >= 0");

    const std::size_t nv = op.voltage_channels();
    UnionFind uf(channels_);
    for (std::size_t m = 0; m < op.current_channels(); ++m) {
        for (std::size_t j = 0; j < nv; ++j) {
            if (op.interconnect.at(m, j) != 0) uf.unite(j, nv + m);
        }
    }
    std::vector<std::ptrdiff_t> group_of(channels_, -1);
    for (std::size_t c = 0; c < channels_; ++c) {
        const auto root = uf.find(c);
        if (group_of[root] < 0) {
            group_of[root] = static_cast<std::ptrdiff_t>(groups_.size());
            groups_.emplace_back();
        }
        groups_[static_cast<std::size_t>(group_of[root])].channels.push_back(c);
    }

    const auto lambda = derivative_eigenvalues(num_samples, sample_step, op.derivative_model);

    // Entry (a, b) of I + alpha S restricted to a group, at bin k.
    auto entry = [&](std::size_t a, std::size_t b, std::size_t k) -> Complex {
        const bool va = a < nv, vb = b < nv;
        if (a == b) return 1.0 + alpha * (va ? op.cap[a] : op.ind[a - nv]) * lambda[k];
        if (va && !vb) return alpha * static_cast<double>(op.interconnect.at(b - nv, a));
        if (!va && vb) return -alpha * static_cast<double>(op.interconnect.at(a - nv, b));
        return 0.0;
    };

    for (auto& g : groups_) {
        const auto& ch = g.channels;
        if (ch.size() == 1) {
            g.closed_form.resize(num_samples);
            for (std::size_t k = 0; k < num_samples; ++k) {
                const Complex d = entry(ch[0], ch[0], k);
                if (std::abs(d) == 0.0) throw NumericError("singular resolvent at bin " + std::to_string(k));
                g.closed_form[k] = 1.0 / d;
            }
        } else if (ch.size() == 2) {
            g.closed_form.resize(4 * num_samples);
            for (std::size_t k = 0; k < num_samples; ++k) {
                const Complex a = entry(ch[0], ch[0], k), b = entry(ch[0], ch[1], k);
                const Complex c = entry(ch[1], ch[0], k), d = entry(ch[1], ch[1], k);
                const Complex det = a * d - b * c;
                if (std::abs(det) <= 1e-14 * (std::abs(a * d) + std::abs(b * c))) {
                    throw NumericError("singular resolvent at bin " + std::to_string(k));
                }
                Complex* inv = &g.closed_form[4 * k];
                inv[0] = d / det;
                inv[1] = -b / det;
                inv[2] = -c / det;
                inv[3] = a / det;
            }
        } else {
            const auto size = static_cast<Eigen::Index>(ch.size());
            g.lu.reserve(num_samples);
            Eigen::MatrixXcd m(size, size);
            for (std::size_t k = 0; k < num_samples; ++k) {
                for (Eigen::Index r = 0; r < size; ++r) {
                    for (Eigen::Index c = 0; c < size; ++c) {
                        m(r, c) = entry(ch[static_cast<std::size_t>(r)], ch[static_cast<std::size_t>(c)], k);
                    }
                }
                g.lu.emplace_back(m);
                if (!(g.lu.back().rcond() > 1e-14)) throw NumericError("singular resolvent at bin " + std::to_string(k));
            }
        }
    }
}

bool FactorizedResolvent::fully_decoupled() const noexcept {
    for (const auto& g : groups_) {
        if (g.channels.size() > 2) return false;
    }
    return true;
}

Eigen::MatrixXcd FactorizedResolvent::bin_inverse(std::size_t k) const {
    const auto n = static_cast<Eigen::Index>(channels_);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& g : groups_) {
        const auto& ch = g.channels;
        const auto idx = [&](std::size_t a) { return static_cast<Eigen::Index>(ch[a]); };
        if (ch.size() == 1) {
            out(idx(0), idx(0)) = g.closed_form[k];
        } else if (ch.size() == 2) {
            const Complex* inv = &g.closed_form[4 * k];
            out(idx(0), idx(0)) = inv[0];
            out(idx(0), idx(1)) = inv[1];
            out(idx(1), idx(0)) = inv[2];
            out(idx(1), idx(1)) = inv[3];
        } else {
            const Eigen::MatrixXcd inv = g.lu[k].inverse();
            for (std::size_t a = 0; a < ch.size(); ++a) {
                for (std::size_t b = 0; b < ch.size(); ++b) {
                    out(idx(a), idx(b)) = inv(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                }
            }
        }
    }
    return out;
}

void FactorizedResolvent::solve_spectra(std::span<Complex> spectra) const {
    const std::size_t n = num_samples_;
    const auto group_count = static_cast<std::ptrdiff_t>(groups_.size());
#pragma omp parallel for num_threads(detail::threads_for(spectra.size(), 8192)) schedule(static)
    for (std::ptrdiff_t gi = 0; gi < group_count; ++gi) {
        const auto& g = groups_[static_cast<std::size_t>(gi)];
        const auto& ch = g.channels;
        if (ch.size() == 1) {
            Complex* x = &spectra[ch[0] * n];
            for (std::size_t k = 0; k < n; ++k) x[k] *= g.closed_form[k];
        } else if (ch.size() == 2) {
            Complex* x0 = &spectra[ch[0] * n];
            Complex* x1 = &spectra[ch[1] * n];
            for (std::size_t k = 0; k < n; ++k) {
                const Complex* inv = &g.closed_form[4 * k];
                const Complex a = x0[k], b = x1[k];
                x0[k] = inv[0] * a + inv[1] * b;
                x1[k] = inv[2] * a + inv[3] * b;
            }
        } else {
            Eigen::VectorXcd rhs(static_cast<Eigen::Index>(ch.size()));
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t a = 0; a < ch.size(); ++a) rhs(static_cast<Eigen::Index>(a)) = spectra[ch[a] * n + k];
                const Eigen::VectorXcd sol = g.lu[k].solve(rhs);
                for (std::size_t a = 0; a < ch.size(); ++a) spectra[ch[a] * n + k] = sol(static_cast<Eigen::Index>(a));
            }
        }
    }
}

FactorizedResolvent setup_resolvent(const LosslessOperator& op, double alpha, std::size_t num_samples,
                                    double sample_step) {
    if (!(alpha > 0.0)) throw ConfigError("alpha", "must be > 0");
    return FactorizedResolvent(op, alpha, num_samples, sample_step);
}

StackedTrajectory apply_resolvent(const FactorizedResolvent& f, const StackedTrajectory& z) {
    if (z.channels() != f.channels() || z.num_samples() != f.num_samples() || z.sample_step() != f.sample_step()) {
        throw DimensionError("apply_resolvent: trajectory shape does not match the factorization");
    }
    auto spectra = to_spectra(z);
    f.solve_spectra(spectra);
    StackedTrajectory x(z.channels(), z.num_samples(), z.sample_step());
    from_spectra(spectra, x, 1e-12 * l2_norm(z.data()), "apply_resolvent");
    return x;
}

StackedTrajectory apply_forward(const LosslessOperator& op, const StackedTrajectory& x) {
    op.validate();
    check_grid(op, x, "apply_forward");
    const std::size_t n = x.num_samples();
    const auto lambda = derivative_eigenvalues(n, x.sample_step(), op.derivative_model);

    auto spectra = to_spectra(x);
    for (std::size_t c = 0; c < x.channels(); ++c) {
        for (std::size_t k = 0; k < n; ++k) spectra[c * n + k] *= lambda[k];
    }
    double lambda_max = 0.0;
    for (const auto& l : lambda) lambda_max = std::max(lambda_max, std::abs(l));
    StackedTrajectory dx(x.channels(), n, x.sample_step());
    from_spectra(spectra, dx, 1e-12 * lambda_max * l2_norm(x.data()), "apply_forward");

    const std::size_t nv = op.voltage_channels();
    StackedTrajectory out(x.channels(), n, x.sample_step());
    for (std::size_t j = 0; j < nv; ++j) {
        auto row = out.channel(j);
        const auto d = dx.channel(j);
        for (std::size_t t = 0; t < n; ++t) row[t] = op.cap[j] * d[t];
        for (std::size_t m = 0; m < op.current_channels(); ++m) {
            const int s = op.interconnect.at(m, j);
            if (s == 0) continue;
            const auto i = x.channel(nv + m);
            for (std::size_t t = 0; t < n; ++t) row[t] += s * i[t];
        }
    }
    for (std::size_t m = 0; m < op.current_channels(); ++m) {
        auto row = out.channel(nv + m);
        const auto d = dx.channel(nv + m);
        for (std::size_t t = 0; t < n; ++t) row[t] = op.ind[m] * d[t];
        for (std::size_t j = 0; j < nv; ++j) {
            const int s = op.interconnect.at(m, j);
            if (s == 0) continue;
            const auto v = x.channel(j);
            for (std::size_t t = 0; t < n; ++t) row[t] -= s * v[t];
        }
    }
    return out;
}

}  // namespace monosim
