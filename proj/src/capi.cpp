#include "monosim/monosim.h"

#include "monosim/analysis.hpp"
#include "monosim/bench.hpp"
#include "monosim/error.hpp"
#include "monosim/netbuild.hpp"
#include "monosim/validate.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <unistd.h>

struct monosim_config {
    monosim::RunConfig cfg;
};

struct monosim_solution {
    monosim::RunConfig cfg;
    monosim::SolveResult result;
};

struct monosim_comparison {
    monosim::RunConfig cfg;
    monosim::Comparison cmp;
    monosim_solution solution;
};

namespace {

using json = nlohmann::json;

thread_local std::string g_error;
thread_local std::string g_field;

monosim_status fail(monosim_status status, std::string message, std::string field = {}) {
    g_error = std::move(message);
    g_field = std::move(field);
    return status;
}

template <class Fn>
monosim_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const monosim::ConfigError& e) {
        return fail(MONOSIM_ERR_CONFIG, e.what(), e.field());
    } catch (const monosim::DimensionError& e) {
        return fail(MONOSIM_ERR_DIMENSION, e.what());
    } catch (const monosim::NumericError& e) {
        return fail(MONOSIM_ERR_NUMERIC, e.what());
    } catch (const monosim::NotOscillatoryError& e) {
        return fail(MONOSIM_ERR_NOT_OSCILLATORY, e.what());
    } catch (const std::bad_alloc&) {
        return fail(MONOSIM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(MONOSIM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(MONOSIM_ERR_INTERNAL, "unknown exception");
    }
}

monosim_status null_argument(const char* what) {
    return fail(MONOSIM_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::vector<std::string> channel_names(std::size_t cells) {
    std::vector<std::string> names;
    if (cells == 1) return {"v", "i"};
    for (std::size_t k = 1; k <= cells; ++k) names.push_back("v" + std::to_string(k));
    for (std::size_t k = 1; k <= cells; ++k) names.push_back("i" + std::to_string(k));
    return names;
}

json synchrony_json(const monosim::SynchronyMetrics& m) {
    return {{"cells", m.cells},
            {"max_lag_samples", m.max_lag_samples},
            {"max_lag_fraction", m.max_lag_fraction},
            {"min_peak_to_peak", m.min_peak_to_peak},
            {"max_peak_to_peak", m.max_peak_to_peak}};
}

json report_json(const monosim::RunConfig& cfg, const monosim::SolveResult& res) {
    const auto& r = res.report;
    const std::size_t cells = cfg.network.size();
    json ptp = json::array();
    for (std::size_t c = 0; c < cells; ++c) ptp.push_back(monosim::peak_to_peak(res.x.channel(c)));

    json out = {{"converged", r.converged},
                {"iterations", r.iterations},
                {"tolerance", cfg.solver.tolerance},
                {"max_iterations", cfg.solver.max_iterations},
                {"alpha", cfg.solver.alpha},
                {"final_relative_change", r.residual_history.empty() ? 0.0 : r.residual_history.back()},
                {"inclusion_residual", r.inclusion_residual},
                {"setup_seconds", r.setup_seconds},
                {"iterate_seconds", r.iterate_seconds},
                {"cells", cells},
                {"channels", res.x.channels()},
                {"num_samples", res.x.num_samples()},
                {"sample_step", res.x.sample_step()},
                {"period", res.x.sample_step() * static_cast<double>(res.x.num_samples())},
                {"derivative_model", monosim::to_string(cfg.network.discretization.derivative_model)},
                {"peak_to_peak_voltage", ptp},
                {"warnings", r.warnings},
                {"residual_history", r.residual_history}};
    if (r.m2_min_eigenvalue) out["m2_min_eigenvalue"] = *r.m2_min_eigenvalue;
    if (cells > 1) out["synchrony"] = synchrony_json(monosim::synchrony_metrics(res.x, cells));
    return out;
}

void write_atomic(const std::string& path, std::string_view data) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.parent_path() / (".tmp." + target.filename().string() + "." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::ios_base::failure("cannot open " + tmp.string() + " for writing");
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        out.flush();
        if (!out) throw std::ios_base::failure("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::ios_base::failure("cannot rename into " + path + ": " + ec.message());
    }
}

monosim_status write_guarded(const std::string& path, const std::string& data) {
    try {
        write_atomic(path, data);
        return MONOSIM_OK;
    } catch (const std::exception& e) {
        return fail(MONOSIM_ERR_IO, e.what());
    }
}

}  // namespace

extern "C" {

const char* monosim_version(void) { return MONOSIM_VERSION; }
const char* monosim_last_error(void) { return g_error.c_str(); }
const char* monosim_last_error_field(void) { return g_field.c_str(); }
void monosim_string_free(char* s) { std::free(s); }

const char* monosim_status_name(monosim_status status) {
    switch (status) {
        case MONOSIM_OK: return "ok";
        case MONOSIM_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case MONOSIM_ERR_CONFIG: return "config";
        case MONOSIM_ERR_DIMENSION: return "dimension";
        case MONOSIM_ERR_NUMERIC: return "numeric";
        case MONOSIM_ERR_NOT_OSCILLATORY: return "not_oscillatory";
        case MONOSIM_ERR_IO: return "io";
        case MONOSIM_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

monosim_status monosim_config_parse(const char* text, size_t length, monosim_config** out) {
    if (!text || !out) return null_argument("text/out");
    return guarded([&] {
        auto cfg = std::make_unique<monosim_config>();
        cfg->cfg = monosim::parse_config(std::string_view(text, length));
        *out = cfg.release();
        return MONOSIM_OK;
    });
}

monosim_status monosim_config_load(const char* path, monosim_config** out) {
    if (!path || !out) return null_argument("path/out");
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(MONOSIM_ERR_IO, std::string("cannot read config file ") + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    return monosim_config_parse(text.data(), text.size(), out);
}

void monosim_config_free(monosim_config* cfg) { delete cfg; }

monosim_status monosim_config_serialize(const monosim_config* cfg, char** out) {
    if (!cfg || !out) return null_argument("cfg/out");
    return guarded([&] {
        *out = dup_string(monosim::serialize_config(cfg->cfg));
        return MONOSIM_OK;
    });
}

monosim_status monosim_config_cells(const monosim_config* cfg, size_t* cells) {
    if (!cfg || !cells) return null_argument("cfg/cells");
    *cells = cfg->cfg.network.size();
    return MONOSIM_OK;
}

monosim_status monosim_config_seed(const monosim_config* cfg, uint64_t* seed) {
    if (!cfg || !seed) return null_argument("cfg/seed");
    const auto* u = std::get_if<monosim::SeededUniform>(&cfg->cfg.solver.init);
    *seed = u ? u->seed : 0;
    return MONOSIM_OK;
}

monosim_status monosim_config_set_seed(monosim_config* cfg, uint64_t seed) {
    if (!cfg) return null_argument("cfg");
    auto* u = std::get_if<monosim::SeededUniform>(&cfg->cfg.solver.init);
    if (!u) return fail(MONOSIM_ERR_CONFIG, "solver.init: a seed applies only to seeded_uniform", "solver.seed");
    u->seed = seed;
    return MONOSIM_OK;
}

monosim_status monosim_config_set_max_iterations(monosim_config* cfg, size_t max_iterations) {
    if (!cfg) return null_argument("cfg");
    if (max_iterations < 1) return fail(MONOSIM_ERR_CONFIG, "solver.max_iterations: must be >= 1", "solver.max_iterations");
    cfg->cfg.solver.max_iterations = max_iterations;
    return MONOSIM_OK;
}

monosim_status monosim_config_set_ab2_step(monosim_config* cfg, double step) {
    if (!cfg) return null_argument("cfg");
    if (!(step > 0.0) || !std::isfinite(step)) {
        return fail(MONOSIM_ERR_CONFIG, "reference.ab2_step: must be > 0", "reference.ab2_step");
    }
    cfg->cfg.reference.ab2_step = step;
    return MONOSIM_OK;
}

monosim_status monosim_config_set_t_end(monosim_config* cfg, double t_end) {
    if (!cfg) return null_argument("cfg");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        return fail(MONOSIM_ERR_CONFIG, "reference.t_end: must be > 0", "reference.t_end");
    }
    cfg->cfg.reference.t_end = t_end;
    return MONOSIM_OK;
}

monosim_status monosim_simulate(const monosim_config* cfg, monosim_solution** out) {
    if (!cfg || !out) return null_argument("cfg/out");
    return guarded([&] {
        auto sol = std::make_unique<monosim_solution>();
        sol->cfg = cfg->cfg;
        sol->result = monosim::solve(monosim::build_network(cfg->cfg.network), cfg->cfg.solver);
        *out = sol.release();
        return MONOSIM_OK;
    });
}

void monosim_solution_free(monosim_solution* sol) { delete sol; }

int monosim_solution_converged(const monosim_solution* sol) { return sol && sol->result.report.converged ? 1 : 0; }

size_t monosim_solution_iterations(const monosim_solution* sol) { return sol ? sol->result.report.iterations : 0; }

monosim_status monosim_solution_trajectory(const monosim_solution* sol, const double** data, size_t* channels,
                                           size_t* num_samples, double* sample_step) {
    if (!sol) return null_argument("sol");
    const auto& x = sol->result.x;
    if (data) *data = x.data().data();
    if (channels) *channels = x.channels();
    if (num_samples) *num_samples = x.num_samples();
    if (sample_step) *sample_step = x.sample_step();
    return MONOSIM_OK;
}

monosim_status monosim_solution_report_json(const monosim_solution* sol, char** out) {
    if (!sol || !out) return null_argument("sol/out");
    return guarded([&] {
        *out = dup_string(report_json(sol->cfg, sol->result).dump(2) + "\n");
        return MONOSIM_OK;
    });
}

monosim_status monosim_solution_write_csv(const monosim_solution* sol, const char* path) {
    if (!sol || !path) return null_argument("sol/path");
    std::ostringstream csv;
    const auto names = channel_names(sol->cfg.network.size());
    const auto status = guarded([&] {
        monosim::write_csv(csv, names, sol->result.x);
        return MONOSIM_OK;
    });
    return status == MONOSIM_OK ? write_guarded(path, csv.str()) : status;
}

monosim_status monosim_compare(const monosim_config* cfg, monosim_comparison** out) {
    if (!cfg || !out) return null_argument("cfg/out");
    return guarded([&] {
        auto cmp = std::make_unique<monosim_comparison>();
        cmp->cfg = cfg->cfg;
        cmp->cmp = monosim::compare(cfg->cfg);
        cmp->solution.cfg = cfg->cfg;
        cmp->solution.result = cmp->cmp.dmdr;
        *out = cmp.release();
        return MONOSIM_OK;
    });
}

void monosim_comparison_free(monosim_comparison* cmp) { delete cmp; }

int monosim_comparison_converged(const monosim_comparison* cmp) { return cmp && cmp->cmp.dmdr.report.converged ? 1 : 0; }

const monosim_solution* monosim_comparison_solution(const monosim_comparison* cmp) {
    return cmp ? &cmp->solution : nullptr;
}

monosim_status monosim_comparison_report_json(const monosim_comparison* cmp, char** out) {
    if (!cmp || !out) return null_argument("cmp/out");
    return guarded([&] {
        const auto& c = cmp->cmp;
        const auto& rep = c.dmdr.report;
        const auto& ref = cmp->cfg.reference;
        const double t_end = ref.t_end ? *ref.t_end : 20.0 * c.dmdr_period;
        json doc = {{"relative_l2_error", c.relative_error},
                    {"alignment_shift", c.alignment.shift},
                    {"period_relative_difference", c.period_relative_difference},
                    {"dmdr",
                     {{"converged", rep.converged},
                      {"iterations", rep.iterations},
                      {"final_relative_change", rep.residual_history.empty() ? 0.0 : rep.residual_history.back()},
                      {"inclusion_residual", rep.inclusion_residual},
                      {"period", c.dmdr_period},
                      {"seconds", c.dmdr_seconds},
                      {"warnings", rep.warnings}}},
                    {"ab2",
                     {{"step", ref.ab2_step},
                      {"t_end", t_end},
                      {"transient_fraction", ref.transient_fraction},
                      {"period", c.reference_period},
                      {"cycles_in_window", c.reference.crossings.size() - 1},
                      {"seconds", c.reference_seconds}}}};
        if (c.dmdr_synchrony) {
            doc["synchrony"] = {{"dmdr", synchrony_json(*c.dmdr_synchrony)},
                                {"ab2", synchrony_json(*c.reference_synchrony)}};
        }
        *out = dup_string(doc.dump(2) + "\n");
        return MONOSIM_OK;
    });
}

monosim_status monosim_comparison_write_csv(const monosim_comparison* cmp, const char* path) {
    if (!cmp || !path) return null_argument("cmp/path");
    std::ostringstream csv;
    const auto status = guarded([&] {
        const auto base = channel_names(cmp->cfg.network.size());
        std::vector<std::string> names;
        std::vector<monosim::PeriodicSignal> cols;
        const auto& x = cmp->cmp.dmdr.x;
        for (std::size_t c = 0; c < x.channels(); ++c) {
            names.push_back("dmdr_" + base[c]);
            cols.push_back(x.signal(c));
        }
        for (std::size_t c = 0; c < x.channels(); ++c) {
            names.push_back("ab2_" + base[c]);
            cols.push_back(cmp->cmp.reference_aligned.signal(c));
        }
        monosim::write_csv(csv, names, cols);
        return MONOSIM_OK;
    });
    return status == MONOSIM_OK ? write_guarded(path, csv.str()) : status;
}

monosim_status monosim_bench(const size_t* sizes, size_t count, monosim_bench_row* rows) {
    if ((!sizes || !rows) && count > 0) return null_argument("sizes/rows");
    for (size_t k = 0; k < count; ++k) {
        if (sizes[k] < 2) return fail(MONOSIM_ERR_INVALID_ARGUMENT, "bench sizes must be >= 2");
        if (k > 0 && sizes[k] <= sizes[k - 1]) {
            return fail(MONOSIM_ERR_INVALID_ARGUMENT, "bench sizes must be strictly ascending");
        }
    }
    return guarded([&] {
        const auto op = monosim::build_fhn_cell(monosim::CellParams{}, sizes[0], 0.1).lossless;
        for (size_t k = 0; k < count; ++k) {
            const auto row = monosim::bench_resolvent(op, sizes[k]);
            rows[k] = monosim_bench_row{row.size, row.freq_ns, row.dense_ns.value_or(0.0), row.dense_ns ? 1 : 0};
        }
        return MONOSIM_OK;
    });
}

monosim_status monosim_validate(int flip_interconnect_sign, char** summary_json, int* all_passed) {
    if (!summary_json || !all_passed) return null_argument("summary_json/all_passed");
    return guarded([&] {
        monosim::ValidationOptions opts;
        opts.flip_interconnect_sign = flip_interconnect_sign != 0;
        const auto suites = monosim::run_validation(opts);
        json list = json::array();
        bool ok = true;
        for (const auto& s : suites) {
            ok = ok && s.passed;
            list.push_back({{"name", s.name},
                            {"passed", s.passed},
                            {"max_error", s.max_error},
                            {"tolerance", s.tolerance},
                            {"detail", s.detail}});
        }
        json doc = {{"all_passed", ok}, {"suites", list}};
        if (opts.flip_interconnect_sign) doc["injected_fault"] = "interconnect sign flipped in the frequency path";
        *summary_json = dup_string(doc.dump(2) + "\n");
        *all_passed = ok ? 1 : 0;
        return MONOSIM_OK;
    });
}

monosim_status monosim_write_file_atomic(const char* path, const char* data, size_t length) {
    if (!path || (!data && length > 0)) return null_argument("path/data");
    return write_guarded(path, std::string(data ? data : "", length));
}

}  // extern "C"
