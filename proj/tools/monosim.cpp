// monosim command-line front end. Talks to the library only through the C API.

#include "monosim/monosim.h"
#include "svg_plot.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

enum ExitCode : int {
    kOk = 0,
    kUserError = 1,
    kNotConverged = 2,
    kNotOscillatory = 3,
};

/// Thrown to unwind to main with a message and exit code.
struct Failure {
    int code;
    std::string message;
};

[[noreturn]] void raise_status(monosim_status status, const std::string& context) {
    std::string msg = context + ": " + monosim_last_error();
    throw Failure{status == MONOSIM_ERR_NOT_OSCILLATORY ? kNotOscillatory : kUserError, msg};
}

void check(monosim_status status, const std::string& context) {
    if (status != MONOSIM_OK) raise_status(status, context);
}

std::string take(char* s) {
    std::string out(s);
    monosim_string_free(s);
    return out;
}

template <class T, void (*Free)(T*)>
struct Handle {
    T* ptr = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(ptr); }
};

using ConfigHandle = Handle<monosim_config, monosim_config_free>;
using SolutionHandle = Handle<monosim_solution, monosim_solution_free>;
using ComparisonHandle = Handle<monosim_comparison, monosim_comparison_free>;

void prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Failure{kUserError, "cannot create output directory " + dir};
}

void write_text(const fs::path& path, const std::string& text) {
    check(monosim_write_file_atomic(path.c_str(), text.data(), text.size()), "writing " + path.string());
}

void load_config(ConfigHandle& cfg, const std::string& path) {
    check(monosim_config_load(path.c_str(), &cfg.ptr), "config " + path);
}

json manifest_base(const std::string& command) {
    return {{"tool", "monosim"}, {"version", monosim_version()}, {"command", command}};
}

std::string orbit_svg(const monosim_solution* sol, std::size_t cells) {
    const double* data = nullptr;
    std::size_t channels = 0, n = 0;
    double h = 0.0;
    check(monosim_solution_trajectory(sol, &data, &channels, &n, &h), "trajectory");

    std::vector<monosim_cli::Panel> panels(2);
    panels[0] = {"Capacitor voltages (one period)", "v [V]", {}};
    panels[1] = {"Inductor currents (one period)", "i [A]", {}};
    for (std::size_t c = 0; c < channels; ++c) {
        const bool voltage = c < cells;
        const std::size_t cell = voltage ? c : c - cells;
        std::string name = std::string(voltage ? "v" : "i") + (cells > 1 ? std::to_string(cell + 1) : "");
        panels[voltage ? 0 : 1].series.push_back({name, std::vector<double>(data + c * n, data + (c + 1) * n)});
    }
    return monosim_cli::render_svg(panels, h, "t [s]");
}

int run_simulate(const std::string& config_path, const std::string& out, std::optional<std::uint64_t> seed) {
    ConfigHandle cfg;
    load_config(cfg, config_path);
    if (seed) check(monosim_config_set_seed(cfg.ptr, *seed), "--seed");
    prepare_dir(out);

    SolutionHandle sol;
    check(monosim_simulate(cfg.ptr, &sol.ptr), "simulate");
    std::size_t cells = 0;
    check(monosim_config_cells(cfg.ptr, &cells), "config");
    std::uint64_t resolved_seed = 0;
    check(monosim_config_seed(cfg.ptr, &resolved_seed), "config");

    char* report_raw = nullptr;
    check(monosim_solution_report_json(sol.ptr, &report_raw), "report");
    const std::string report = take(report_raw);
    const auto rep = json::parse(report);

    const fs::path dir(out);
    check(monosim_solution_write_csv(sol.ptr, (dir / "trajectory.csv").c_str()), "trajectory.csv");
    write_text(dir / "report.json", report);
    write_text(dir / "orbit.svg", orbit_svg(sol.ptr, cells));

    auto manifest = manifest_base("simulate");
    manifest["config"] = config_path;
    manifest["seed"] = resolved_seed;
    manifest["outputs"] = {"trajectory.csv", "report.json", "orbit.svg", "manifest.json"};
    manifest["converged"] = rep["converged"];
    manifest["iterations"] = rep["iterations"];
    manifest["residuals"] = {{"final_relative_change", rep["final_relative_change"]},
                             {"inclusion_residual", rep["inclusion_residual"]}};
    manifest["timings"] = {{"setup_seconds", rep["setup_seconds"]}, {"iterate_seconds", rep["iterate_seconds"]}};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");

    for (const auto& w : rep["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
    const bool converged = monosim_solution_converged(sol.ptr) != 0;
    std::cout << (converged ? "converged" : "did not converge") << " after " << rep["iterations"]
              << " iterations; outputs in " << out << "\n";
    return converged ? kOk : kNotConverged;
}

int run_compare(const std::string& config_path, const std::string& out, std::optional<double> ab2_step,
                std::optional<double> t_end) {
    ConfigHandle cfg;
    load_config(cfg, config_path);
    if (ab2_step) check(monosim_config_set_ab2_step(cfg.ptr, *ab2_step), "--ab2-step");
    if (t_end) check(monosim_config_set_t_end(cfg.ptr, *t_end), "--t-end");
    prepare_dir(out);

    ComparisonHandle cmp;
    check(monosim_compare(cfg.ptr, &cmp.ptr), "compare");
    std::uint64_t resolved_seed = 0;
    check(monosim_config_seed(cfg.ptr, &resolved_seed), "config");

    char* raw = nullptr;
    check(monosim_comparison_report_json(cmp.ptr, &raw), "comparison report");
    const std::string report = take(raw);
    const auto rep = json::parse(report);

    const fs::path dir(out);
    check(monosim_comparison_write_csv(cmp.ptr, (dir / "comparison.csv").c_str()), "comparison.csv");
    write_text(dir / "comparison.json", report);

    auto manifest = manifest_base("compare");
    manifest["config"] = config_path;
    manifest["seed"] = resolved_seed;
    manifest["outputs"] = {"comparison.csv", "comparison.json", "manifest.json"};
    manifest["converged"] = rep["dmdr"]["converged"];
    manifest["residuals"] = {{"final_relative_change", rep["dmdr"]["final_relative_change"]},
                             {"inclusion_residual", rep["dmdr"]["inclusion_residual"]},
                             {"relative_l2_error", rep["relative_l2_error"]}};
    manifest["timings"] = {{"dmdr_seconds", rep["dmdr"]["seconds"]}, {"ab2_seconds", rep["ab2"]["seconds"]}};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");

    for (const auto& w : rep["dmdr"]["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
    std::cout << "relative L2 error " << rep["relative_l2_error"] << ", periods dmdr " << rep["dmdr"]["period"]
              << " s / ab2 " << rep["ab2"]["period"] << " s\n";
    return monosim_comparison_converged(cmp.ptr) ? kOk : kNotConverged;
}

int run_bench(const std::vector<std::size_t>& sizes, const std::string& out) {
    if (sizes.empty()) throw Failure{kUserError, "--sizes: at least one size is required"};
    prepare_dir(out);
    std::vector<monosim_bench_row> rows(sizes.size());
    const auto t0 = std::chrono::steady_clock::now();
    check(monosim_bench(sizes.data(), sizes.size(), rows.data()), "bench");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string csv = "size,freq_ns,dense_ns\n";
    for (const auto& r : rows) {
        csv += std::to_string(r.size) + "," + json(r.freq_ns).dump() + "," + (r.has_dense ? json(r.dense_ns).dump() : "") +
               "\n";
    }
    const fs::path dir(out);
    write_text(dir / "bench.csv", csv);
    auto manifest = manifest_base("bench");
    manifest["sizes"] = sizes;
    manifest["outputs"] = {"bench.csv", "manifest.json"};
    manifest["timings"] = {{"total_seconds", seconds}};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    std::cout << csv;
    return kOk;
}

int run_validate(const std::string& out, bool flip) {
    prepare_dir(out);
    char* raw = nullptr;
    int all_passed = 0;
    check(monosim_validate(flip ? 1 : 0, &raw, &all_passed), "validate");
    const std::string summary = take(raw);
    const fs::path dir(out);
    write_text(dir / "validate.json", summary);
    auto manifest = manifest_base("validate");
    manifest["outputs"] = {"validate.json", "manifest.json"};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");

    const auto parsed = json::parse(summary);
    for (const auto& s : parsed["suites"]) {
        const bool ok = s["passed"].get<bool>();
        std::cout << (ok ? "PASS " : "FAIL ") << s["name"].get<std::string>() << "  max_error=" << s["max_error"]
                  << " tolerance=" << s["tolerance"] << "\n";
        if (!ok) std::cerr << "failed oracle: " << s["name"].get<std::string>() << "\n";
    }
    return all_passed ? kOk : kUserError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic steady-state simulator for nonlinear RLC networks"};
    app.set_version_flag("--version", std::string(monosim_version()));
    app.require_subcommand(1);

    std::string config, out;
    std::optional<std::uint64_t> seed;
    std::optional<double> ab2_step, t_end;
    std::vector<std::size_t> sizes;
    bool flip = false;

    auto* sim = app.add_subcommand("simulate", "Solve for the periodic steady state");
    sim->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", out, "Output directory")->required();
    sim->add_option("--seed", seed, "Override the initialization seed");

    auto* cmp = app.add_subcommand("compare", "Solve and compare against AB2 time integration");
    cmp->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    cmp->add_option("--out", out, "Output directory")->required();
    cmp->add_option("--ab2-step", ab2_step, "AB2 step size in seconds");
    cmp->add_option("--t-end", t_end, "AB2 integration horizon in seconds");

    auto* bench = app.add_subcommand("bench", "Time the lossless resolvent against a dense matvec");
    bench->add_option("--sizes", sizes, "Ascending sample counts, comma separated")->required()->delimiter(',');
    bench->add_option("--out", out, "Output directory")->required();

    auto* val = app.add_subcommand("validate", "Run the oracle equivalence suites");
    val->add_option("--out", out, "Output directory")->required();
    val->add_flag("--debug-flip-interconnect", flip)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUserError;
    }

    try {
        if (*sim) return run_simulate(config, out, seed);
        if (*cmp) return run_compare(config, out, ab2_step, t_end);
        if (*bench) return run_bench(sizes, out);
        return run_validate(out, flip);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUserError;
    }
}
