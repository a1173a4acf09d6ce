#include <catch2/catch_amalgamated.hpp>

#include "monosim/monosim.h"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using json = nlohmann::json;
using Catch::Approx;

namespace {

namespace fs = std::filesystem;

// One cell on a grid whose period matches the free-running limit cycle.
constexpr const char* kMatched = R"({
  "cells": [{"C": 1, "L": 20, "R": 1}],
  "discretization": {"num_samples": 556, "sample_step": 0.0998797876983241, "derivative_model": "spectral"},
  "solver": {"alpha": 0.1, "tolerance": 1e-6, "max_iterations": 5000, "init": "single_harmonic", "amplitude": 2},
  "reference": {"ab2_step": 0.01, "init_state": [1, 0]}
})";

monosim_config* parse(const std::string& text) {
    monosim_config* cfg = nullptr;
    REQUIRE(monosim_config_parse(text.data(), text.size(), &cfg) == MONOSIM_OK);
    REQUIRE(cfg != nullptr);
    return cfg;
}

std::string take(char* s) {
    std::string out(s);
    monosim_string_free(s);
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const char* name) {
    const auto dir = fs::temp_directory_path() / ("monosim_capi_" + std::string(name));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("version and status names", "[capi]") {
    CHECK(std::string(monosim_version()).size() > 0);
    CHECK(std::string(monosim_status_name(MONOSIM_OK)) == "ok");
    CHECK(std::string(monosim_status_name(MONOSIM_ERR_CONFIG)).size() > 0);
}

TEST_CASE("null arguments are rejected", "[capi]") {
    monosim_config* cfg = nullptr;
    CHECK(monosim_config_parse(nullptr, 0, &cfg) == MONOSIM_ERR_INVALID_ARGUMENT);
    CHECK(monosim_config_parse("{}", 2, nullptr) == MONOSIM_ERR_INVALID_ARGUMENT);
    monosim_solution* sol = nullptr;
    CHECK(monosim_simulate(nullptr, &sol) == MONOSIM_ERR_INVALID_ARGUMENT);
    CHECK(sol == nullptr);
    CHECK(std::string(monosim_last_error()).size() > 0);
    monosim_config_free(nullptr);
    monosim_solution_free(nullptr);
    monosim_comparison_free(nullptr);
}

TEST_CASE("config errors carry a field path", "[capi]") {
    const std::string text = R"({"cells": [{"C": 1, "L": 20, "R": 1}]})";
    monosim_config* cfg = nullptr;
    CHECK(monosim_config_parse(text.data(), text.size(), &cfg) == MONOSIM_ERR_CONFIG);
    CHECK(cfg == nullptr);
    CHECK(std::string(monosim_last_error_field()) == "discretization");

    const std::string broken = "{\"cells\": [";
    CHECK(monosim_config_parse(broken.data(), broken.size(), &cfg) == MONOSIM_ERR_CONFIG);
    CHECK(std::string(monosim_last_error()).find("byte offset") != std::string::npos);

    CHECK(monosim_config_load("/nonexistent/monosim.json", &cfg) == MONOSIM_ERR_IO);
}

TEST_CASE("config accessors and overrides", "[capi]") {
    auto* cfg = parse(kMatched);
    std::size_t cells = 0;
    REQUIRE(monosim_config_cells(cfg, &cells) == MONOSIM_OK);
    CHECK(cells == 1);
    // the seed only applies to seeded initialization
    CHECK(monosim_config_set_seed(cfg, 4) == MONOSIM_ERR_CONFIG);
    CHECK(monosim_config_set_max_iterations(cfg, 0) == MONOSIM_ERR_CONFIG);
    CHECK(monosim_config_set_ab2_step(cfg, -1.0) == MONOSIM_ERR_CONFIG);
    CHECK(monosim_config_set_t_end(cfg, 500.0) == MONOSIM_OK);

    char* raw = nullptr;
    REQUIRE(monosim_config_serialize(cfg, &raw) == MONOSIM_OK);
    const auto doc = json::parse(take(raw));
    CHECK(doc["reference"]["t_end"].get<double>() == 500.0);
    CHECK(doc["solver"]["init"] == "single_harmonic");
    monosim_config_free(cfg);
}

TEST_CASE("simulate through the C API", "[capi]") {
    auto* cfg = parse(kMatched);
    monosim_solution* sol = nullptr;
    REQUIRE(monosim_simulate(cfg, &sol) == MONOSIM_OK);
    CHECK(monosim_solution_converged(sol) == 1);
    CHECK(monosim_solution_iterations(sol) < 5000);

    const double* data = nullptr;
    std::size_t channels = 0, n = 0;
    double h = 0.0;
    REQUIRE(monosim_solution_trajectory(sol, &data, &channels, &n, &h) == MONOSIM_OK);
    CHECK(channels == 2);
    CHECK(n == 556);
    CHECK(h == 0.0998797876983241);

    char* raw = nullptr;
    REQUIRE(monosim_solution_report_json(sol, &raw) == MONOSIM_OK);
    const auto rep = json::parse(take(raw));
    CHECK(rep["converged"] == true);
    CHECK(rep["cells"] == 1);
    CHECK(rep["derivative_model"] == "spectral");
    CHECK(rep["residual_history"].size() == rep["iterations"].get<std::size_t>());
    CHECK(rep["peak_to_peak_voltage"][0].get<double>() > 3.0);

    const auto dir = scratch_dir("simulate");
    REQUIRE(monosim_solution_write_csv(sol, (dir / "t.csv").c_str()) == MONOSIM_OK);
    const auto csv = slurp(dir / "t.csv");
    CHECK(csv.rfind("time,v,i\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 557);
    CHECK(monosim_solution_write_csv(sol, "/nonexistent/dir/t.csv") == MONOSIM_ERR_IO);

    monosim_solution_free(sol);
    monosim_config_free(cfg);
}

TEST_CASE("compare on a period-matched grid agrees with AB2", "[capi]") {
    auto* cfg = parse(kMatched);
    monosim_comparison* cmp = nullptr;
    REQUIRE(monosim_compare(cfg, &cmp) == MONOSIM_OK);
    CHECK(monosim_comparison_converged(cmp) == 1);
    REQUIRE(monosim_comparison_solution(cmp) != nullptr);

    char* raw = nullptr;
    REQUIRE(monosim_comparison_report_json(cmp, &raw) == MONOSIM_OK);
    const auto rep = json::parse(take(raw));
    CHECK(rep["ab2"]["period"].get<double>() == Approx(55.53).margin(0.05));
    CHECK(std::abs(rep["period_relative_difference"].get<double>()) < 1e-3);
    CHECK(rep["relative_l2_error"].get<double>() < 0.05);

    const auto dir = scratch_dir("compare");
    REQUIRE(monosim_comparison_write_csv(cmp, (dir / "c.csv").c_str()) == MONOSIM_OK);
    CHECK(fs::file_size(dir / "c.csv") > 0);
    monosim_comparison_free(cmp);
    monosim_config_free(cfg);
}

TEST_CASE("compare reports a circuit at rest as not oscillatory", "[capi]") {
    std::string text = kMatched;
    text.replace(text.find("[1, 0]"), 6, "[0, 0]");
    auto* cfg = parse(text);
    REQUIRE(monosim_config_set_max_iterations(cfg, 5) == MONOSIM_OK);
    monosim_comparison* cmp = nullptr;
    CHECK(monosim_compare(cfg, &cmp) == MONOSIM_ERR_NOT_OSCILLATORY);
    CHECK(cmp == nullptr);
    monosim_config_free(cfg);
}

TEST_CASE("bench arguments", "[capi]") {
    const std::size_t sizes[] = {64, 128};
    monosim_bench_row rows[2];
    REQUIRE(monosim_bench(sizes, 2, rows) == MONOSIM_OK);
    for (const auto& r : rows) {
        CHECK(r.freq_ns > 0.0);
        CHECK(r.has_dense == 1);
        CHECK(r.dense_ns > 0.0);
    }
    CHECK(rows[1].size == 128);
    const std::size_t bad[] = {128, 64};
    CHECK(monosim_bench(bad, 2, rows) == MONOSIM_ERR_INVALID_ARGUMENT);
    const std::size_t tiny[] = {1};
    CHECK(monosim_bench(tiny, 1, rows) == MONOSIM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("validate summary", "[capi]") {
    char* raw = nullptr;
    int ok = 0;
    REQUIRE(monosim_validate(0, &raw, &ok) == MONOSIM_OK);
    const auto doc = json::parse(take(raw));
    CHECK(ok == 1);
    CHECK(doc["suites"].size() == 5);
    for (const auto& s : doc["suites"]) CHECK(s["passed"] == true);

    REQUIRE(monosim_validate(1, &raw, &ok) == MONOSIM_OK);
    const auto flipped = json::parse(take(raw));
    CHECK(ok == 0);
    CHECK(flipped["suites"][0]["name"] == "dense_resolvent");
    CHECK(flipped["suites"][0]["passed"] == false);
}

TEST_CASE("atomic file write", "[capi]") {
    const auto dir = scratch_dir("atomic");
    const std::string text = "alpha,beta\n1,2\n";
    REQUIRE(monosim_write_file_atomic((dir / "a.txt").c_str(), text.data(), text.size()) == MONOSIM_OK);
    CHECK(slurp(dir / "a.txt") == text);
    REQUIRE(monosim_write_file_atomic((dir / "a.txt").c_str(), "x", 1) == MONOSIM_OK);
    CHECK(slurp(dir / "a.txt") == "x");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
    CHECK(entries == 1);
    CHECK(monosim_write_file_atomic("/nonexistent/dir/a.txt", "x", 1) == MONOSIM_ERR_IO);
}
