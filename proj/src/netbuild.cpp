#include "monosim/netbuild.hpp"

#include "monosim/error.hpp"
#include "monosim/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <set>

namespace monosim {

namespace {

using json = nlohmann::json;

void require_positive(double v, const std::string& field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be > 0");
}

void validate_cell(const CellParams& c, const std::string& field) {
    require_positive(c.capacitance, field + ".C");
    require_positive(c.inductance, field + ".L");
    require_positive(c.resistance, field + ".R");
}

void validate_discretization(const Discretization& d) {
    if (d.num_samples < 2) throw ConfigError("discretization.num_samples", "must be >= 2");
    require_positive(d.sample_step, "discretization.sample_step");
}

// --- JSON reading helpers ---------------------------------------------------

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!keys.count(key)) throw ConfigError(join(path, key), "unknown key");
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) throw ConfigError(path, "must be an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(join(path, key), "missing required field");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "must be a number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : as_number(*it, join(path, key));
}

std::uint64_t as_unsigned(const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) throw ConfigError(path, "must be a non-negative integer");
    return v.get<std::uint64_t>();
}

const json& as_object(const json& v, const std::string& path) {
    if (!v.is_object()) throw ConfigError(path, "must be an object");
    return v;
}

CellParams read_cell(const json& v, const std::string& path) {
    as_object(v, path);
    reject_unknown(v, path, {"C", "L", "R"});
    CellParams c{as_number(require(v, path, "C"), path + ".C"), as_number(require(v, path, "L"), path + ".L"),
                 as_number(require(v, path, "R"), path + ".R")};
    validate_cell(c, path);
    return c;
}

Discretization read_discretization(const json& v) {
    const std::string path = "discretization";
    as_object(v, path);
    reject_unknown(v, path, {"num_samples", "sample_step", "derivative_model"});
    Discretization d;
    d.num_samples = static_cast<std::size_t>(as_unsigned(require(v, path, "num_samples"), path + ".num_samples"));
    d.sample_step = as_number(require(v, path, "sample_step"), path + ".sample_step");
    if (const auto it = v.find("derivative_model"); it != v.end()) {
        const std::string name = it->is_string() ? it->get<std::string>() : "";
        if (name == "circulant_backward_euler") {
            d.derivative_model = DerivativeModel::CirculantBackwardEuler;
        } else if (name == "spectral") {
            d.derivative_model = DerivativeModel::Spectral;
        } else {
            throw ConfigError(path + ".derivative_model", "must be \"circulant_backward_euler\" or \"spectral\"");
        }
    }
    validate_discretization(d);
    return d;
}

double read_deviation(const json& v, const std::string& path) {
    const double dev = as_number(v, path);
    if (!(dev >= 0.0 && dev < 1.0)) throw ConfigError(path, "must satisfy 0 <= deviation < 1");
    return dev;
}

Eigen::MatrixXd read_coupling(const json& v, std::size_t n) {
    const std::string path = "coupling";
    as_object(v, path);
    reject_unknown(v, path, {"matrix", "generator"});
    const bool has_matrix = v.contains("matrix"), has_gen = v.contains("generator");
    if (has_matrix == has_gen) throw ConfigError(path, "exactly one of 'matrix' or 'generator' is required");

    Eigen::MatrixXd rc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (has_matrix) {
        const auto& m = v["matrix"];
        if (!m.is_array() || m.size() != n) throw ConfigError(path + ".matrix", "must have " + std::to_string(n) + " rows");
        for (std::size_t i = 0; i < n; ++i) {
            const std::string row_path = path + ".matrix[" + std::to_string(i) + "]";
            if (!m[i].is_array() || m[i].size() != n) throw ConfigError(row_path, "must have " + std::to_string(n) + " entries");
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                rc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    as_number(m[i][j], row_path + "[" + std::to_string(j) + "]");
            }
        }
        return rc;
    }
    const std::string gpath = path + ".generator";
    const auto& g = as_object(v["generator"], gpath);
    reject_unknown(g, gpath, {"nominal", "deviation", "seed"});
    const double nominal = as_number(require(g, gpath, "nominal"), gpath + ".nominal");
    require_positive(nominal, gpath + ".nominal");
    const double dev = g.contains("deviation") ? read_deviation(g["deviation"], gpath + ".deviation") : 0.0;
    const std::uint64_t seed = g.contains("seed") ? as_unsigned(g["seed"], gpath + ".seed") : 0;
    UniformSource rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double val = nominal * (1.0 + rng.symmetric(dev));
            rc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = val;
            rc(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = val;
        }
    }
    return rc;
}

DmdrConfig read_solver(const json& v) {
    const std::string path = "solver";
    as_object(v, path);
    reject_unknown(v, path, {"alpha", "tolerance", "max_iterations", "init", "amplitude", "seed"});
    DmdrConfig cfg;
    cfg.alpha = number_or(v, path, "alpha", cfg.alpha);
    cfg.tolerance = number_or(v, path, "tolerance", cfg.tolerance);
    if (v.contains("max_iterations")) {
        cfg.max_iterations = static_cast<std::size_t>(as_unsigned(v["max_iterations"], path + ".max_iterations"));
    }
    const double amplitude = number_or(v, path, "amplitude", 1.0);
    const std::uint64_t seed = v.contains("seed") ? as_unsigned(v["seed"], path + ".seed") : 0;
    const std::string init = v.contains("init") && v["init"].is_string() ? v["init"].get<std::string>()
                             : v.contains("init")                        ? std::string("?")
                                                                         : std::string("seeded_uniform");
    if (init == "seeded_uniform") {
        cfg.init = SeededUniform{seed, amplitude};
    } else if (init == "single_harmonic") {
        cfg.init = SingleHarmonic{amplitude};
    } else {
        throw ConfigError(path + ".init", "must be \"seeded_uniform\" or \"single_harmonic\"");
    }
    cfg.validate();
    return cfg;
}

ReferenceSettings read_reference(const json& v, std::size_t n) {
    const std::string path = "reference";
    as_object(v, path);
    reject_unknown(v, path, {"ab2_step", "t_end", "init_state", "transient_fraction"});
    ReferenceSettings ref;
    ref.ab2_step = number_or(v, path, "ab2_step", ref.ab2_step);
    require_positive(ref.ab2_step, path + ".ab2_step");
    if (v.contains("t_end")) {
        ref.t_end = as_number(v["t_end"], path + ".t_end");
        if (!(*ref.t_end > ref.ab2_step)) throw ConfigError(path + ".t_end", "must exceed ab2_step");
    }
    if (v.contains("init_state")) {
        const auto& s = v["init_state"];
        if (!s.is_array() || s.size() != 2 * n) {
            throw ConfigError(path + ".init_state", "must list " + std::to_string(2 * n) + " values (voltages, then currents)");
        }
        for (std::size_t k = 0; k < s.size(); ++k) {
            ref.init_state.push_back(as_number(s[k], path + ".init_state[" + std::to_string(k) + "]"));
        }
    }
    ref.transient_fraction = number_or(v, path, "transient_fraction", ref.transient_fraction);
    if (!(ref.transient_fraction >= 0.0 && ref.transient_fraction < 1.0)) {
        throw ConfigError(path + ".transient_fraction", "must satisfy 0 <= fraction < 1");
    }
    return ref;
}

}  // namespace

// ---------------------------------------------------------------------------
// Specs and builders
// ---------------------------------------------------------------------------

void NetworkSpec::validate() const {
    if (cells.empty()) throw ConfigError("cells", "at least one cell is required");
    for (std::size_t k = 0; k < cells.size(); ++k) validate_cell(cells[k], "cells[" + std::to_string(k) + "]");
    validate_discretization(discretization);
    const auto n = static_cast<Eigen::Index>(cells.size());
    if (n == 1 && coupling.size() == 0) return;
    if (coupling.rows() != n || coupling.cols() != n) {
        throw ConfigError("coupling", "matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const std::string at = "coupling[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            require_positive(coupling(i, j), at);
            if (coupling(i, j) != coupling(j, i)) throw ConfigError(at, "coupling must be symmetric");
        }
    }
}

Problem build_fhn_cell(const CellParams& params, std::size_t num_samples, double sample_step, DerivativeModel model) {
    validate_cell(params, "cell");
    Problem p;
    p.lossless.cap = {params.capacitance};
    p.lossless.ind = {params.inductance};
    p.lossless.interconnect = Interconnect::identity(1);
    p.lossless.derivative_model = model;
    p.resistive.m1 = {ScalarChannel::cubic(0.0), ScalarChannel::linear(params.resistance)};
    p.resistive.m2 = Eigen::MatrixXd::Zero(2, 2);
    p.resistive.m2(0, 0) = 1.0;
    p.num_samples = num_samples;
    p.sample_step = sample_step;
    p.m2_min_eigenvalue = check_m2_monotone(p.resistive);
    p.validate();
    return p;
}

Problem build_network(const NetworkSpec& spec) {
    spec.validate();
    const std::size_t n = spec.size();
    const auto ni = static_cast<Eigen::Index>(n);

    Problem p;
    p.num_samples = spec.discretization.num_samples;
    p.sample_step = spec.discretization.sample_step;
    p.lossless.derivative_model = spec.discretization.derivative_model;
    p.lossless.interconnect = Interconnect::identity(n);
    p.resistive.m1.resize(2 * n);
    p.resistive.m2 = Eigen::MatrixXd::Zero(2 * ni, 2 * ni);

    for (std::size_t k = 0; k < n; ++k) {
        const auto& cell = spec.cells[k];
        const auto ki = static_cast<Eigen::Index>(k);
        p.lossless.cap.push_back(cell.capacitance);
        p.lossless.ind.push_back(cell.inductance);

        double conductance = 0.0;
        for (Eigen::Index j = 0; j < ni; ++j) {
            if (j == ki) continue;
            const double gkj = 1.0 / spec.coupling(ki, j);
            conductance += gkj;
            p.resistive.m2(ki, j) = gkj;
        }
        p.resistive.m2(ki, ki) = 1.0;
        p.resistive.m1[k] = ScalarChannel::cubic(conductance);
        p.resistive.m1[n + k] = ScalarChannel::linear(cell.resistance);
    }
    p.m2_min_eigenvalue = check_m2_monotone(p.resistive);
    p.validate();
    return p;
}

NetworkSpec sample_heterogeneous(const NominalValues& nominal, double deviation, std::size_t n, std::uint64_t seed,
                                 Discretization discretization) {
    if (!(deviation >= 0.0 && deviation < 1.0)) throw ConfigError("deviation", "must satisfy 0 <= deviation < 1");
    if (n == 0) throw ConfigError("n", "must be >= 1");

    UniformSource rng(seed);
    auto draw = [&](double value) { return value * (1.0 + rng.symmetric(deviation)); };

    NetworkSpec spec;
    spec.discretization = discretization;
    spec.cells.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        CellParams c;
        c.capacitance = draw(nominal.capacitance);
        c.inductance = draw(nominal.inductance);
        c.resistance = draw(nominal.resistance);
        spec.cells.push_back(c);
    }
    const auto ni = static_cast<Eigen::Index>(n);
    spec.coupling = Eigen::MatrixXd::Zero(ni, ni);
    for (Eigen::Index i = 0; i < ni; ++i) {
        for (Eigen::Index j = i + 1; j < ni; ++j) {
            spec.coupling(i, j) = spec.coupling(j, i) = draw(nominal.coupling_resistance);
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Config documents
// ---------------------------------------------------------------------------

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("", "JSON syntax error at byte offset " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("", "top level must be a JSON object");
    reject_unknown(doc, "", {"cells", "generator", "coupling", "discretization", "solver", "reference"});

    RunConfig cfg;
    cfg.network.discretization = read_discretization(require(doc, "", "discretization"));

    const bool has_cells = doc.contains("cells"), has_gen = doc.contains("generator");
    if (has_cells == has_gen) throw ConfigError("cells", "exactly one of 'cells' or 'generator' is required");

    if (has_cells) {
        const auto& cells = doc["cells"];
        if (!cells.is_array() || cells.empty()) throw ConfigError("cells", "must be a non-empty array");
        for (std::size_t k = 0; k < cells.size(); ++k) {
            cfg.network.cells.push_back(read_cell(cells[k], "cells[" + std::to_string(k) + "]"));
        }
        const std::size_t n = cfg.network.cells.size();
        if (doc.contains("coupling")) {
            cfg.network.coupling = read_coupling(doc["coupling"], n);
        } else if (n > 1) {
            throw ConfigError("coupling", "missing required field (network has " + std::to_string(n) + " cells)");
        }
    } else {
        if (doc.contains("coupling")) throw ConfigError("coupling", "not allowed together with 'generator'");
        const std::string path = "generator";
        const auto& g = as_object(doc["generator"], path);
        reject_unknown(g, path, {"n", "nominal", "deviation", "seed"});
        const auto n = static_cast<std::size_t>(as_unsigned(require(g, path, "n"), path + ".n"));
        if (n == 0) throw ConfigError(path + ".n", "must be >= 1");
        const auto& nom = as_object(require(g, path, "nominal"), path + ".nominal");
        const std::string npath = path + ".nominal";
        reject_unknown(nom, npath, {"C", "L", "R", "Rc"});
        NominalValues nominal;
        nominal.capacitance = as_number(require(nom, npath, "C"), npath + ".C");
        nominal.inductance = as_number(require(nom, npath, "L"), npath + ".L");
        nominal.resistance = as_number(require(nom, npath, "R"), npath + ".R");
        nominal.coupling_resistance = number_or(nom, npath, "Rc", nominal.coupling_resistance);
        require_positive(nominal.capacitance, npath + ".C");
        require_positive(nominal.inductance, npath + ".L");
        require_positive(nominal.resistance, npath + ".R");
        require_positive(nominal.coupling_resistance, npath + ".Rc");
        const double dev = g.contains("deviation") ? read_deviation(g["deviation"], path + ".deviation") : 0.0;
        const std::uint64_t seed = g.contains("seed") ? as_unsigned(g["seed"], path + ".seed") : 0;
        cfg.network = sample_heterogeneous(nominal, dev, n, seed, cfg.network.discretization);
        if (n == 1) cfg.network.coupling.resize(0, 0);
    }
    cfg.network.validate();

    if (doc.contains("solver")) cfg.solver = read_solver(doc["solver"]);
    if (doc.contains("reference")) cfg.reference = read_reference(doc["reference"], cfg.network.size());
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json doc;
    doc["cells"] = json::array();
    for (const auto& c : cfg.network.cells) {
        doc["cells"].push_back({{"C", c.capacitance}, {"L", c.inductance}, {"R", c.resistance}});
    }
    const auto n = static_cast<Eigen::Index>(cfg.network.size());
    if (cfg.network.coupling.size() > 0) {
        json m = json::array();
        for (Eigen::Index i = 0; i < n; ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < n; ++j) row.push_back(i == j ? 0.0 : cfg.network.coupling(i, j));
            m.push_back(row);
        }
        doc["coupling"] = {{"matrix", m}};
    }
    const auto& d = cfg.network.discretization;
    doc["discretization"] = {{"num_samples", d.num_samples},
                             {"sample_step", d.sample_step},
                             {"derivative_model", to_string(d.derivative_model)}};

    json solver = {{"alpha", cfg.solver.alpha},
                   {"tolerance", cfg.solver.tolerance},
                   {"max_iterations", cfg.solver.max_iterations}};
    if (const auto* u = std::get_if<SeededUniform>(&cfg.solver.init)) {
        solver["init"] = "seeded_uniform";
        solver["amplitude"] = u->amplitude;
        solver["seed"] = u->seed;
    } else if (const auto* h = std::get_if<SingleHarmonic>(&cfg.solver.init)) {
        solver["init"] = "single_harmonic";
        solver["amplitude"] = h->amplitude;
    } else {
        throw ConfigError("solver.init", "a given initial trajectory cannot be serialized");
    }
    doc["solver"] = solver;

    json ref = {{"ab2_step", cfg.reference.ab2_step}, {"transient_fraction", cfg.reference.transient_fraction}};
    if (cfg.reference.t_end) ref["t_end"] = *cfg.reference.t_end;
    if (!cfg.reference.init_state.empty()) ref["init_state"] = cfg.reference.init_state;
    doc["reference"] = ref;
    return doc.dump(2) + "\n";
}

}  // namespace monosim
