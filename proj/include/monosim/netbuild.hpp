#pragma once

// Problem builders for FitzHugh-Nagumo cells and all-to-all diffusively
// coupled networks of them, plus the JSON run configuration.
//
// Network of n cells, channels (v_1..v_n, i_1..i_n):
//   S  = [ diag(C) D , I ; -I , diag(L) D ]
//   M1 = v_k -> v_k^3/3 + g_k v_k with g_k = sum_{j != k} 1/Rc_kj ;  i_k -> R_k i_k
//   M2 = voltage block with 1 on the diagonal and 1/Rc_kj off it, zero elsewhere
// which is the circuit
//   C_k v_k' = v_k - v_k^3/3 - i_k + sum_{j != k} (v_j - v_k)/Rc_kj
//   L_k i_k' = v_k - R_k i_k

#include "monosim/dmdr.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace monosim {

struct CellParams {
    double capacitance = 1.0;  ///< C, Farads
    double inductance = 20.0;  ///< L, Henrys
    double resistance = 1.0;   ///< R, Ohms (series with L)

    bool operator==(const CellParams&) const = default;
};

struct Discretization {
    std::size_t num_samples = 556;
    double sample_step = 0.1;
    DerivativeModel derivative_model = DerivativeModel::CirculantBackwardEuler;

    bool operator==(const Discretization&) const = default;
};

struct NetworkSpec {
    std::vector<CellParams> cells;
    /// n x n coupling resistances Rc (Ohms); only off-diagonal entries are used.
    Eigen::MatrixXd coupling;
    Discretization discretization;

    [[nodiscard]] std::size_t size() const noexcept { return cells.size(); }

    /// Positive parameters, square symmetric coupling (exact equality).
    void validate() const;

    bool operator==(const NetworkSpec& o) const {
        return cells == o.cells && discretization == o.discretization && coupling.rows() == o.coupling.rows() &&
               coupling.cols() == o.coupling.cols() && coupling == o.coupling;
    }
};

/// Nominal network values; defaults are the reference network's.
struct NominalValues {
    double capacitance = 1.0;
    double inductance = 20.0;
    double resistance = 1.0;
    double coupling_resistance = 5.0;
};

Problem build_fhn_cell(const CellParams& params, std::size_t num_samples, double sample_step,
                       DerivativeModel model = DerivativeModel::CirculantBackwardEuler);

Problem build_network(const NetworkSpec& spec);

/// Every parameter drawn as nominal * (1 + u), u uniform on [-deviation, +deviation].
/// Draw order: for each cell C, L, R; then the coupling upper triangle row by
/// row, mirrored below the diagonal. Uses UniformSource(seed).
NetworkSpec sample_heterogeneous(const NominalValues& nominal, double deviation, std::size_t n, std::uint64_t seed,
                                 Discretization discretization = {});

/// Settings of the Adams-Bashforth reference run used by `compare`.
struct ReferenceSettings {
    double ab2_step = 0.01;
    /// Integration horizon; when absent, 20 periods of the DMDR grid.
    std::optional<double> t_end;
    /// (v_1..v_n, i_1..i_n); when empty every cell starts at v = 1, i = 0.
    std::vector<double> init_state;
    double transient_fraction = 0.8;

    bool operator==(const ReferenceSettings&) const = default;
};

struct RunConfig {
    NetworkSpec network;
    DmdrConfig solver;
    ReferenceSettings reference;
};

/// Parses and validates a JSON run configuration. Unknown keys are rejected.
/// Errors are ConfigError with a dotted field path, or the byte offset for
/// syntax errors.
RunConfig parse_config(std::string_view text);

/// Explicit form (cells list + coupling matrix) that parse_config accepts.
/// GivenInit cannot be expressed and raises ConfigError.
std::string serialize_config(const RunConfig& cfg);

}  // namespace monosim
