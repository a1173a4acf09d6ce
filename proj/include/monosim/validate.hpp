#pragma once

// End-to-end oracle suites run by the `validate` command.

#include <string>
#include <vector>

namespace monosim {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double max_error = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ValidationOptions {
    /// Debug hook: negate the interconnect used by the frequency-domain
    /// resolvent (the dense oracle keeps the true sign). Must make the dense
    /// resolvent suite fail.
    bool flip_interconnect_sign = false;
    unsigned long long seed = 20240501;
};

/// Suites, in order:
///   dense_resolvent     frequency path vs dense time-domain inverse
///   resolvent_consistency  x + alpha S x = z for the recovered x
///   prox_bisection      guarded Newton vs pure bisection
///   firm_nonexpansive   resolvents of S and M1 on random pairs
///   ab2_order           error ratio under step halving on v' = -v
std::vector<SuiteResult> run_validation(const ValidationOptions& opts = {});

}  // namespace monosim
