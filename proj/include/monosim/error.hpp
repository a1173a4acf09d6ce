#pragma once

#include <stdexcept>
#include <string>

namespace monosim {

/// Base class for every exception thrown by the core library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes (channels, samples, sample step) do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A numeric invariant failed: imaginary residue after an inverse transform,
/// a singular frequency bin, NaN/Inf in an integration, a stalled prox solve.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Invalid user input. `field()` is a dotted path such as `solver.alpha`
/// (empty for document-level syntax errors).
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A reference run produced no usable oscillation (no mean crossings).
class NotOscillatoryError : public Error {
public:
    using Error::Error;
};

}  // namespace monosim
