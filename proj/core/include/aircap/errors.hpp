#pragma once

#include <stdexcept>
#include <string>

namespace aircap {

// Malformed or inconsistent input data (bad header, ragged row, unparseable field).
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure in an estimator (non-convergence, rank deficiency where not allowed).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration (unknown key, out-of-range value, missing required option).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace aircap
