#pragma once

#include <stdexcept>
#include <string>

namespace agc {

/// Bad input data: unreadable files, malformed CSV, inconsistent series.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or configuration value violates its invariants.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical routine failed to converge or produced an invalid result.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace agc
