#pragma once

#include <stdexcept>
#include <string>

namespace gcmt {

/// Bad inputs: shapes, configs, malformed files. CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Runtime/numerical failures: non-finite loss, checksum mismatch mid-run.
/// CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace gcmt
