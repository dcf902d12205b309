#pragma once

#include <stdexcept>
#include <string>

namespace nowcast {

// Bad or inconsistent input data (files, schemas, frame/design invariants).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (singular system, degenerate fit, dimension mismatch).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace nowcast
