#pragma once

#include <stdexcept>
#include <string>

namespace cvqkd {

// Error taxonomy mirrors the CLI exit codes: usage -> 2, numeric -> 3, io -> 4.

struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Covariance matrix (or parameter set) violating the Heisenberg bound.
struct physicality_error : numeric_error {
    explicit physicality_error(const std::string& msg) : numeric_error(msg) {}
};

// Degenerate estimation input (all-zero regressor, too few samples).
struct estimation_error : numeric_error {
    explicit estimation_error(const std::string& msg) : numeric_error(msg) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cvqkd
