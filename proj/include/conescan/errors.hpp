#pragma once

#include <stdexcept>
#include <string>

namespace conescan {

// Input/config/CSV problems. CLI maps these to exit code 2.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// A requirement or mechanical constraint was violated. CLI maps these to exit code 1.
struct constraint_error : std::runtime_error {
    explicit constraint_error(const std::string& what) : std::runtime_error(what) {}
};

// Solver/domain failures (lost contact, no convergence, asin out of range). CLI exit code 3.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace conescan
