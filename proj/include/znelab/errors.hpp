#pragma once

#include <stdexcept>
#include <string>

namespace znelab {

// Bad user input: invalid parameter values, malformed config, schema
// violations. Maps to process exit code 2.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// A request that exceeds a configured resource cap (qubit count, grid size).
class capacity_error : public validation_error {
public:
    explicit capacity_error(const std::string& what) : validation_error(what) {}
};

// Non-finite intermediates, diverging training, broken numeric contracts.
// Maps to process exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures, always carrying the offending path. Exit code 4.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace znelab
