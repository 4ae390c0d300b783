#pragma once

#include <stdexcept>
#include <string>

namespace epps {

// Branching matrix spectral radius >= 1: the process is non-stationary.
struct StabilityViolation : std::runtime_error {
    explicit StabilityViolation(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

struct BadParameters : std::invalid_argument {
    explicit BadParameters(const std::string& what) : std::invalid_argument(what) {}
};

struct EmptySeries : std::runtime_error {
    explicit EmptySeries(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientVolume : std::runtime_error {
    explicit InsufficientVolume(const std::string& what) : std::runtime_error(what) {}
};

struct TooFewObservations : std::runtime_error {
    explicit TooFewObservations(const std::string& what) : std::runtime_error(what) {}
};

struct GridNotSynchronous : std::runtime_error {
    explicit GridNotSynchronous(const std::string& what) : std::runtime_error(what) {}
};

struct TooFewValues : std::runtime_error {
    explicit TooFewValues(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
    std::size_t line_number;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace epps
