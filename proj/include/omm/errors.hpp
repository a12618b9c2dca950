#pragma once

#include <stdexcept>
#include <string>

namespace omm {

struct UnstableSystem : std::runtime_error {
    explicit UnstableSystem(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverFailure : std::runtime_error {
    explicit SolverFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct LeakageExceeded : std::runtime_error {
    LeakageExceeded(double leak, double budget)
        : std::runtime_error("truncation leakage " + std::to_string(leak) +
                             " exceeds budget " + std::to_string(budget)),
          leakage(leak), budget(budget) {}
    double leakage;
    double budget;
};

struct UnphysicalState : std::runtime_error {
    explicit UnphysicalState(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct DisplacedState : std::runtime_error {
    explicit DisplacedState(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidityError : std::runtime_error {
    explicit ValidityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace omm
