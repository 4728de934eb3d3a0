#pragma once

#include <stdexcept>
#include <string>

namespace kpplab {

struct InvalidFunctionError : std::runtime_error {
    explicit InvalidFunctionError(const std::string& m) : std::runtime_error(m) {}
};

struct IntegrationFailure : std::runtime_error {
    explicit IntegrationFailure(const std::string& m) : std::runtime_error(m) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& m) : std::runtime_error(m) {}
};

struct ScenarioError : std::runtime_error {
    explicit ScenarioError(const std::string& m) : std::runtime_error(m) {}
};

struct FitError : std::runtime_error {
    explicit FitError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace kpplab
