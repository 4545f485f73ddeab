#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rumor {

/// Invalid parameters or configuration detected before any computation.
/// Carries every violation found, each as "field: message".
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    ConfigError(const std::string& field, const std::string& message);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// A state became non-finite during integration.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& message, double time);
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Wraps a failure inside one Monte Carlo run or sweep cell with its coordinates.
class RunError : public std::runtime_error {
public:
    RunError(const std::string& where, const std::exception& cause);
};

class InsufficientDataError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class GridMismatchError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace rumor
