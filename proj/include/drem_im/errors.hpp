#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace drem_im {

// Invalid scenario or parameter set. Carries every problem found, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    explicit ConfigError(const std::string& problem) : ConfigError(std::vector<std::string>{problem}) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

// Non-finite value met during evaluation or integration.
class NumericFault : public std::runtime_error {
public:
    NumericFault(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Telemetry/report I/O or format problems (missing columns, unreadable file, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace drem_im
