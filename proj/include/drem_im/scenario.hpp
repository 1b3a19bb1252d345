#pragma once

// Scenario configuration: a flat `key = value` text format. Every key has a
// default (the canonical scenario); unknown keys are rejected so that a
// misspelled gain name cannot silently fall back to its default.

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "drem_im/electrical_regression.hpp"
#include "drem_im/motor.hpp"
#include "drem_im/observers.hpp"

namespace drem_im {

enum class ObserverMode { ground_truth, certainty_equivalence };
enum class Drive { foc, zero_voltage };

std::string_view to_string(ObserverMode m);
std::string_view to_string(Drive d);

struct ScenarioConfig {
    MotorParams motor;
    ControllerGains ctrl;

    std::array<double, kElectricalChains> alphas{10.0, 20.0, 30.0, 40.0, 50.0, 100.0};
    double a = 50.0;  // mechanical filter constant [rad/s]

    ObserverGains gains;
    double enable_time = 2.0;
    ObserverMode mode = ObserverMode::ground_truth;

    Vec2 lambda0{0.02, 0.0};
    Vec2 i0{};
    double omega0 = 0.0;
    double theta0 = -3.0;  // accepted for completeness; the model has no angle state
    ObserverState estimates0{};
    double filter_ic = 0.0;  // initial value of every regression filter state

    double dt = 2e-5;
    double duration = 10.0;
    int decimation = 100;
    Drive drive = Drive::foc;

    ExcitationSettings monitor;

    std::string telemetry_path;

    // Empty when the configuration is runnable.
    std::vector<std::string> problems() const;
    void validate() const;

    std::size_t total_steps() const;
    std::size_t enable_step() const;
};

// Applies one `key = value` assignment. Throws ConfigError on unknown keys or
// unparsable values.
void set_option(ScenarioConfig& cfg, std::string_view key, std::string_view value);

// Every key with its current value, in documentation order.
std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& cfg);

// Key documentation lines (`key  description`) for --help output and README.
std::vector<std::pair<std::string, std::string>> config_documentation();

// Parses config text starting from the defaults. '#' starts a comment. All
// problems (unknown keys, bad values, failed validation) are collected into a
// single ConfigError.
ScenarioConfig parse_config(std::istream& in, ScenarioConfig base = {});
ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {});

// Applies "key=value" overrides (as given on a command line).
void apply_overrides(ScenarioConfig& cfg, const std::vector<std::string>& overrides);

std::string format_double(double x);

}  // namespace drem_im
