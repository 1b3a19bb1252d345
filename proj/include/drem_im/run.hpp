#pragma once

// One complete scenario run: simulate, log telemetry, summarize.

#include <cstddef>
#include <iosfwd>
#include <string>

#include "drem_im/observers.hpp"
#include "drem_im/scenario.hpp"

namespace drem_im {

enum class RunStatus { ok, fault };

struct ConvergenceThresholds {
    double flux_rel = 0.01;    // share of the flux reference
    double rr_rel = 0.01;      // share of the true Rr
    double tl_rel = 0.01;      // share of |TL|
    double omega_abs = 0.1;    // rad/s
};

// Time after which the error stayed below its threshold until the end of the
// run; negative when it never settled.
struct ConvergenceTimes {
    double flux = -1.0;
    double rr = -1.0;
    double tl = -1.0;
    double omega = -1.0;
};

struct RunSummary {
    RunStatus status = RunStatus::ok;
    std::string fault;
    double fault_time = 0.0;

    double end_time = 0.0;
    std::size_t steps = 0;
    std::size_t rows = 0;

    double flux_err_norm = 0.0;
    double rr_err = 0.0;
    double omega_err = 0.0;
    double tl_err = 0.0;
    ConvergenceTimes convergence;

    double int_delta_e_sq = 0.0;
    double int_delta_m_sq = 0.0;
    Excitation excitation_e = Excitation::insufficient;
    Excitation excitation_m = Excitation::insufficient;
    std::size_t flux_floor_events = 0;
    double wall_seconds = 0.0;
};

// Runs to completion. `telemetry` may be null. A numeric fault stops the run,
// leaves the rows logged so far in place and is reported in the summary.
RunSummary run_scenario(const ScenarioConfig& cfg, std::ostream* telemetry,
                        const ConvergenceThresholds& thresholds = {});

// Opens cfg.telemetry_path when set (empty: no log).
RunSummary run_scenario_to_file(const ScenarioConfig& cfg, const ConvergenceThresholds& thresholds = {});

std::string summary_json(const RunSummary& s, int indent = 2);

}  // namespace drem_im
