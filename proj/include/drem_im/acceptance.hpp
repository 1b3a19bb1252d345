#pragma once

// Acceptance criteria evaluated on telemetry files.
//
// Inputs are up to five telemetry tables: the canonical ground-truth run, the
// same run at dt/2 (logged at matching instants), a repeat of the canonical
// run, an unexcited run (zero voltage) and a certainty-equivalence run.
// Criteria whose inputs are absent are reported as skipped.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drem_im/scenario.hpp"
#include "drem_im/telemetry.hpp"

namespace drem_im {

enum class Verdict { pass, fail, skipped };

std::string_view to_string(Verdict v);

struct Check {
    std::string name;
    double measured = 0.0;
    std::string relation;  // "<", "<=", ">", ">=", "=="
    double bound = 0.0;
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    Verdict verdict = Verdict::skipped;
    std::vector<Check> checks;
    std::vector<std::string> notes;
};

struct AcceptanceInputs {
    const TelemetryTable* canonical = nullptr;
    const TelemetryTable* refined = nullptr;
    const TelemetryTable* rerun = nullptr;
    const TelemetryTable* unexcited = nullptr;
    const TelemetryTable* ce = nullptr;
    // Wall time of the canonical run, when it was measured.
    std::optional<double> canonical_wall_seconds;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;

    bool any_failed() const;
    // True when every listed criterion was evaluated and passed.
    bool all_passed() const;
    std::string to_json(int indent = 2) const;
};

inline constexpr int kCriterionCount = 10;

// `which` lists criterion ids (1..10); empty means all. Throws DataError when a
// supplied table lacks required columns or metadata, or ends before its
// configured duration.
AcceptanceReport check_acceptance(const AcceptanceInputs& in, const std::vector<int>& which = {});

// One human-readable line, e.g. "criterion 5 PASS  mechanical regression: ...".
std::string format_criterion_line(const CriterionResult& r);

// Rebuilds the scenario configuration from a table's metadata block.
ScenarioConfig config_from_telemetry(const TelemetryTable& t);

// Excitation class of a logged ∫Δ² column over the rows where the observers
// were active, with the monitor settings from the metadata.
struct ExcitationReading {
    Excitation excitation = Excitation::insufficient;
    double growth_ratio = 0.0;  // last-window energy / mean window energy
    double integral = 0.0;
};
ExcitationReading excitation_from_telemetry(const TelemetryTable& t, std::string_view integral_column);

}  // namespace drem_im
