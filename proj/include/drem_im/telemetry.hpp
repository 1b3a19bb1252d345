#pragma once

// Telemetry CSV, schema drem-im-telemetry/1.
//
// Layout:
//   # schema=drem-im-telemetry/1
//   # config.<key>=<value>        (one line per scenario key)
//   <header row: the column names below, comma separated>
//   <one row per logged step>
//
// Column names are part of the public contract. Conventions: flux_err = λ - λ̂,
// rr_err = R̂r - Rr, omega_err = ω̂ - ω, tl_err = T̂L - TL. delta_e/delta_m are
// the raw regression determinants; int_delta_*_sq integrate the values the
// observers actually receive (zero while gated). Residuals are normalized:
//   lre_res_l  = |z_l - φ_lᵀΘ| / (1 + |z_l|)
//   drem_res   = |ζe - Δe Θ| / (1 + |ζe|)
//   adj_identity_res = |adj(Φ)Φ - det(Φ) I|_F / (|adj(Φ)|_F |Φ|_F)
//   mech_res   = |z_m - Φ_m (TL, ω)| / (1 + |z_m|)
// Numbers are written in shortest round-trip form, so reruns are bit-identical.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "drem_im/scenario.hpp"
#include "drem_im/simulation.hpp"

namespace drem_im {

inline constexpr std::string_view kTelemetrySchema = "drem-im-telemetry/1";

struct TelemetryRecord {
    double t = 0.0;
    Vec2 lambda, i, v;
    double omega = 0.0;
    Vec2 lambda_hat;
    double rr_hat = 0.0, omega_hat = 0.0, tl_hat = 0.0;
    Vec2 flux_err;
    double rr_err = 0.0, omega_err = 0.0, tl_err = 0.0;
    double delta_e = 0.0, delta_m = 0.0;
    double int_delta_e_sq = 0.0, int_delta_m_sq = 0.0;
    double zeta_e[3] = {};
    Vec2 zeta_m;
    double lre_res[kElectricalChains] = {};
    double drem_res = 0.0;
    double adj_identity_res = 0.0;
    double mech_res = 0.0;
    bool observer_active = false;
};

const std::vector<std::string>& telemetry_columns();

// Builds the record for the simulation's current instant, comparing the
// regression outputs against simulator ground truth.
TelemetryRecord make_record(const Simulation& sim);

std::vector<double> record_values(const TelemetryRecord& r);

class TelemetryWriter {
public:
    TelemetryWriter(std::ostream& out, const ScenarioConfig& cfg);
    void write(const TelemetryRecord& r);

private:
    std::ostream& out_;
};

struct TelemetryTable {
    std::map<std::string, std::string> meta;  // "schema" and "config.<key>" entries
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool has(std::string_view name) const;
    std::size_t index(std::string_view name) const;
    std::vector<double> column(std::string_view name) const;
    // Throws DataError naming every missing column.
    void require(const std::vector<std::string>& names) const;
    // Config value from the metadata block; throws DataError when absent.
    double config_number(const std::string& key) const;
    std::string config_string(const std::string& key) const;
};

TelemetryTable read_telemetry(std::istream& in);
TelemetryTable read_telemetry_file(const std::string& path);

}  // namespace drem_im
