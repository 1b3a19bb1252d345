#pragma once

// Columnar extracts of telemetry for external plotting, one CSV per selector.
//
//   flux_error_norm   t, |flux error|
//   flux_error        t, flux error components
//   rotor_resistance  t, Rr, Rr estimate, Rr error
//   speed             t, speed, speed estimate, speed error
//   load_torque       t, TL, TL estimate, TL error
//   excitation        t, ∫Δe², ∫Δm²
//   delta             t, Δe, Δm
//   residuals         t, per-chain, mixed and mechanical residuals
//
// With `log_scale` every non-time column is replaced by log10 of its absolute
// value (named log10_abs_<column>).

#include <string>
#include <vector>

#include "drem_im/telemetry.hpp"

namespace drem_im {

const std::vector<std::string>& plot_selectors();

struct PlotSeries {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Throws DataError for an unknown selector or missing columns.
PlotSeries extract_plot_series(const TelemetryTable& t, const std::string& selector, bool log_scale);

// Writes <prefix><selector>.csv for each selector and returns the paths.
// Throws DataError for an empty or unknown selector list.
std::vector<std::string> emit_plot_data(const TelemetryTable& t, const std::vector<std::string>& selectors,
                                        bool log_scale, const std::string& out_prefix);

}  // namespace drem_im
