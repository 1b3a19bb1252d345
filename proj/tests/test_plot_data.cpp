#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "drem_im/errors.hpp"
#include "drem_im/plot_data.hpp"

using namespace drem_im;
namespace fs = std::filesystem;

namespace {

TelemetryTable sample() {
    std::ostringstream text;
    text << "# schema=drem-im-telemetry/1\n# config.motor.Rr=3.9\n# config.motor.TL=0.05\n";
    const auto& cols = telemetry_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) text << (c ? "," : "") << cols[c];
    text << '\n';
    for (int r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) text << (c ? "," : "") << (c == 0 ? 0.1 * r : -(r + 1.0) * (c + 1.0));
        text << '\n';
    }
    std::istringstream in(text.str());
    return read_telemetry(in);
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "drem_im_plot_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("every selector extracts its columns") {
    const TelemetryTable t = sample();
    REQUIRE(plot_selectors().size() == 8);
    for (const auto& s : plot_selectors()) {
        INFO(s);
        const PlotSeries p = extract_plot_series(t, s, false);
        CHECK(p.columns.front() == "t");
        CHECK(p.columns.size() >= 2);
        CHECK(p.rows.size() == 3);
    }
}

TEST_CASE("flux error norm is time plus one column") {
    const TelemetryTable t = sample();
    const PlotSeries p = extract_plot_series(t, "flux_error_norm", false);
    CHECK(p.columns == std::vector<std::string>{"t", "flux_err_norm"});
    const std::size_t c = t.index("flux_err_norm");
    CHECK(p.rows[2][1] == t.rows[2][c]);
    CHECK(p.rows[2][0] == t.rows[2][0]);
}

TEST_CASE("true values come from the metadata") {
    const PlotSeries p = extract_plot_series(sample(), "rotor_resistance", false);
    CHECK(p.columns == std::vector<std::string>{"t", "Rr", "rr_hat", "rr_err"});
    for (const auto& row : p.rows) CHECK(row[1] == 3.9);
}

TEST_CASE("log scale") {
    const TelemetryTable t = sample();
    const PlotSeries p = extract_plot_series(t, "delta", true);
    CHECK(p.columns == std::vector<std::string>{"t", "log10_abs_delta_e", "log10_abs_delta_m"});
    CHECK(p.rows[1][1] == Catch::Approx(std::log10(std::abs(t.rows[1][t.index("delta_e")]))));
    CHECK(p.rows[1][0] == t.rows[1][0]);
}

TEST_CASE("unknown and empty selections are rejected before writing") {
    const TelemetryTable t = sample();
    const fs::path dir = scratch();
    const std::string prefix = (dir / "p_").string();
    CHECK_THROWS_AS(emit_plot_data(t, {}, false, prefix), DataError);
    CHECK_THROWS_AS(emit_plot_data(t, {"speed", "sped"}, false, prefix), DataError);
    CHECK_THROWS_AS(emit_plot_data(t, {""}, false, prefix), DataError);
    CHECK(fs::is_empty(dir));
    try {
        extract_plot_series(t, "bogus", false);
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("known: flux_error_norm") != std::string::npos);
    }
}

TEST_CASE("missing telemetry columns are reported") {
    std::istringstream in("t,omega\n0,1\n");
    const TelemetryTable t = read_telemetry(in);
    CHECK_THROWS_AS(extract_plot_series(t, "speed", false), DataError);
}

TEST_CASE("files are written one per selector") {
    const fs::path dir = scratch();
    const auto paths = emit_plot_data(sample(), {"speed", "excitation"}, false, (dir / "run_").string());
    REQUIRE(paths.size() == 2);
    CHECK(paths[0] == (dir / "run_speed.csv").string());
    std::ifstream f(paths[1]);
    std::string header, row;
    std::getline(f, header);
    std::getline(f, row);
    CHECK(header == "t,int_delta_e_sq,int_delta_m_sq");
    CHECK(row.rfind("0,", 0) == 0);
    fs::remove_all(dir);
}
