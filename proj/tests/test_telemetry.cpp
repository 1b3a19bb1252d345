#include <catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include "drem_im/errors.hpp"
#include "drem_im/run.hpp"
#include "drem_im/telemetry.hpp"

using namespace drem_im;

namespace {

std::string logged_run(ScenarioConfig c) {
    std::ostringstream out;
    run_scenario(c, &out);
    return out.str();
}

ScenarioConfig tiny() {
    ScenarioConfig c;
    c.duration = 0.02;
    c.enable_time = 0.01;
    c.decimation = 100;
    return c;
}

TelemetryTable parse(const std::string& text) {
    std::istringstream in(text);
    return read_telemetry(in);
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const DataError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("column contract") {
    const auto& cols = telemetry_columns();
    CHECK(cols.front() == "t");
    for (const char* name : {"lambda_a", "lambda_hat_b", "rr_hat", "omega_hat", "tl_hat", "flux_err_norm", "rr_err",
                             "omega_err", "tl_err", "delta_e", "delta_m", "int_delta_e_sq", "int_delta_m_sq",
                             "lre_res_1", "lre_res_6", "drem_res", "adj_identity_res", "mech_res", "observer_active"}) {
        INFO(name);
        CHECK(std::find(cols.begin(), cols.end(), name) != cols.end());
    }
    CHECK(record_values(TelemetryRecord{}).size() == cols.size());
}

TEST_CASE("written telemetry reads back exactly") {
    const ScenarioConfig c = tiny();
    const std::string text = logged_run(c);
    CHECK(text.rfind("# schema=drem-im-telemetry/1\n", 0) == 0);

    const TelemetryTable t = parse(text);
    CHECK(t.columns == telemetry_columns());
    // t = 0, every 100th step, and the final step (which is also a 100th step here)
    CHECK(t.rows.size() == 11);
    CHECK(t.meta.at("schema") == "drem-im-telemetry/1");
    CHECK(t.config_number("sim.duration") == 0.02);
    CHECK(t.config_string("observer.mode") == "ground-truth");
    CHECK(t.config_number("motor.Rr") == 3.9);

    Simulation sim(c);
    for (int k = 0; k < 500; ++k) sim.step();
    const auto expected = record_values(make_record(sim));
    const auto& row = t.rows[5];
    REQUIRE(row.size() == expected.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
        INFO(t.columns[k]);
        CHECK(row[k] == expected[k]);
    }
}

TEST_CASE("record errors follow the documented sign conventions") {
    ScenarioConfig c = tiny();
    c.estimates0.rr_hat = 1.0;
    c.estimates0.omega_hat = 3.0;
    Simulation sim(c);
    const TelemetryRecord r = make_record(sim);
    CHECK(r.rr_err == 1.0 - c.motor.Rr);
    CHECK(r.omega_err == 3.0 - r.omega);
    CHECK(r.tl_err == -c.motor.TL);
    CHECK(r.flux_err == r.lambda - r.lambda_hat);
}

TEST_CASE("missing columns are all named") {
    const TelemetryTable t = parse("# schema=drem-im-telemetry/1\nt,rr_hat\n0,1\n");
    try {
        t.require({"t", "omega_hat", "tl_hat"});
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("omega_hat") != std::string::npos);
        CHECK(msg.find("tl_hat") != std::string::npos);
    }
    CHECK_THROWS_AS(t.column("delta_e"), DataError);
    CHECK_THROWS_AS(t.config_number("motor.Rr"), DataError);
}

TEST_CASE("comments may appear anywhere") {
    const TelemetryTable t = parse("#\n# schema=drem-im-telemetry/1\nt,x\n0,1\n# note\n\n1,2\r\n");
    CHECK(t.rows.size() == 2);
    CHECK(t.rows[1][1] == 2.0);
}

TEST_CASE("malformed telemetry") {
    CHECK(error_of("t,x\n0,1,2\n").find("expected 2 fields") != std::string::npos);
    CHECK(error_of("t,x\n0,abc\n").find("bad number") != std::string::npos);
    CHECK(error_of("t,x\n0;1\n").find("expected ','") != std::string::npos);
    CHECK(error_of("# only comments\n").find("no header") != std::string::npos);
    CHECK(error_of("# schema=other/9\nt\n0\n").find("unsupported telemetry schema") != std::string::npos);
    CHECK_THROWS_AS(read_telemetry_file("/nonexistent/telemetry.csv"), DataError);
}

TEST_CASE("metadata numbers must parse") {
    const TelemetryTable t = parse("# config.sim.dt=fast\nt\n0\n");
    CHECK_THROWS_AS(t.config_number("sim.dt"), DataError);
}
