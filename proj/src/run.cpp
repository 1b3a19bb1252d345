#include "drem_im/run.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <ostream>

#include "drem_im/errors.hpp"
#include "drem_im/simulation.hpp"
#include "drem_im/telemetry.hpp"

namespace drem_im {

namespace {

class SettleTracker {
public:
    explicit SettleTracker(double threshold) : threshold_(threshold) {}

    void observe(double t, double err) {
        if (!(std::abs(err) < threshold_)) {
            settled_since_ = -1.0;
        } else if (settled_since_ < 0.0) {
            settled_since_ = t;
        }
    }
    double settled_since() const { return settled_since_; }

private:
    double threshold_;
    double settled_since_ = -1.0;
};

}  // namespace

RunSummary run_scenario(const ScenarioConfig& cfg, std::ostream* telemetry, const ConvergenceThresholds& th) {
    const auto started = std::chrono::steady_clock::now();
    RunSummary out;
    Simulation sim(cfg);
    std::unique_ptr<TelemetryWriter> writer;
    if (telemetry) writer = std::make_unique<TelemetryWriter>(*telemetry, cfg);

    SettleTracker flux(th.flux_rel * cfg.ctrl.flux_ref);
    SettleTracker rr(th.rr_rel * cfg.motor.Rr);
    SettleTracker tl(th.tl_rel * std::abs(cfg.motor.TL));
    SettleTracker omega(th.omega_abs);

    auto observe = [&] {
        const Signals& s = sim.signals();
        flux.observe(s.t, norm(s.motor.lambda - s.lambda_hat));
        rr.observe(s.t, s.observer.rr_hat - cfg.motor.Rr);
        tl.observe(s.t, s.observer.tl_hat - cfg.motor.TL);
        omega.observe(s.t, s.observer.omega_hat - s.motor.omega);
    };
    auto log = [&] {
        if (writer) {
            writer->write(make_record(sim));
            ++out.rows;
        }
    };

    observe();
    log();
    try {
        while (!sim.finished()) {
            sim.step();
            observe();
            if (sim.step_index() % cfg.decimation == 0 || sim.finished()) log();
        }
    } catch (const NumericFault& e) {
        out.status = RunStatus::fault;
        out.fault = e.what();
        out.fault_time = e.time();
    }
    if (telemetry) telemetry->flush();

    const Signals& s = sim.signals();
    out.end_time = s.t;
    out.steps = sim.step_index();
    out.flux_err_norm = norm(s.motor.lambda - s.lambda_hat);
    out.rr_err = s.observer.rr_hat - cfg.motor.Rr;
    out.omega_err = s.observer.omega_hat - s.motor.omega;
    out.tl_err = s.observer.tl_hat - cfg.motor.TL;
    out.convergence = {flux.settled_since(), rr.settled_since(), tl.settled_since(), omega.settled_since()};
    out.int_delta_e_sq = sim.electrical_monitor().integral();
    out.int_delta_m_sq = sim.mechanical_monitor().integral();
    out.excitation_e = sim.electrical_monitor().classification();
    out.excitation_m = sim.mechanical_monitor().classification();
    out.flux_floor_events = sim.flux_floor_events();
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

RunSummary run_scenario_to_file(const ScenarioConfig& cfg, const ConvergenceThresholds& th) {
    if (cfg.telemetry_path.empty()) return run_scenario(cfg, nullptr, th);
    std::ofstream f(cfg.telemetry_path, std::ios::binary);
    if (!f) throw DataError("cannot open telemetry output '" + cfg.telemetry_path + "'");
    return run_scenario(cfg, &f, th);
}

std::string summary_json(const RunSummary& s, int indent) {
    auto settle = [](double t) { return t < 0.0 ? nlohmann::json(nullptr) : nlohmann::json(t); };
    nlohmann::json j;
    j["status"] = s.status == RunStatus::ok ? "ok" : "fault";
    if (s.status == RunStatus::fault) {
        j["fault"] = s.fault;
        j["fault_time"] = s.fault_time;
    }
    j["end_time"] = s.end_time;
    j["steps"] = s.steps;
    j["rows"] = s.rows;
    j["final_error"] = {{"flux_norm", s.flux_err_norm}, {"rr", s.rr_err}, {"omega", s.omega_err}, {"tl", s.tl_err}};
    j["settled_since"] = {{"flux", settle(s.convergence.flux)},
                          {"rr", settle(s.convergence.rr)},
                          {"tl", settle(s.convergence.tl)},
                          {"omega", settle(s.convergence.omega)}};
    j["excitation"] = {
        {"electrical", {{"int_delta_sq", s.int_delta_e_sq}, {"class", std::string(to_string(s.excitation_e))}}},
        {"mechanical", {{"int_delta_sq", s.int_delta_m_sq}, {"class", std::string(to_string(s.excitation_m))}}},
    };
    j["flux_floor_events"] = s.flux_floor_events;
    j["wall_seconds"] = s.wall_seconds;
    return j.dump(indent);
}

}  // namespace drem_im
