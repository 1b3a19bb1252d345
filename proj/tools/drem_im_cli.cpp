// drem_im command line: run scenarios, check acceptance criteria, extract plot data.
//
// Exit codes: 0 success, 1 acceptance failure, 2 integration fault,
// 3 invalid input (configuration, arguments, telemetry).

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "drem_im/drem_im.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAcceptance = 1;
constexpr int kExitFault = 2;
constexpr int kExitInput = 3;

template <class T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};
using ConfigPtr = std::unique_ptr<drem_config, Deleter<drem_config, drem_config_destroy>>;
using ResultPtr = std::unique_ptr<drem_result, Deleter<drem_result, drem_result_destroy>>;
using ReportPtr = std::unique_ptr<drem_report, Deleter<drem_report, drem_report_destroy>>;

int report_error(const char* what) {
    std::cerr << "drem_im: " << what << ": " << drem_last_error() << '\n';
    return kExitInput;
}

// Reads a string out of one of the size-query style calls.
template <class F>
std::string fetch(F&& call) {
    std::size_t needed = 0;
    call(nullptr, 0, &needed);
    std::string s(needed, '\0');
    if (call(s.data(), s.size(), &needed) != DREM_OK) return {};
    s.resize(needed ? needed - 1 : 0);
    return s;
}

bool write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text << '\n';
    return static_cast<bool>(f);
}

struct RunOptions {
    std::string config;
    std::string out;
    std::vector<std::string> overrides;
    double duration = -1.0;
    std::string mode;
    std::string summary;
};

int cmd_run(const RunOptions& o) {
    drem_config* raw = nullptr;
    const drem_status st = o.config.empty() ? drem_config_create(&raw) : drem_config_load_file(o.config.c_str(), &raw);
    if (st != DREM_OK) return report_error("config");
    ConfigPtr cfg(raw);

    std::vector<std::pair<std::string, std::string>> sets;
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "drem_im: --set expects key=value, got '" << kv << "'\n";
            return kExitInput;
        }
        sets.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.duration >= 0.0) {
        std::ostringstream os;
        os.precision(17);
        os << o.duration;
        sets.emplace_back("sim.duration", os.str());
    }
    if (!o.mode.empty()) sets.emplace_back("observer.mode", o.mode);
    for (const auto& [k, v] : sets)
        if (drem_config_set(cfg.get(), k.c_str(), v.c_str()) != DREM_OK) return report_error("config");
    if (drem_config_validate(cfg.get()) != DREM_OK) return report_error("config");

    drem_result* rr = nullptr;
    const drem_status run = drem_run(cfg.get(), o.out.empty() ? nullptr : o.out.c_str(), &rr);
    ResultPtr result(rr);
    if (!result) return run == DREM_ERR_INTEGRATION ? kExitFault : report_error("run");

    const std::string json =
        fetch([&](char* b, std::size_t n, std::size_t* need) { return drem_result_json(result.get(), b, n, need); });
    std::cout << json << '\n';
    if (!o.summary.empty() && !write_text(o.summary, json)) {
        std::cerr << "drem_im: cannot write summary '" << o.summary << "'\n";
        return kExitInput;
    }
    if (run == DREM_ERR_INTEGRATION) {
        std::cerr << "drem_im: integration fault: " << drem_last_error() << '\n';
        return kExitFault;
    }
    return kExitOk;
}

struct CheckOptions {
    std::string canonical, refined, rerun, unexcited, ce;
    std::vector<int> criteria;
    std::string report;
    double wall_seconds = -1.0;
};

int cmd_check(const CheckOptions& o) {
    auto path = [](const std::string& s) { return s.empty() ? nullptr : s.c_str(); };
    const drem_check_inputs in{path(o.canonical), path(o.refined), path(o.rerun), path(o.unexcited), path(o.ce),
                               o.wall_seconds};
    drem_report* raw = nullptr;
    if (drem_check(&in, o.criteria.data(), o.criteria.size(), &raw) != DREM_OK) return report_error("check");
    ReportPtr report(raw);

    for (std::size_t k = 0; k < drem_report_count(report.get()); ++k) {
        std::cout << fetch([&](char* b, std::size_t n, std::size_t* need) {
            return drem_report_line(report.get(), k, b, n, need);
        }) << '\n';
    }
    if (!o.report.empty()) {
        const std::string json =
            fetch([&](char* b, std::size_t n, std::size_t* need) { return drem_report_json(report.get(), b, n, need); });
        if (!write_text(o.report, json)) {
            std::cerr << "drem_im: cannot write report '" << o.report << "'\n";
            return kExitInput;
        }
    }
    return drem_report_any_failed(report.get()) ? kExitAcceptance : kExitOk;
}

struct PlotOptions {
    std::string telemetry;
    std::vector<std::string> selectors;
    bool log_scale = false;
    std::string out;
};

int cmd_plot(const PlotOptions& o) {
    std::vector<const char*> sel;
    for (const auto& s : o.selectors) sel.push_back(s.c_str());
    if (drem_plot_data(o.telemetry.c_str(), sel.data(), sel.size(), o.log_scale ? 1 : 0, o.out.c_str()) != DREM_OK) {
        return report_error("plot-data");
    }
    for (const auto& s : o.selectors) std::cout << o.out << s << ".csv\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Induction motor observers driven by mixed regressions"};
    app.set_version_flag("--version", std::string(drem_version()));
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and log telemetry");
    run_cmd->add_option("-c,--config", run.config, "Scenario config file (defaults when omitted)")
        ->check(CLI::ExistingFile);
    run_cmd->add_option("-o,--out", run.out, "Telemetry CSV path");
    run_cmd->add_option("-s,--set", run.overrides, "Override, key=value (repeatable)");
    run_cmd->add_option("--duration", run.duration, "Simulated time [s]")->check(CLI::PositiveNumber);
    run_cmd->add_option("--mode", run.mode, "Observer mode")
        ->check(CLI::IsMember({"ground-truth", "certainty-equivalence"}));
    run_cmd->add_option("--summary", run.summary, "Also write the JSON summary here");

    CheckOptions check;
    auto* check_cmd = app.add_subcommand("check", "Evaluate acceptance criteria on telemetry");
    check_cmd->add_option("-t,--telemetry", check.canonical, "Canonical ground-truth run")->check(CLI::ExistingFile);
    check_cmd->add_option("--refined", check.refined, "Same scenario at dt/2")->check(CLI::ExistingFile);
    check_cmd->add_option("--rerun", check.rerun, "Repeat of the canonical run")->check(CLI::ExistingFile);
    check_cmd->add_option("--unexcited", check.unexcited, "Zero-voltage run")->check(CLI::ExistingFile);
    check_cmd->add_option("--ce", check.ce, "Certainty-equivalence run")->check(CLI::ExistingFile);
    check_cmd->add_option("--criteria", check.criteria, "Criterion ids (default: all)")
        ->delimiter(',')
        ->check(CLI::Range(1, 10));
    check_cmd->add_option("--wall-seconds", check.wall_seconds, "Measured wall time of the canonical run");
    check_cmd->add_option("-r,--report", check.report, "JSON report path");

    PlotOptions plot;
    auto* plot_cmd = app.add_subcommand("plot-data", "Extract columns for plotting");
    plot_cmd->add_option("-t,--telemetry", plot.telemetry, "Telemetry CSV")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--select", plot.selectors, "Selectors, comma separated")->delimiter(',');
    plot_cmd->add_flag("--log", plot.log_scale, "log10 of absolute values");
    plot_cmd->add_option("-o,--out", plot.out, "Output path prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    if (*run_cmd) return cmd_run(run);
    if (*check_cmd) return cmd_check(check);
    return cmd_plot(plot);
}
