#include "drem_im/drem_im.h"

#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "drem_im/acceptance.hpp"
#include "drem_im/drem.hpp"
#include "drem_im/errors.hpp"
#include "drem_im/plot_data.hpp"
#include "drem_im/run.hpp"
#include "drem_im/scenario.hpp"
#include "drem_im/telemetry.hpp"

struct drem_config {
    drem_im::ScenarioConfig cfg;
};

struct drem_result {
    drem_im::RunSummary summary;
};

struct drem_report {
    drem_im::AcceptanceReport report;
};

namespace {

thread_local std::string g_last_error;

drem_status fail(drem_status s, std::string message) {
    g_last_error = std::move(message);
    return s;
}

// Maps the library's exceptions onto status codes.
template <class F>
drem_status guarded(F&& f) {
    try {
        return f();
    } catch (const drem_im::ConfigError& e) {
        return fail(DREM_ERR_CONFIG, e.what());
    } catch (const drem_im::NumericFault& e) {
        return fail(DREM_ERR_INTEGRATION, e.what());
    } catch (const drem_im::DataError& e) {
        return fail(DREM_ERR_DATA, e.what());
    } catch (const drem_im::DimensionError& e) {
        return fail(DREM_ERR_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(DREM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DREM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(DREM_ERR_INTERNAL, "unknown error");
    }
}

drem_status copy_out(const std::string& s, char* buf, size_t buf_len, size_t* needed) {
    if (needed) *needed = s.size() + 1;
    if (!buf || buf_len < s.size() + 1) {
        return fail(DREM_ERR_BUFFER_TOO_SMALL, "buffer of " + std::to_string(buf_len) + " bytes, need " +
                                                   std::to_string(s.size() + 1));
    }
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return DREM_OK;
}

drem_excitation to_c(drem_im::Excitation e) {
    switch (e) {
        case drem_im::Excitation::insufficient: return DREM_EXCITATION_INSUFFICIENT;
        case drem_im::Excitation::non_l2_trending: return DREM_EXCITATION_NON_L2_TRENDING;
        case drem_im::Excitation::pe_like: return DREM_EXCITATION_PE_LIKE;
    }
    return DREM_EXCITATION_INSUFFICIENT;
}

}  // namespace

extern "C" {

const char* drem_version(void) { return "0.1.0"; }

const char* drem_last_error(void) { return g_last_error.c_str(); }

drem_status drem_config_create(drem_config** out) {
    if (!out) return fail(DREM_ERR_ARGUMENT, "out is NULL");
    return guarded([&] {
        *out = new drem_config{};
        return DREM_OK;
    });
}

drem_status drem_config_load_file(const char* path, drem_config** out) {
    if (!path || !out) return fail(DREM_ERR_ARGUMENT, "path or out is NULL");
    return guarded([&] {
        auto cfg = drem_im::load_config(path);
        *out = new drem_config{std::move(cfg)};
        return DREM_OK;
    });
}

drem_status drem_config_set(drem_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return fail(DREM_ERR_ARGUMENT, "cfg, key or value is NULL");
    return guarded([&] {
        drem_im::set_option(cfg->cfg, key, value);
        return DREM_OK;
    });
}

drem_status drem_config_get(const drem_config* cfg, const char* key, char* buf, size_t buf_len, size_t* needed) {
    if (!cfg || !key) return fail(DREM_ERR_ARGUMENT, "cfg or key is NULL");
    return guarded([&] {
        for (const auto& [k, v] : drem_im::config_entries(cfg->cfg))
            if (k == key) return copy_out(v, buf, buf_len, needed);
        return fail(DREM_ERR_CONFIG, std::string("unknown key '") + key + "'");
    });
}

drem_status drem_config_validate(const drem_config* cfg) {
    if (!cfg) return fail(DREM_ERR_ARGUMENT, "cfg is NULL");
    return guarded([&] {
        cfg->cfg.validate();
        return DREM_OK;
    });
}

void drem_config_destroy(drem_config* cfg) { delete cfg; }

drem_status drem_run(const drem_config* cfg, const char* telemetry_path, drem_result** out) {
    if (!cfg || !out) return fail(DREM_ERR_ARGUMENT, "cfg or out is NULL");
    *out = nullptr;
    return guarded([&] {
        drem_im::ScenarioConfig c = cfg->cfg;
        if (telemetry_path) c.telemetry_path = telemetry_path;
        auto* r = new drem_result{drem_im::run_scenario_to_file(c)};
        *out = r;
        if (r->summary.status == drem_im::RunStatus::fault) return fail(DREM_ERR_INTEGRATION, r->summary.fault);
        return DREM_OK;
    });
}

drem_status drem_result_summary(const drem_result* r, drem_summary* out) {
    if (!r || !out) return fail(DREM_ERR_ARGUMENT, "result or out is NULL");
    const auto& s = r->summary;
    drem_summary d{};
    d.faulted = s.status == drem_im::RunStatus::fault;
    d.fault_time = s.fault_time;
    d.end_time = s.end_time;
    d.steps = s.steps;
    d.rows = s.rows;
    d.flux_err_norm = s.flux_err_norm;
    d.rr_err = s.rr_err;
    d.omega_err = s.omega_err;
    d.tl_err = s.tl_err;
    d.settled_flux = s.convergence.flux;
    d.settled_rr = s.convergence.rr;
    d.settled_tl = s.convergence.tl;
    d.settled_omega = s.convergence.omega;
    d.int_delta_e_sq = s.int_delta_e_sq;
    d.int_delta_m_sq = s.int_delta_m_sq;
    d.excitation_e = to_c(s.excitation_e);
    d.excitation_m = to_c(s.excitation_m);
    d.flux_floor_events = s.flux_floor_events;
    d.wall_seconds = s.wall_seconds;
    *out = d;
    return DREM_OK;
}

drem_status drem_result_json(const drem_result* r, char* buf, size_t buf_len, size_t* needed) {
    if (!r) return fail(DREM_ERR_ARGUMENT, "result is NULL");
    return guarded([&] { return copy_out(drem_im::summary_json(r->summary), buf, buf_len, needed); });
}

void drem_result_destroy(drem_result* r) { delete r; }

drem_status drem_check(const drem_check_inputs* in, const int* criteria, size_t n_criteria, drem_report** out) {
    if (!in || !out) return fail(DREM_ERR_ARGUMENT, "inputs or out is NULL");
    if (n_criteria > 0 && !criteria) return fail(DREM_ERR_ARGUMENT, "criteria is NULL");
    *out = nullptr;
    return guarded([&] {
        std::optional<drem_im::TelemetryTable> tabs[5];
        const char* paths[5] = {in->canonical, in->refined, in->rerun, in->unexcited, in->ce};
        for (int k = 0; k < 5; ++k)
            if (paths[k]) tabs[k] = drem_im::read_telemetry_file(paths[k]);
        drem_im::AcceptanceInputs ai;
        ai.canonical = tabs[0] ? &*tabs[0] : nullptr;
        ai.refined = tabs[1] ? &*tabs[1] : nullptr;
        ai.rerun = tabs[2] ? &*tabs[2] : nullptr;
        ai.unexcited = tabs[3] ? &*tabs[3] : nullptr;
        ai.ce = tabs[4] ? &*tabs[4] : nullptr;
        if (in->canonical_wall_seconds >= 0.0) ai.canonical_wall_seconds = in->canonical_wall_seconds;
        const std::vector<int> ids(criteria, criteria + n_criteria);
        *out = new drem_report{drem_im::check_acceptance(ai, ids)};
        return DREM_OK;
    });
}

size_t drem_report_count(const drem_report* r) { return r ? r->report.criteria.size() : 0; }

drem_status drem_report_criterion(const drem_report* r, size_t index, int* id, drem_verdict* verdict) {
    if (!r) return fail(DREM_ERR_ARGUMENT, "report is NULL");
    if (index >= r->report.criteria.size()) return fail(DREM_ERR_ARGUMENT, "criterion index out of range");
    const auto& c = r->report.criteria[index];
    if (id) *id = c.id;
    if (verdict) {
        *verdict = c.verdict == drem_im::Verdict::pass   ? DREM_VERDICT_PASS
                   : c.verdict == drem_im::Verdict::fail ? DREM_VERDICT_FAIL
                                                         : DREM_VERDICT_SKIPPED;
    }
    return DREM_OK;
}

drem_status drem_report_line(const drem_report* r, size_t index, char* buf, size_t buf_len, size_t* needed) {
    if (!r) return fail(DREM_ERR_ARGUMENT, "report is NULL");
    if (index >= r->report.criteria.size()) return fail(DREM_ERR_ARGUMENT, "criterion index out of range");
    return guarded(
        [&] { return copy_out(drem_im::format_criterion_line(r->report.criteria[index]), buf, buf_len, needed); });
}

drem_status drem_report_json(const drem_report* r, char* buf, size_t buf_len, size_t* needed) {
    if (!r) return fail(DREM_ERR_ARGUMENT, "report is NULL");
    return guarded([&] { return copy_out(r->report.to_json(), buf, buf_len, needed); });
}

int drem_report_all_passed(const drem_report* r) { return r && r->report.all_passed() ? 1 : 0; }

int drem_report_any_failed(const drem_report* r) { return r && r->report.any_failed() ? 1 : 0; }

void drem_report_destroy(drem_report* r) { delete r; }

drem_status drem_plot_data(const char* telemetry_path, const char* const* selectors, size_t n_selectors,
                           int log_scale, const char* out_prefix) {
    if (!telemetry_path || !out_prefix) return fail(DREM_ERR_ARGUMENT, "telemetry_path or out_prefix is NULL");
    if (n_selectors > 0 && !selectors) return fail(DREM_ERR_ARGUMENT, "selectors is NULL");
    return guarded([&] {
        std::vector<std::string> sel;
        for (size_t k = 0; k < n_selectors; ++k) {
            if (!selectors[k]) return fail(DREM_ERR_ARGUMENT, "selector " + std::to_string(k) + " is NULL");
            sel.emplace_back(selectors[k]);
        }
        const auto table = drem_im::read_telemetry_file(telemetry_path);
        drem_im::emit_plot_data(table, sel, log_scale != 0, out_prefix);
        return DREM_OK;
    });
}

drem_status drem_mix(size_t n, const double* a_row_major, const double* y, double* zeta, double* delta) {
    if (!a_row_major || !y || !zeta || !delta) return fail(DREM_ERR_ARGUMENT, "NULL buffer");
    return guarded([&] {
        drem_im::mix_dynamic(n, {a_row_major, n * n}, {y, n}, {zeta, n}, *delta);
        return DREM_OK;
    });
}

}  // extern "C"
