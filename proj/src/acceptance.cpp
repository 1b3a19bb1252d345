#include "drem_im/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "drem_im/errors.hpp"
#include "drem_im/mechanical_regression.hpp"

namespace drem_im {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Check make_check(std::string name, double measured, std::string relation, double bound) {
    bool pass = false;
    if (std::isfinite(measured)) {
        if (relation == "<") pass = measured < bound;
        else if (relation == "<=") pass = measured <= bound;
        else if (relation == ">") pass = measured > bound;
        else if (relation == ">=") pass = measured >= bound;
        else if (relation == "==") pass = measured == bound;
    }
    return {std::move(name), measured, std::move(relation), bound, pass};
}

void finish(CriterionResult& r) {
    r.verdict = Verdict::pass;
    for (const auto& c : r.checks)
        if (!c.pass) r.verdict = Verdict::fail;
    if (r.checks.empty()) r.verdict = Verdict::fail;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

// Column view with the table's config.
struct Run {
    const TelemetryTable& table;
    ScenarioConfig cfg;
    std::vector<double> t;

    explicit Run(const TelemetryTable& tab) : table(tab), cfg(config_from_telemetry(tab)), t(tab.column("t")) {
        if (t.empty()) throw DataError("telemetry has no data rows");
        const double tol = cfg.dt * std::max(cfg.decimation, 1);
        if (t.back() < cfg.duration - tol) {
            throw DataError("telemetry is incomplete: ends at t=" + fmt(t.back()) + " s of " + fmt(cfg.duration) +
                            " s");
        }
    }
    std::vector<double> col(std::string_view name) const { return table.column(name); }

    // First row where the observers were active; rows.size() when never.
    std::size_t enable_row() const {
        const auto active = col("observer_active");
        for (std::size_t k = 0; k < active.size(); ++k)
            if (active[k] != 0.0) return k;
        return active.size();
    }
};

double max_from(const std::vector<double>& t, const std::vector<double>& v, double t0) {
    double m = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] + 1e-12 < t0) continue;
        any = true;
        m = std::max(m, std::isfinite(v[k]) ? v[k] : std::numeric_limits<double>::infinity());
    }
    return any ? m : kNaN;
}

std::vector<double> flux_error_norm(const Run& r) {
    const auto a = r.col("flux_err_a");
    const auto b = r.col("flux_err_b");
    std::vector<double> n(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) n[k] = std::hypot(a[k], b[k]);
    return n;
}

// Compares |e(t)| with |e(t_on)| exp(-γ (I(t) - I(t_on))) over rows after
// enable where |e| exceeds `floor`.
struct ClosedForm {
    double initial = 0.0;
    double smallest = 0.0;
    double max_deviation = 0.0;
    std::size_t rows = 0;
};

ClosedForm closed_form(const std::vector<double>& err, const std::vector<double>& integral, std::size_t k0,
                       double gamma, double floor) {
    ClosedForm c;
    c.initial = std::abs(err[k0]);
    c.smallest = c.initial;
    for (std::size_t k = k0; k < err.size(); ++k) {
        const double e = std::abs(err[k]);
        c.smallest = std::min(c.smallest, e);
        if (!(e > floor)) continue;
        const double pred = c.initial * std::exp(-gamma * (integral[k] - integral[k0]));
        c.max_deviation = std::max(c.max_deviation, std::abs(e - pred) / pred);
        ++c.rows;
    }
    return c;
}

// Coefficient of determination of the least-squares line through (x, y).
double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return kNaN;
    return sxy * sxy / (sxx * syy);
}

// Log-linear fit over the last decade of |e| above its numerical floor. The
// floor is the largest |e| over the final tenth of the run; the decade is the
// stretch from the last sample at or above 100x floor down to 10x floor.
struct TailFit {
    bool resolvable = false;
    double floor = 0.0;
    double r2 = kNaN;
    double rate = kNaN;
    std::size_t samples = 0;
};

TailFit tail_fit(const std::vector<double>& t, const std::vector<double>& err, std::size_t k0) {
    TailFit f;
    const double t_end = t.back();
    const double t_floor = t_end - 0.1 * (t_end - t[k0]);
    for (std::size_t k = k0; k < t.size(); ++k)
        if (t[k] >= t_floor) f.floor = std::max(f.floor, std::abs(err[k]));
    const double hi = 100.0 * f.floor;
    const double lo = 10.0 * f.floor;
    std::size_t start = t.size();
    for (std::size_t k = k0; k < t.size(); ++k)
        if (std::abs(err[k]) >= hi) start = k;
    if (f.floor <= 0.0 || start == t.size()) return f;
    f.resolvable = true;
    std::vector<double> x, y;
    for (std::size_t k = start; k < t.size(); ++k) {
        const double e = std::abs(err[k]);
        if (e <= lo) break;
        x.push_back(t[k]);
        y.push_back(std::log(e));
    }
    f.samples = x.size();
    if (x.size() >= 2) {
        f.r2 = r_squared(x, y);
        f.rate = -(y.back() - y.front()) / (x.back() - x.front());
    }
    return f;
}

const std::vector<std::string>& residual_columns() {
    static const std::vector<std::string> cols = {"lre_res_1", "lre_res_2", "lre_res_3", "lre_res_4", "lre_res_5",
                                                  "lre_res_6", "drem_res",  "adj_identity_res", "mech_res"};
    return cols;
}

CriterionResult skipped(int id, std::string title, std::string why) {
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    r.verdict = Verdict::skipped;
    r.notes.push_back(std::move(why));
    return r;
}

// ---------------------------------------------------------------------------

CriterionResult c1(const Run& run, std::optional<double> wall) {
    CriterionResult r{1, "electrical regression identity", {}, {}, {}};
    run.table.require(residual_columns());
    double worst = 0.0;
    for (std::size_t l = 1; l <= kElectricalChains; ++l)
        worst = std::max(worst, max_from(run.t, run.col("lre_res_" + std::to_string(l)), 1.0));
    r.checks.push_back(make_check("max per-chain residual for t >= 1 s", worst, "<", 1e-3));
    if (wall) {
        r.checks.push_back(make_check("wall time of the run [s]", *wall, "<=", 60.0));
    } else {
        r.notes.push_back("run time not measured for this input");
    }
    finish(r);
    return r;
}

CriterionResult c2(const Run& run) {
    CriterionResult r{2, "mixed regression identity", {}, {}, {}};
    run.table.require({"drem_res", "adj_identity_res"});
    r.checks.push_back(make_check("max mixed residual for t >= 1 s", max_from(run.t, run.col("drem_res"), 1.0), "<",
                                  1e-3));
    r.checks.push_back(make_check("max adjugate identity residual, all rows",
                                  max_from(run.t, run.col("adj_identity_res"), run.t.front()), "<", 1e-9));
    finish(r);
    return r;
}

CriterionResult c3(const Run& run) {
    CriterionResult r{3, "flux error closed form", {}, {}, {}};
    run.table.require({"flux_err_a", "flux_err_b", "int_delta_e_sq", "observer_active"});
    const std::size_t k0 = run.enable_row();
    if (k0 == run.t.size()) {
        r.notes.push_back("observers never active");
        r.checks.push_back(make_check("rows with observers active", 0, ">=", 1));
        finish(r);
        return r;
    }
    constexpr double floor = 1e-6;
    const auto err = flux_error_norm(run);
    const ClosedForm cf = closed_form(err, run.col("int_delta_e_sq"), k0, run.cfg.gains.gamma_lambda, floor);
    r.notes.push_back("|flux error| at enable " + fmt(cf.initial) + " Wb, smallest afterwards " + fmt(cf.smallest) +
                      " Wb");
    if (cf.initial <= floor) {
        r.checks.push_back(make_check("|flux error| at enable [Wb]", cf.initial, "<=", floor));
    } else {
        // The comparison is meaningful over a decade of decay, or down to the floor.
        const double decay = cf.initial / std::max(cf.smallest, floor);
        r.checks.push_back(make_check("decay factor of |flux error| after enable", decay, ">=",
                                      std::min(10.0, cf.initial / floor)));
        r.checks.push_back(make_check("max relative deviation from closed form", cf.max_deviation, "<", 0.05));
    }
    finish(r);
    return r;
}

CriterionResult c4(const Run& run) {
    CriterionResult r{4, "rotor resistance convergence", {}, {}, {}};
    run.table.require({"rr_err", "int_delta_e_sq", "observer_active"});
    const double Rr = run.cfg.motor.Rr;
    const auto err = run.col("rr_err");
    r.checks.push_back(make_check("final |Rr error| / Rr", std::abs(err.back()) / Rr, "<", 0.01));
    const std::size_t k0 = run.enable_row();
    if (k0 < run.t.size()) {
        const ClosedForm cf = closed_form(err, run.col("int_delta_e_sq"), k0, run.cfg.gains.gamma_r, 1e-6 * Rr);
        r.checks.push_back(make_check("max relative deviation from closed form", cf.max_deviation, "<", 0.05));
        r.notes.push_back("|Rr error| at enable " + fmt(cf.initial) + " ohm");
    }
    finish(r);
    return r;
}

CriterionResult c5(const Run& run) {
    CriterionResult r{5, "mechanical regression identity", {}, {}, {}};
    run.table.require({"mech_res"});
    const double t0 = run.cfg.enable_time + 5.0 / run.cfg.a;
    r.checks.push_back(make_check("max mechanical residual for t >= " + fmt(t0) + " s",
                                  max_from(run.t, run.col("mech_res"), t0), "<", 1e-3));
    finish(r);
    return r;
}

CriterionResult c6(const Run& run) {
    CriterionResult r{6, "load torque and speed convergence", {}, {}, {}};
    run.table.require({"tl_err", "omega_err", "observer_active"});
    const auto tl = run.col("tl_err");
    const auto om = run.col("omega_err");
    r.checks.push_back(make_check("final |TL error| / |TL|", std::abs(tl.back()) / std::abs(run.cfg.motor.TL), "<",
                                  0.01));
    r.checks.push_back(make_check("final |speed error| [rad/s]", std::abs(om.back()), "<", 0.1));
    const std::size_t k0 = run.enable_row();
    if (k0 == run.t.size()) {
        r.notes.push_back("observers never active");
        finish(r);
        return r;
    }
    for (const auto& [name, err] : {std::pair{"TL error", tl}, std::pair{"speed error", om}}) {
        const TailFit f = tail_fit(run.t, err, k0);
        if (!f.resolvable) {
            r.notes.push_back(std::string(name) + ": no decade above the numerical floor to fit");
            continue;
        }
        r.notes.push_back(std::string(name) + ": floor " + fmt(f.floor) + ", tail rate " + fmt(f.rate) + " 1/s over " +
                          std::to_string(f.samples) + " samples");
        r.checks.push_back(make_check(std::string(name) + " tail samples", static_cast<double>(f.samples), ">=", 5));
        r.checks.push_back(make_check(std::string(name) + " tail log-linear R^2", f.r2, ">", 0.99));
    }
    finish(r);
    return r;
}

CriterionResult c7(const Run& run) {
    CriterionResult r{7, "mechanical excitation steady state", {}, {}, {}};
    run.table.require({"delta_m"});
    const auto dm = run.col("delta_m");
    const double t0 = run.t.back() - 2.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < dm.size(); ++k) {
        if (run.t[k] < t0) continue;
        lo = std::min(lo, dm[k]);
        hi = std::max(hi, dm[k]);
        sum += dm[k];
        ++n;
    }
    const double mean = n ? sum / static_cast<double>(n) : kNaN;
    const auto& c = run.cfg;
    const SteadyStateDelta pred =
        steady_state_delta(c.ctrl.omega_ref, c.ctrl.flux_ref, c.motor.Rr, c.motor.TL, c.a, c.motor.J, c.motor.n_p);
    r.checks.push_back(make_check("ripple (max - min) / |mean| over the final 2 s", (hi - lo) / std::abs(mean), "<",
                                  0.01));
    r.checks.push_back(make_check("|mean - prediction| / |prediction|",
                                  std::abs(mean - pred.delta_predicted) / std::abs(pred.delta_predicted), "<", 0.02));
    r.notes.push_back("simulated mean " + fmt(mean) + ", frequency-response prediction " + fmt(pred.delta_predicted) +
                      " at varpi " + fmt(pred.varpi) + " rad/s; gain-free expression -(|flux|/J) sin(psi) = " +
                      fmt(pred.delta_unscaled) + " (reported only)");
    finish(r);
    return r;
}

CriterionResult c8(const Run* canonical, const Run* unexcited) {
    CriterionResult r{8, "excitation monitors", {}, {}, {}};
    if (canonical) {
        const double l2 = canonical->cfg.monitor.l2_ratio;
        for (const auto& [name, col] : {std::pair{"electrical", "int_delta_e_sq"}, std::pair{"mechanical", "int_delta_m_sq"}}) {
            const ExcitationReading e = excitation_from_telemetry(canonical->table, col);
            r.checks.push_back(make_check(std::string("canonical ") + name + " last-window / mean-window energy",
                                          e.growth_ratio, ">=", l2));
            r.notes.push_back(std::string("canonical ") + name + ": " + std::string(to_string(e.excitation)) +
                              ", integral " + fmt(e.integral));
        }
    } else {
        r.notes.push_back("canonical telemetry not supplied");
    }
    if (unexcited) {
        unexcited->table.require({"lambda_hat_a", "lambda_hat_b", "int_delta_e_sq"});
        const ExcitationReading e = excitation_from_telemetry(unexcited->table, "int_delta_e_sq");
        r.checks.push_back(make_check("unexcited electrical last-window / mean-window energy", e.growth_ratio, "<",
                                      unexcited->cfg.monitor.l2_ratio));
        r.notes.push_back("unexcited electrical: " + std::string(to_string(e.excitation)));

        // Drift of the flux estimate over the final second, relative to its size.
        const auto a = unexcited->col("lambda_hat_a");
        const auto b = unexcited->col("lambda_hat_b");
        const double t0 = unexcited->t.back() - 1.0;
        double drift = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k)
            if (unexcited->t[k] >= t0) drift = std::max(drift, std::hypot(a[k] - a.back(), b[k] - b.back()));
        const double size = std::hypot(a.back(), b.back());
        r.checks.push_back(make_check("unexcited flux estimate drift over the final 1 s / |estimate|",
                                      size > 0.0 ? drift / size : drift, "<", 1e-6));
    } else {
        r.notes.push_back("unexcited telemetry not supplied");
    }
    if (!canonical && !unexcited) return skipped(8, r.title, "no telemetry supplied");
    finish(r);
    if (!canonical || !unexcited) {
        if (r.verdict == Verdict::pass) r.verdict = Verdict::skipped;
    }
    return r;
}

CriterionResult c9(const Run* canonical, const Run* refined, const Run* rerun) {
    CriterionResult r{9, "numerical hygiene", {}, {}, {}};
    if (canonical && refined) {
        canonical->table.require(residual_columns());
        refined->table.require(residual_columns());
        // Pair rows logged at the same instant.
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        std::size_t j = 0;
        const double tol = 0.25 * refined->cfg.dt;
        for (std::size_t k = 0; k < canonical->t.size(); ++k) {
            while (j < refined->t.size() && refined->t[j] < canonical->t[k] - tol) ++j;
            if (j < refined->t.size() && std::abs(refined->t[j] - canonical->t[k]) <= tol) pairs.emplace_back(k, j);
        }
        r.checks.push_back(make_check("rows logged at common instants", static_cast<double>(pairs.size()), ">=",
                                      static_cast<double>(canonical->t.size()) * 0.99));
        const double t_mech = canonical->cfg.enable_time + 5.0 / canonical->cfg.a;
        struct Family {
            std::string label;
            std::vector<std::string> cols;
            double bound;
            double from;
        };
        const std::vector<Family> families = {
            {"per-chain residuals", {"lre_res_1", "lre_res_2", "lre_res_3", "lre_res_4", "lre_res_5", "lre_res_6"}, 1e-3, 1.0},
            {"mixed residual", {"drem_res"}, 1e-3, 1.0},
            {"adjugate identity residual", {"adj_identity_res"}, 1e-9, -1.0},
            {"mechanical residual", {"mech_res"}, 1e-3, t_mech},
        };
        for (const auto& f : families) {
            double worst = 0.0;
            for (const auto& c : f.cols) {
                const auto a = canonical->col(c);
                const auto b = refined->col(c);
                for (const auto& [k, jj] : pairs)
                    if (canonical->t[k] + 1e-12 >= f.from) worst = std::max(worst, std::abs(a[k] - b[jj]));
            }
            r.checks.push_back(make_check("max change of " + f.label + " under dt/2", worst, "<=", f.bound / 8.0));
        }
    } else {
        r.notes.push_back("dt/2 telemetry not supplied");
    }
    if (canonical && rerun) {
        std::size_t differing = 0;
        const auto& A = canonical->table;
        const auto& B = rerun->table;
        if (A.columns != B.columns || A.rows.size() != B.rows.size()) {
            differing = std::numeric_limits<std::size_t>::max();
        } else {
            for (std::size_t k = 0; k < A.rows.size(); ++k)
                for (std::size_t c = 0; c < A.columns.size(); ++c)
                    if (std::memcmp(&A.rows[k][c], &B.rows[k][c], sizeof(double)) != 0) ++differing;
        }
        r.checks.push_back(make_check("values differing between reruns", static_cast<double>(differing), "==", 0));
    } else {
        r.notes.push_back("rerun telemetry not supplied");
    }
    if (r.checks.empty()) return skipped(9, r.title, "dt/2 and rerun telemetry not supplied");
    finish(r);
    if (!(canonical && refined && rerun) && r.verdict == Verdict::pass) r.verdict = Verdict::skipped;
    return r;
}

CriterionResult c10(const Run& run) {
    CriterionResult r{10, "certainty-equivalence mode", {}, {}, {}};
    run.table.require({"tl_err", "omega_err"});
    if (run.cfg.mode != ObserverMode::certainty_equivalence) {
        throw DataError("certainty-equivalence telemetry was recorded in mode " + std::string(to_string(run.cfg.mode)));
    }
    r.checks.push_back(make_check("final |TL error| / |TL|",
                                  std::abs(run.col("tl_err").back()) / std::abs(run.cfg.motor.TL), "<=", 0.05));
    r.checks.push_back(make_check("final |speed error| [rad/s]", std::abs(run.col("omega_err").back()), "<=", 0.5));
    r.notes.push_back("empirical only");
    finish(r);
    return r;
}

const char* const kTitles[kCriterionCount] = {
    "electrical regression identity", "mixed regression identity", "flux error closed form",
    "rotor resistance convergence",   "mechanical regression identity", "load torque and speed convergence",
    "mechanical excitation steady state", "excitation monitors", "numerical hygiene",
    "certainty-equivalence mode",
};

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::skipped: return "SKIPPED";
    }
    return "unknown";
}

ScenarioConfig config_from_telemetry(const TelemetryTable& t) {
    ScenarioConfig cfg;
    std::vector<std::string> problems;
    bool any = false;
    for (const auto& [key, value] : t.meta) {
        if (key.rfind("config.", 0) != 0) continue;
        any = true;
        try {
            set_option(cfg, key.substr(7), value);
        } catch (const ConfigError& e) {
            for (const auto& p : e.problems()) problems.push_back(p);
        }
    }
    if (!any) throw DataError("telemetry carries no config metadata");
    if (!problems.empty()) throw DataError("telemetry config metadata is invalid: " + problems.front());
    return cfg;
}

ExcitationReading excitation_from_telemetry(const TelemetryTable& t, std::string_view integral_column) {
    t.require({"t", std::string(integral_column), "observer_active"});
    const ScenarioConfig cfg = config_from_telemetry(t);
    const auto time = t.column("t");
    const auto integral = t.column(integral_column);
    const auto active = t.column("observer_active");
    ExcitationMonitor mon(cfg.monitor);
    bool started = false;
    for (std::size_t k = 0; k < time.size(); ++k) {
        if (active[k] == 0.0) continue;
        if (started) mon.advance(time[k] - time[k - 1], integral[k] - integral[k - 1]);
        started = true;
    }
    ExcitationReading out;
    out.excitation = mon.classification();
    out.integral = mon.integral();
    const double mean_window = mon.elapsed() > 0.0 ? mon.integral() / mon.elapsed() * cfg.monitor.window : 0.0;
    out.growth_ratio = mean_window > 0.0 ? mon.last_window() / mean_window : 0.0;
    return out;
}

AcceptanceReport check_acceptance(const AcceptanceInputs& in, const std::vector<int>& which) {
    std::vector<int> ids = which;
    if (ids.empty())
        for (int k = 1; k <= kCriterionCount; ++k) ids.push_back(k);
    for (int id : ids)
        if (id < 1 || id > kCriterionCount) throw DataError("unknown criterion id " + std::to_string(id));

    std::optional<Run> canonical, refined, rerun, unexcited, ce;
    if (in.canonical) canonical.emplace(*in.canonical);
    if (in.refined) refined.emplace(*in.refined);
    if (in.rerun) rerun.emplace(*in.rerun);
    if (in.unexcited) unexcited.emplace(*in.unexcited);
    if (in.ce) ce.emplace(*in.ce);

    AcceptanceReport report;
    for (int id : ids) {
        const std::string title = kTitles[id - 1];
        const Run* can = canonical ? &*canonical : nullptr;
        switch (id) {
            case 1: report.criteria.push_back(can ? c1(*can, in.canonical_wall_seconds)
                                                  : skipped(id, title, "canonical telemetry not supplied")); break;
            case 2: report.criteria.push_back(can ? c2(*can) : skipped(id, title, "canonical telemetry not supplied")); break;
            case 3: report.criteria.push_back(can ? c3(*can) : skipped(id, title, "canonical telemetry not supplied")); break;
            case 4: report.criteria.push_back(can ? c4(*can) : skipped(id, title, "canonical telemetry not supplied")); break;
            case 5: report.criteria.push_back(can ? c5(*can) : skipped(id, title, "canonical telemetry not supplied")); break;
            case 6: report.criteria.push_back(can ? c6(*can) : skipped(id, title, "canonical telemetry not supplied")); break;
            case 7: report.criteria.push_back(can ? c7(*can) : skipped(id, title, "canonical telemetry not supplied")); break;
            case 8: report.criteria.push_back(c8(can, unexcited ? &*unexcited : nullptr)); break;
            case 9: report.criteria.push_back(c9(can, refined ? &*refined : nullptr, rerun ? &*rerun : nullptr)); break;
            case 10: report.criteria.push_back(ce ? c10(*ce) : skipped(id, title, "certainty-equivalence telemetry not supplied")); break;
        }
    }
    return report;
}

bool AcceptanceReport::any_failed() const {
    return std::any_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.verdict == Verdict::fail; });
}

bool AcceptanceReport::all_passed() const {
    return !criteria.empty() &&
           std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.verdict == Verdict::pass; });
}

std::string AcceptanceReport::to_json(int indent) const {
    auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
    nlohmann::json j;
    j["schema"] = "drem-im-acceptance/1";
    j["criteria"] = nlohmann::json::array();
    for (const auto& c : criteria) {
        nlohmann::json e;
        e["id"] = c.id;
        e["title"] = c.title;
        e["verdict"] = std::string(to_string(c.verdict));
        // Headline: the first failing check, otherwise the first check.
        const auto head = std::find_if(c.checks.begin(), c.checks.end(), [](const Check& k) { return !k.pass; });
        const Check* h = head != c.checks.end() ? &*head : (c.checks.empty() ? nullptr : &c.checks.front());
        e["measured"] = h ? num(h->measured) : nlohmann::json(nullptr);
        e["bound"] = h ? num(h->bound) : nlohmann::json(nullptr);
        e["checks"] = nlohmann::json::array();
        for (const auto& k : c.checks) {
            e["checks"].push_back({{"name", k.name},
                                   {"measured", num(k.measured)},
                                   {"relation", k.relation},
                                   {"bound", k.bound},
                                   {"pass", k.pass}});
        }
        e["notes"] = c.notes;
        j["criteria"].push_back(std::move(e));
    }
    j["all_passed"] = all_passed();
    return j.dump(indent);
}

std::string format_criterion_line(const CriterionResult& r) {
    std::string line = "criterion " + std::to_string(r.id) + " " + std::string(to_string(r.verdict)) + "  " + r.title;
    const char* sep = ": ";
    for (const auto& c : r.checks) {
        line += sep;
        line += c.name + " = " + fmt(c.measured) + " (" + c.relation + " " + fmt(c.bound) + (c.pass ? ")" : ", failed)");
        sep = "; ";
    }
    if (r.checks.empty() && !r.notes.empty()) line += ": " + r.notes.front();
    return line;
}

}  // namespace drem_im
