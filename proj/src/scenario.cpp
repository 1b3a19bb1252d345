#include "drem_im/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "drem_im/errors.hpp"

namespace drem_im {

std::string_view to_string(ObserverMode m) {
    return m == ObserverMode::ground_truth ? "ground-truth" : "certainty-equivalence";
}

std::string_view to_string(Drive d) { return d == Drive::foc ? "foc" : "zero-voltage"; }

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(x)) {
        throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
    }
    return x;
}

int parse_int(std::string_view key, std::string_view text) {
    text = trim(text);
    int x = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
    }
    return x;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        out.push_back(parse_double(key, item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

Vec2 parse_vec2(std::string_view key, std::string_view text) {
    const auto v = parse_list(key, text);
    if (v.size() != 2) throw ConfigError(std::string(key) + ": expected two comma-separated numbers");
    return {v[0], v[1]};
}

std::string format_vec2(const Vec2& v) { return format_double(v.a) + "," + format_double(v.b); }

struct Option {
    std::string key;
    std::string doc;
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, std::string_view)> set;
};

Option number(std::string key, std::string doc, double ScenarioConfig::*member) {
    const std::string k = key;
    return {std::move(key), std::move(doc), [member](const ScenarioConfig& c) { return format_double(c.*member); },
            [member, k](ScenarioConfig& c, std::string_view v) { c.*member = parse_double(k, v); }};
}

template <class Sub>
Option nested(std::string key, std::string doc, Sub ScenarioConfig::*sub, double Sub::*member) {
    const std::string k = key;
    return {std::move(key), std::move(doc),
            [sub, member](const ScenarioConfig& c) { return format_double(c.*sub.*member); },
            [sub, member, k](ScenarioConfig& c, std::string_view v) { c.*sub.*member = parse_double(k, v); }};
}

Option vec2(std::string key, std::string doc, std::function<Vec2&(ScenarioConfig&)> ref) {
    const std::string k = key;
    return {std::move(key), std::move(doc),
            [ref](const ScenarioConfig& c) {
                ScenarioConfig copy = c;
                return format_vec2(ref(copy));
            },
            [ref, k](ScenarioConfig& c, std::string_view v) { ref(c) = parse_vec2(k, v); }};
}

const std::vector<Option>& options() {
    using C = ScenarioConfig;
    static const std::vector<Option> table = [] {
        std::vector<Option> t;
        t.push_back(nested("motor.Ls", "stator inductance [H]", &C::motor, &MotorParams::Ls));
        t.push_back(nested("motor.Lr", "rotor inductance [H]", &C::motor, &MotorParams::Lr));
        t.push_back(nested("motor.M", "mutual inductance [H]", &C::motor, &MotorParams::M));
        t.push_back(nested("motor.Rs", "stator resistance [Ohm]", &C::motor, &MotorParams::Rs));
        t.push_back(nested("motor.Rr", "rotor resistance, ground truth [Ohm]", &C::motor, &MotorParams::Rr));
        t.push_back(nested("motor.J", "rotor inertia [kg m^2]", &C::motor, &MotorParams::J));
        t.push_back({"motor.n_p", "pole pairs", [](const C& c) { return std::to_string(c.motor.n_p); },
                     [](C& c, std::string_view v) { c.motor.n_p = parse_int("motor.n_p", v); }});
        t.push_back(nested("motor.TL", "constant load torque, ground truth [N m] (scenario choice)", &C::motor,
                           &MotorParams::TL));

        t.push_back(nested("ctrl.Kp", "current loop proportional gain", &C::ctrl, &ControllerGains::Kp));
        t.push_back(nested("ctrl.Ki", "current loop integral gain", &C::ctrl, &ControllerGains::Ki));
        t.push_back(nested("ctrl.Klp", "flux loop proportional gain", &C::ctrl, &ControllerGains::Klp));
        t.push_back(nested("ctrl.Kli", "flux loop integral gain", &C::ctrl, &ControllerGains::Kli));
        t.push_back(nested("ctrl.Kwp", "speed loop proportional gain", &C::ctrl, &ControllerGains::Kwp));
        t.push_back(nested("ctrl.Kwi", "speed loop integral gain", &C::ctrl, &ControllerGains::Kwi));
        t.push_back(nested("ctrl.flux_ref", "flux norm reference [Wb]", &C::ctrl, &ControllerGains::flux_ref));
        t.push_back(nested("ctrl.omega_ref", "speed reference [rad/s]", &C::ctrl, &ControllerGains::omega_ref));
        t.push_back(nested("ctrl.flux_floor", "flux norm floor for the field angle [Wb]", &C::ctrl,
                           &ControllerGains::flux_floor));

        t.push_back({"regression.alphas", "six distinct electrical filter constants [rad/s]",
                     [](const C& c) {
                         std::string s;
                         for (std::size_t l = 0; l < c.alphas.size(); ++l) {
                             if (l) s += ",";
                             s += format_double(c.alphas[l]);
                         }
                         return s;
                     },
                     [](C& c, std::string_view v) {
                         const auto list = parse_list("regression.alphas", v);
                         if (list.size() != kElectricalChains) {
                             throw ConfigError("regression.alphas: expected exactly 6 values");
                         }
                         std::copy(list.begin(), list.end(), c.alphas.begin());
                     }});
        t.push_back(number("regression.a", "mechanical filter constant [rad/s]", &C::a));

        t.push_back(nested("observer.gamma_lambda", "flux observer gain", &C::gains, &ObserverGains::gamma_lambda));
        t.push_back(nested("observer.gamma_r", "rotor resistance estimator gain", &C::gains, &ObserverGains::gamma_r));
        t.push_back(nested("observer.gamma_omega", "speed observer gain", &C::gains, &ObserverGains::gamma_omega));
        t.push_back(nested("observer.gamma_T", "load torque estimator gain", &C::gains, &ObserverGains::gamma_T));
        t.push_back(number("observer.enable_time", "observer start time; inputs held at zero before [s]",
                           &C::enable_time));
        t.push_back({"observer.mode", "ground-truth | certainty-equivalence",
                     [](const C& c) { return std::string(to_string(c.mode)); },
                     [](C& c, std::string_view v) {
                         v = trim(v);
                         if (v == "ground-truth") c.mode = ObserverMode::ground_truth;
                         else if (v == "certainty-equivalence") c.mode = ObserverMode::certainty_equivalence;
                         else throw ConfigError("observer.mode: expected ground-truth or certainty-equivalence");
                     }});

        t.push_back(vec2("init.lambda", "initial rotor flux [Wb]", [](C& c) -> Vec2& { return c.lambda0; }));
        t.push_back(vec2("init.current", "initial stator current [A]", [](C& c) -> Vec2& { return c.i0; }));
        t.push_back(number("init.omega", "initial rotor speed [rad/s]", &C::omega0));
        t.push_back(number("init.theta", "initial rotor angle [rad] (no effect on the model)", &C::theta0));
        t.push_back(vec2("init.chi", "initial flux observer state [Wb]",
                         [](C& c) -> Vec2& { return c.estimates0.chi; }));
        t.push_back(nested("init.rr_hat", "initial rotor resistance estimate [Ohm]", &C::estimates0,
                           &ObserverState::rr_hat));
        t.push_back(nested("init.tl_hat", "initial load torque estimate [N m]", &C::estimates0,
                           &ObserverState::tl_hat));
        t.push_back(nested("init.omega_hat", "initial speed estimate [rad/s]", &C::estimates0,
                           &ObserverState::omega_hat));
        t.push_back(number("init.filter_state", "initial value of every regression filter state", &C::filter_ic));

        t.push_back(number("sim.dt", "RK4 step [s]", &C::dt));
        t.push_back(number("sim.duration", "simulated time [s]", &C::duration));
        t.push_back({"sim.decimation", "log every n-th step",
                     [](const C& c) { return std::to_string(c.decimation); },
                     [](C& c, std::string_view v) { c.decimation = parse_int("sim.decimation", v); }});
        t.push_back({"sim.drive", "foc | zero-voltage", [](const C& c) { return std::string(to_string(c.drive)); },
                     [](C& c, std::string_view v) {
                         v = trim(v);
                         if (v == "foc") c.drive = Drive::foc;
                         else if (v == "zero-voltage") c.drive = Drive::zero_voltage;
                         else throw ConfigError("sim.drive: expected foc or zero-voltage");
                     }});

        t.push_back(nested("monitor.window", "excitation monitor window [s]", &C::monitor, &ExcitationSettings::window));
        t.push_back(nested("monitor.l2_ratio", "stalled-energy ratio for 'insufficient'", &C::monitor,
                           &ExcitationSettings::l2_ratio));
        t.push_back(nested("monitor.pe_ratio", "worst-window ratio for 'PE-like'", &C::monitor,
                           &ExcitationSettings::pe_ratio));

        t.push_back({"output.telemetry", "telemetry CSV path (empty: none)",
                     [](const C& c) { return c.telemetry_path; },
                     [](C& c, std::string_view v) { c.telemetry_path = std::string(trim(v)); }});
        return t;
    }();
    return table;
}

const Option* find_option(std::string_view key) {
    for (const auto& o : options())
        if (o.key == key) return &o;
    return nullptr;
}

}  // namespace

std::vector<std::string> ScenarioConfig::problems() const {
    std::vector<std::string> out = motor.problems();
    for (auto& p : ctrl.problems()) out.push_back(std::move(p));
    try {
        validate_alphas(alphas);
    } catch (const ConfigError& e) {
        for (const auto& p : e.problems()) out.push_back(p);
    }
    if (!(a > 0.0)) out.emplace_back("regression.a must be > 0");
    if (!(gains.gamma_lambda > 0.0)) out.emplace_back("observer.gamma_lambda must be > 0");
    if (!(gains.gamma_r > 0.0)) out.emplace_back("observer.gamma_r must be > 0");
    if (!(gains.gamma_omega > 0.0)) out.emplace_back("observer.gamma_omega must be > 0");
    if (!(gains.gamma_T > 0.0)) out.emplace_back("observer.gamma_T must be > 0");
    if (!(enable_time >= 0.0)) out.emplace_back("observer.enable_time must be >= 0");
    if (!(dt > 0.0)) out.emplace_back("sim.dt must be > 0");
    if (!(duration > 0.0)) out.emplace_back("sim.duration must be > 0");
    if (dt > 0.0 && duration > 0.0 && duration / dt > 1e9) out.emplace_back("sim.duration/sim.dt exceeds 1e9 steps");
    if (decimation < 1) out.emplace_back("sim.decimation must be >= 1");
    if (!(monitor.window > 0.0)) out.emplace_back("monitor.window must be > 0");
    if (!(monitor.l2_ratio >= 0.0)) out.emplace_back("monitor.l2_ratio must be >= 0");
    if (!(monitor.pe_ratio >= 0.0)) out.emplace_back("monitor.pe_ratio must be >= 0");
    return out;
}

void ScenarioConfig::validate() const {
    if (auto p = problems(); !p.empty()) throw ConfigError(std::move(p));
}

std::size_t ScenarioConfig::total_steps() const {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

std::size_t ScenarioConfig::enable_step() const {
    return static_cast<std::size_t>(std::ceil(enable_time / dt - 1e-9));
}

void set_option(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
    const Option* o = find_option(trim(key));
    if (!o) throw ConfigError("unknown key '" + std::string(trim(key)) + "'");
    o->set(cfg, value);
}

std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& o : options()) out.emplace_back(o.key, o.get(cfg));
    return out;
}

std::vector<std::pair<std::string, std::string>> config_documentation() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& o : options()) out.emplace_back(o.key, o.doc);
    return out;
}

ScenarioConfig parse_config(std::istream& in, ScenarioConfig cfg) {
    std::vector<std::string> problems;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            problems.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        try {
            set_option(cfg, s.substr(0, eq), s.substr(eq + 1));
        } catch (const ConfigError& e) {
            for (const auto& p : e.problems()) problems.push_back("line " + std::to_string(lineno) + ": " + p);
        }
    }
    for (auto& p : cfg.problems()) problems.push_back(std::move(p));
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

ScenarioConfig load_config(const std::string& path, ScenarioConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

void apply_overrides(ScenarioConfig& cfg, const std::vector<std::string>& overrides) {
    std::vector<std::string> problems;
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            problems.push_back("override '" + o + "': expected key=value");
            continue;
        }
        try {
            set_option(cfg, std::string_view(o).substr(0, eq), std::string_view(o).substr(eq + 1));
        } catch (const ConfigError& e) {
            for (const auto& p : e.problems()) problems.push_back(p);
        }
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
}

}  // namespace drem_im
