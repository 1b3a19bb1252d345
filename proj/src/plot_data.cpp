#include "drem_im/plot_data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "drem_im/errors.hpp"

namespace drem_im {

namespace {

struct Selector {
    const char* name;
    std::vector<std::string> columns;  // "=<key>" is a constant from the config metadata
};

const std::vector<Selector>& selector_table() {
    static const std::vector<Selector> table = {
        {"flux_error_norm", {"flux_err_norm"}},
        {"flux_error", {"flux_err_a", "flux_err_b"}},
        {"rotor_resistance", {"=motor.Rr", "rr_hat", "rr_err"}},
        {"speed", {"omega", "omega_hat", "omega_err"}},
        {"load_torque", {"=motor.TL", "tl_hat", "tl_err"}},
        {"excitation", {"int_delta_e_sq", "int_delta_m_sq"}},
        {"delta", {"delta_e", "delta_m"}},
        {"residuals",
         {"lre_res_1", "lre_res_2", "lre_res_3", "lre_res_4", "lre_res_5", "lre_res_6", "drem_res", "mech_res"}},
    };
    return table;
}

std::string known_list() {
    std::string s;
    for (const auto& sel : selector_table()) s += (s.empty() ? "" : ", ") + std::string(sel.name);
    return s;
}

}  // namespace

const std::vector<std::string>& plot_selectors() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& s : selector_table()) n.emplace_back(s.name);
        return n;
    }();
    return names;
}

PlotSeries extract_plot_series(const TelemetryTable& t, const std::string& selector, bool log_scale) {
    const Selector* sel = nullptr;
    for (const auto& s : selector_table())
        if (selector == s.name) sel = &s;
    if (!sel) throw DataError("unknown plot selector '" + selector + "' (known: " + known_list() + ")");

    std::vector<std::string> needed = {"t"};
    for (const auto& c : sel->columns)
        if (c[0] != '=') needed.push_back(c);
    t.require(needed);

    PlotSeries out;
    out.columns.push_back("t");
    std::vector<std::vector<double>> cols = {t.column("t")};
    for (const auto& c : sel->columns) {
        if (c[0] == '=') {
            const std::string key = c.substr(1);
            const double value = t.config_number(key);
            cols.emplace_back(t.rows.size(), value);
            out.columns.push_back(key.substr(key.find('.') + 1));
        } else {
            cols.push_back(t.column(c));
            out.columns.push_back(c);
        }
    }
    if (log_scale) {
        for (std::size_t c = 1; c < cols.size(); ++c) {
            out.columns[c] = "log10_abs_" + out.columns[c];
            for (double& x : cols[c]) x = std::log10(std::abs(x));
        }
    }
    out.rows.resize(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        for (const auto& col : cols) out.rows[r].push_back(col[r]);
    return out;
}

std::vector<std::string> emit_plot_data(const TelemetryTable& t, const std::vector<std::string>& selectors,
                                        bool log_scale, const std::string& out_prefix) {
    if (selectors.empty()) throw DataError("no plot selectors given (known: " + known_list() + ")");
    // Validate everything before writing anything.
    std::vector<PlotSeries> series;
    for (const auto& s : selectors) series.push_back(extract_plot_series(t, s, log_scale));

    std::vector<std::string> paths;
    char buf[64];
    for (std::size_t k = 0; k < selectors.size(); ++k) {
        const std::string path = out_prefix + selectors[k] + ".csv";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw DataError("cannot write plot data '" + path + "'");
        const auto& s = series[k];
        for (std::size_t c = 0; c < s.columns.size(); ++c) f << (c ? "," : "") << s.columns[c];
        f << '\n';
        for (const auto& row : s.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                auto [end, ec] = std::to_chars(buf, buf + sizeof buf, row[c]);
                if (c) f << ',';
                f.write(buf, end - buf);
            }
            f << '\n';
        }
        paths.push_back(path);
    }
    return paths;
}

}  // namespace drem_im
