#include "drem_im/telemetry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "drem_im/errors.hpp"

namespace drem_im {

const std::vector<std::string>& telemetry_columns() {
    static const std::vector<std::string> cols = {
        "t",
        "lambda_a", "lambda_b", "i_a", "i_b", "omega", "v_a", "v_b",
        "lambda_hat_a", "lambda_hat_b", "rr_hat", "omega_hat", "tl_hat",
        "flux_err_a", "flux_err_b", "flux_err_norm", "rr_err", "omega_err", "tl_err",
        "delta_e", "delta_m", "int_delta_e_sq", "int_delta_m_sq",
        "zeta_e1", "zeta_e2", "zeta_e3", "zeta_m1", "zeta_m2",
        "lre_res_1", "lre_res_2", "lre_res_3", "lre_res_4", "lre_res_5", "lre_res_6",
        "drem_res", "adj_identity_res", "mech_res",
        "observer_active",
    };
    return cols;
}

std::vector<double> record_values(const TelemetryRecord& r) {
    std::vector<double> v = {
        r.t,
        r.lambda.a, r.lambda.b, r.i.a, r.i.b, r.omega, r.v.a, r.v.b,
        r.lambda_hat.a, r.lambda_hat.b, r.rr_hat, r.omega_hat, r.tl_hat,
        r.flux_err.a, r.flux_err.b, norm(r.flux_err), r.rr_err, r.omega_err, r.tl_err,
        r.delta_e, r.delta_m, r.int_delta_e_sq, r.int_delta_m_sq,
        r.zeta_e[0], r.zeta_e[1], r.zeta_e[2], r.zeta_m.a, r.zeta_m.b,
    };
    for (double x : r.lre_res) v.push_back(x);
    v.push_back(r.drem_res);
    v.push_back(r.adj_identity_res);
    v.push_back(r.mech_res);
    v.push_back(r.observer_active ? 1.0 : 0.0);
    return v;
}

TelemetryRecord make_record(const Simulation& sim) {
    const Signals& s = sim.signals();
    const MotorParams& p = sim.config().motor;
    TelemetryRecord r;
    r.t = s.t;
    r.lambda = s.motor.lambda;
    r.i = s.motor.i;
    r.v = s.v;
    r.omega = s.motor.omega;
    r.lambda_hat = s.lambda_hat;
    r.rr_hat = s.observer.rr_hat;
    r.omega_hat = s.observer.omega_hat;
    r.tl_hat = s.observer.tl_hat;
    r.flux_err = s.motor.lambda - s.lambda_hat;
    r.rr_err = s.observer.rr_hat - p.Rr;
    r.omega_err = s.observer.omega_hat - s.motor.omega;
    r.tl_err = s.observer.tl_hat - p.TL;
    r.delta_e = s.elec.Delta;
    r.delta_m = s.mech.Delta_m;
    r.int_delta_e_sq = sim.electrical_monitor().integral();
    r.int_delta_m_sq = sim.mechanical_monitor().integral();
    r.zeta_e[0] = s.elec.zeta[0];
    r.zeta_e[1] = s.elec.zeta[1];
    r.zeta_e[2] = s.elec.zeta[2];
    r.zeta_m = s.mech.zeta_m;
    r.observer_active = s.gates.observer;

    const Vector<6> theta = electrical_theta(p.Rr, s.motor.lambda);
    for (std::size_t l = 0; l < kElectricalChains; ++l) {
        double pred = 0.0;
        for (std::size_t k = 0; k < 6; ++k) pred += s.chains[l].phi[k] * theta[k];
        r.lre_res[l] = std::abs(s.chains[l].z - pred) / (1.0 + std::abs(s.chains[l].z));
    }

    double diff_sq = 0.0;
    double zeta_sq = 0.0;
    for (std::size_t k = 0; k < 6; ++k) {
        const double d = s.elec.zeta[k] - s.elec.Delta * theta[k];
        diff_sq += d * d;
        zeta_sq += s.elec.zeta[k] * s.elec.zeta[k];
    }
    r.drem_res = std::sqrt(diff_sq) / (1.0 + std::sqrt(zeta_sq));

    const AdjugateDet<6> ad = adjugate_det(s.elec.Phi);
    SquareMatrix<6> E = matmul(ad.adj, s.elec.Phi);
    for (std::size_t k = 0; k < 6; ++k) E[k][k] -= ad.det;
    const double scale = frobenius(ad.adj) * frobenius(s.elec.Phi);
    r.adj_identity_res = scale > 0.0 ? frobenius(E) / scale : 0.0;

    const Vec2 pred_m = Vec2{s.mech_out.Phi_m[0][0], s.mech_out.Phi_m[1][0]} * p.TL +
                        Vec2{s.mech_out.Phi_m[0][1], s.mech_out.Phi_m[1][1]} * s.motor.omega;
    r.mech_res = norm(s.mech_out.z_m - pred_m) / (1.0 + norm(s.mech_out.z_m));
    return r;
}

TelemetryWriter::TelemetryWriter(std::ostream& out, const ScenarioConfig& cfg) : out_(out) {
    out_ << "# schema=" << kTelemetrySchema << '\n';
    for (const auto& [k, v] : config_entries(cfg)) out_ << "# config." << k << '=' << v << '\n';
    const auto& cols = telemetry_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) out_ << (c ? "," : "") << cols[c];
    out_ << '\n';
}

void TelemetryWriter::write(const TelemetryRecord& r) {
    const auto values = record_values(r);
    std::string line;
    line.reserve(values.size() * 24);
    char buf[64];
    for (std::size_t c = 0; c < values.size(); ++c) {
        if (c) line += ',';
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, values[c]);
        line.append(buf, end);
    }
    line += '\n';
    out_ << line;
}

bool TelemetryTable::has(std::string_view name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::size_t TelemetryTable::index(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw DataError("telemetry is missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> TelemetryTable::column(std::string_view name) const {
    const std::size_t c = index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[c]);
    return out;
}

void TelemetryTable::require(const std::vector<std::string>& names) const {
    std::string missing;
    for (const auto& n : names) {
        if (!has(n)) missing += (missing.empty() ? "" : ", ") + n;
    }
    if (!missing.empty()) throw DataError("telemetry is missing columns: " + missing);
}

std::string TelemetryTable::config_string(const std::string& key) const {
    const auto it = meta.find("config." + key);
    if (it == meta.end()) throw DataError("telemetry metadata lacks config." + key);
    return it->second;
}

double TelemetryTable::config_number(const std::string& key) const {
    const std::string s = config_string(key);
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError("telemetry metadata config." + key + " is not a number: '" + s + "'");
    }
    return x;
}

TelemetryTable read_telemetry(std::istream& in) {
    TelemetryTable t;
    std::string line;
    bool header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto first = line.find_first_not_of("# ");
            if (first == std::string::npos) continue;
            const auto body = line.substr(first);
            const auto eq = body.find('=');
            if (eq != std::string::npos) t.meta[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        if (!header) {
            std::size_t pos = 0;
            while (true) {
                const auto comma = line.find(',', pos);
                t.columns.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(t.columns.size());
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (p <= end) {
            double x = 0.0;
            auto [next, ec] = std::from_chars(p, end, x);
            if (ec != std::errc{}) throw DataError("telemetry line " + std::to_string(lineno) + ": bad number");
            row.push_back(x);
            if (next == end) break;
            if (*next != ',') throw DataError("telemetry line " + std::to_string(lineno) + ": expected ','");
            p = next + 1;
        }
        if (row.size() != t.columns.size()) {
            throw DataError("telemetry line " + std::to_string(lineno) + ": expected " +
                            std::to_string(t.columns.size()) + " fields, got " + std::to_string(row.size()));
        }
        t.rows.push_back(std::move(row));
    }
    if (!header) throw DataError("telemetry has no header row");
    const auto schema = t.meta.find("schema");
    if (schema != t.meta.end() && schema->second != kTelemetrySchema) {
        throw DataError("unsupported telemetry schema '" + schema->second + "'");
    }
    return t;
}

TelemetryTable read_telemetry_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open telemetry file '" + path + "'");
    return read_telemetry(in);
}

}  // namespace drem_im
