#include "drem_im/electrical_regression.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "drem_im/errors.hpp"
#include "drem_im/filters.hpp"

namespace drem_im {

namespace {

struct FilteredMeasurements {
    Vec2 f_i, df_i, f_v, df_v;
};

FilteredMeasurements filtered(const ElectricalChainState& x, const Vec2& i, const Vec2& v, double alpha) {
    const auto fi = lowpass_derivative(i, x.f_i, alpha);
    const auto fv = lowpass_derivative(v, x.f_v, alpha);
    return {fi.lowpass, fi.derivative, fv.lowpass, fv.derivative};
}

}  // namespace

ElectricalChainState chain_derivative(const ElectricalChainState& x, const Vec2& i, const Vec2& v,
                                      double alpha) {
    const FilteredMeasurements m = filtered(x, i, v, alpha);

    ElectricalChainState d;
    d.f_i = m.df_i;
    d.f_v = m.df_v;
    d.lag_v_fv = pure_lag(dot(v, m.f_v), x.lag_v_fv, alpha).d_state;
    d.lag_mu1 = pure_lag(dot(i, m.f_v) + dot(v, m.f_i), x.lag_mu1, alpha).d_state;
    d.lag_mu2 = pure_lag(dot(v, m.df_i) - dot(m.df_v, m.df_i) / alpha, x.lag_mu2, alpha).d_state;
    d.lag_i_fi = pure_lag(dot(i, m.f_i), x.lag_i_fi, alpha).d_state;
    d.lag_i_dfi = pure_lag(dot(i, m.df_i), x.lag_i_dfi, alpha).d_state;
    d.lag_dfi_sq = pure_lag(norm_sq(m.df_i), x.lag_dfi_sq, alpha).d_state;
    d.lag_v_fi = pure_lag(dot(v, m.f_i), x.lag_v_fi, alpha).d_state;
    return d;
}

ElectricalChainOutputs chain_outputs(const ElectricalChainState& x, const Vec2& i, const Vec2& v,
                                     double alpha, const KnownElectricalParams& p) {
    const FilteredMeasurements m = filtered(x, i, v, alpha);
    const double b2 = p.beta * p.beta;
    const double Ls = p.Ls;
    const double Rs = p.Rs;
    const double sg = p.sigma;
    const double dfi_sq = norm_sq(m.df_i);
    const double fi_dfi = dot(m.f_i, m.df_i);
    const double washout_dfi_sq = washout(dfi_sq, x.lag_dfi_sq, alpha).y;

    ElectricalChainOutputs out;
    out.f_i = m.f_i;
    out.df_i = m.df_i;
    out.f_v = m.f_v;
    out.df_v = m.df_v;
    out.rho1 = (2.0 / p.beta) * (-Rs * m.f_i - sg * Ls * m.df_i + m.f_v);

    double* mu = out.mu;
    mu[0] = 2.0 / b2 * x.lag_mu1;
    mu[1] = 2.0 * Ls / (alpha * b2) * dot(m.f_v, m.df_i) + 2.0 * Ls / b2 * x.lag_mu2;
    mu[2] = -2.0 / b2 * x.lag_i_fi;
    mu[3] = -2.0 * Ls / b2 * x.lag_i_dfi + 2.0 * Ls / (alpha * b2) * (-fi_dfi + x.lag_dfi_sq);
    mu[4] = 2.0 * Ls * Ls / (alpha * b2) * (-dfi_sq + 0.5 * washout_dfi_sq);

    out.rho2 = -2.0 / b2 * x.lag_v_fv + Rs * mu[0] + sg * mu[1] + Rs * Rs * mu[2] + Rs * sg * mu[3] +
               sg * sg * mu[4];
    out.rho3 = Rs / p.beta * x.lag_i_fi - x.lag_v_fi / p.beta +
               Ls * sg / (alpha * p.beta) * (fi_dfi - x.lag_dfi_sq);

    const double k = 2.0 / (alpha * p.Lr);
    out.z = out.rho2;
    out.phi = {k * out.rho2 + 2.0 * p.beta * out.rho3,
               -out.rho1.a,
               -out.rho1.b,
               k * out.rho1.a + 2.0 * p.beta * m.f_i.a,
               k * out.rho1.b + 2.0 * p.beta * m.f_i.b,
               -2.0 / p.Lr};
    return out;
}

Vector<6> electrical_theta(double Rr, const Vec2& lambda) {
    return {Rr, lambda.a, lambda.b, Rr * lambda.a, Rr * lambda.b, Rr * norm_sq(lambda)};
}

ElectricalRegression extend_and_mix(const std::array<ElectricalChainOutputs, kElectricalChains>& chains) {
    ElectricalRegression r;
    for (std::size_t l = 0; l < kElectricalChains; ++l) {
        r.z[l] = chains[l].z;
        r.Phi[l] = chains[l].phi;
    }
    const Mixed<6> m = mix(r.Phi, r.z);
    r.zeta = m.zeta;
    r.Delta = m.delta;
    return r;
}

void validate_alphas(const std::array<double, kElectricalChains>& alphas) {
    std::vector<std::string> problems;
    for (std::size_t l = 0; l < alphas.size(); ++l) {
        if (!(std::isfinite(alphas[l]) && alphas[l] > 0.0)) {
            problems.push_back("regression.alphas[" + std::to_string(l) + "] must be > 0");
        }
        for (std::size_t m = 0; m < l; ++m) {
            if (alphas[l] == alphas[m]) {
                problems.push_back("regression.alphas must be distinct (entries " + std::to_string(m) + " and " +
                                   std::to_string(l) + " coincide)");
            }
        }
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
}

}  // namespace drem_im
