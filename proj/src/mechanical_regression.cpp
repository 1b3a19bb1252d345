#include "drem_im/mechanical_regression.hpp"

#include <cmath>
#include <stdexcept>

#include "drem_im/filters.hpp"

namespace drem_im {

namespace {
Vec2 eta1_of(const MechanicalInputs& in, const KnownMechanicalParams& p) {
    return (in.Rr / p.Lr) * in.lambda - in.Rr * p.beta * in.i;
}
Vec2 eta2_of(const MechanicalInputs& in, const KnownMechanicalParams& p) {
    return static_cast<double>(p.n_p) * skew(in.lambda);
}
}  // namespace

MechanicalChainState mechanical_derivative(const MechanicalChainState& x, const MechanicalInputs& in,
                                           double a, const KnownMechanicalParams& p) {
    const Vec2 eta1 = eta1_of(in, p);
    const Vec2 eta2 = eta2_of(in, p);
    MechanicalChainState d;
    d.f_lambda = lowpass_derivative(in.lambda, x.f_lambda, a).d_state;
    d.f_eta1 = lowpass_derivative(eta1, x.f_eta1, a).d_state;
    d.f_eta2 = lowpass_derivative(eta2, x.f_eta2, a).d_state;
    d.lag_f_eta2 = pure_lag(x.f_eta2, x.lag_f_eta2, a).d_state;
    d.lag_corr = pure_lag(dot(eta2, in.i) * x.f_eta2, x.lag_corr, a).d_state;
    return d;
}

MechanicalOutputs mechanical_outputs(const MechanicalChainState& x, const MechanicalInputs& in, double a,
                                     const KnownMechanicalParams& p) {
    MechanicalOutputs out;
    out.eta1 = eta1_of(in, p);
    out.eta2 = eta2_of(in, p);
    const Vec2 d_lambda = lowpass_derivative(in.lambda, x.f_lambda, a).derivative;
    out.z_m = d_lambda + x.f_eta1 + (p.beta / p.J) * x.lag_corr;
    const Vec2 col_tl = x.lag_f_eta2 / p.J;
    out.Phi_m = {{{col_tl.a, x.f_eta2.a}, {col_tl.b, x.f_eta2.b}}};
    return out;
}

MechanicalRegression mix_mechanical(const MechanicalOutputs& out) {
    const Mixed<2> m = mix(out.Phi_m, Vector<2>{out.z_m.a, out.z_m.b});
    return {{m.zeta[0], m.zeta[1]}, m.delta};
}

SteadyStateDelta steady_state_delta(double omega_star, double flux_norm_star, double Rr, double TL, double a,
                                    double J, int n_p) {
    if (!(flux_norm_star > 0.0)) throw std::invalid_argument("steady_state_delta: flux norm must be > 0");
    if (!(a > 0.0) || !(J > 0.0)) throw std::invalid_argument("steady_state_delta: a and J must be > 0");
    SteadyStateDelta s;
    const double np = static_cast<double>(n_p);
    const double flux_sq = flux_norm_star * flux_norm_star;
    s.varpi = np * omega_star + Rr * TL / (np * flux_sq);
    s.psi = std::atan2(s.varpi, a);
    const double mag_sq = s.varpi * s.varpi + a * a;
    s.delta_predicted = (a * a / mag_sq) * (1.0 / std::sqrt(mag_sq)) * (np * np * flux_sq / J) * std::sin(s.psi);
    s.delta_unscaled = -(flux_norm_star / J) * std::sin(s.psi);
    return s;
}

}  // namespace drem_im
