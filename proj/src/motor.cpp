#include "drem_im/motor.hpp"

#include <cmath>

#include "drem_im/errors.hpp"

namespace drem_im {

std::vector<std::string> MotorParams::problems() const {
    std::vector<std::string> out;
    auto positive = [&out](double x, const char* name) {
        if (!(std::isfinite(x) && x > 0.0)) out.push_back(std::string("motor.") + name + " must be > 0");
    };
    positive(Ls, "Ls");
    positive(Lr, "Lr");
    positive(M, "M");
    positive(Rs, "Rs");
    positive(Rr, "Rr");
    positive(J, "J");
    if (n_p < 1) out.emplace_back("motor.n_p must be a positive integer");
    if (!std::isfinite(TL)) out.emplace_back("motor.TL must be finite");
    if (out.empty()) {
        const double s = sigma();
        if (!(s > 0.0 && s < 1.0)) out.emplace_back("leakage 1 - M^2/(Ls Lr) must lie in (0, 1)");
    }
    return out;
}

void MotorParams::validate() const {
    if (auto p = problems(); !p.empty()) throw ConfigError(std::move(p));
}

MotorState motor_derivative(const MotorState& x, const Vec2& v, const MotorParams& p) {
    if (!is_finite(x.lambda) || !is_finite(x.i) || !std::isfinite(x.omega) || !is_finite(v)) {
        throw NumericFault("non-finite motor state or voltage", std::nan(""));
    }
    const double beta = p.beta();
    const double rr_lr = p.Rr / p.Lr;
    const Vec2 rot = p.n_p * x.omega * skew(x.lambda);

    MotorState d;
    d.lambda = -rr_lr * x.lambda + rot + p.Rr * beta * x.i;
    d.i = (-(p.Rs + p.Rr * beta * beta) * x.i + beta * (rr_lr * x.lambda - rot) + v) / (p.Ls * p.sigma());
    d.omega = (electromagnetic_torque(x, p) - p.TL) / p.J;
    return d;
}

double electromagnetic_torque(const MotorState& x, const MotorParams& p) {
    return -p.n_p * p.beta() * dot(x.lambda, skew(x.i));
}

double stored_energy(const MotorState& x, const MotorParams& p) {
    return 0.5 * p.sigma() * p.Ls * norm_sq(x.i) + norm_sq(x.lambda) / (2.0 * p.Lr) +
           0.5 * p.J * x.omega * x.omega;
}

std::vector<std::string> ControllerGains::problems() const {
    std::vector<std::string> out;
    auto positive = [&out](double x, const char* name) {
        if (!(std::isfinite(x) && x > 0.0)) out.push_back(std::string("ctrl.") + name + " must be > 0");
    };
    positive(Kp, "Kp");
    positive(Ki, "Ki");
    positive(Klp, "Klp");
    positive(Kli, "Kli");
    positive(Kwp, "Kwp");
    positive(Kwi, "Kwi");
    positive(flux_ref, "flux_ref");
    positive(flux_floor, "flux_floor");
    if (!std::isfinite(omega_ref)) out.emplace_back("ctrl.omega_ref must be finite");
    return out;
}

FocOutput foc_control(const MotorState& x, const ControllerState& ctrl, const ControllerGains& g,
                      const MotorParams& p, double rr_for_control) {
    FocOutput out;
    double flux = norm(x.lambda);
    if (flux < g.flux_floor) {
        flux = g.flux_floor;
        out.flux_floored = true;
    }
    out.delta = std::atan2(x.lambda.b, x.lambda.a);
    const Rotation2 to_fixed = Rotation2::from_angle(out.delta);
    const Rotation2 to_dq = to_fixed.inverse();

    const double e_lambda = g.flux_ref - flux;
    const double e_omega = g.omega_ref - x.omega;

    out.i_dq = to_dq.apply(x.i);
    out.i_dq_ref.a = flux / p.M + p.Lr / (rr_for_control * p.M) * (g.Klp * e_lambda + g.Kli * ctrl.int_elambda);
    out.i_dq_ref.b = p.J * p.Lr / (p.M * flux) * (g.Kwp * e_omega + g.Kwi * ctrl.int_eomega);

    const Vec2 e_i = out.i_dq_ref - out.i_dq;
    const Vec2 v_dq = g.Kp * e_i + g.Ki * ctrl.int_idq;
    out.v = to_fixed.apply(v_dq);

    out.d_ctrl.int_idq = e_i;
    out.d_ctrl.int_elambda = e_lambda;
    out.d_ctrl.int_eomega = e_omega;
    return out;
}

}  // namespace drem_im
