#pragma once

// Voltage-fed induction motor in the fixed (a,b) frame, plus the full-state
// field-oriented controller that drives it in the simulation scenarios.
//
//   dλ/dt      = -(Rr/Lr) λ + n_p ω Jλ + Rr β i
//   σLs di/dt  = -(Rs + Rr β²) i + β((Rr/Lr) λ - n_p ω Jλ) + v
//   J dω/dt    = -n_p β λᵀ J i - TL
//
// with β = M/Lr, σ = 1 - M²/(Ls Lr) and J the +90° skew matrix.

#include <string>
#include <vector>

#include "drem_im/vec2.hpp"

namespace drem_im {

struct MotorParams {
    double Ls = 0.140;     // stator inductance [H]
    double Lr = 0.140;     // rotor inductance [H]
    double M = 0.117;      // mutual inductance [H]
    double Rs = 1.7;       // stator resistance [Ohm]
    double Rr = 3.9;       // rotor resistance, ground truth [Ohm]
    double J = 1.1e-4;     // rotor inertia [kg m^2]
    int n_p = 1;           // pole pairs
    double TL = 0.05;      // constant load torque, ground truth [N m]

    double beta() const { return M / Lr; }
    double sigma() const { return 1.0 - M * M / (Ls * Lr); }

    // Empty when the set is physically admissible.
    std::vector<std::string> problems() const;
    void validate() const;
};

struct MotorState {
    Vec2 lambda;        // rotor flux [Wb]
    Vec2 i;             // stator current [A]
    double omega = 0.0; // rotor speed [rad/s]

    template <class Self, class F>
    static constexpr void visit(Self& s, F&& f) {
        f(s.lambda);
        f(s.i);
        f(s.omega);
    }
};

// Right-hand side of the motor ODE. Throws NumericFault on non-finite input.
MotorState motor_derivative(const MotorState& x, const Vec2& v, const MotorParams& p);

// Electromagnetic torque -n_p β λᵀJi.
double electromagnetic_torque(const MotorState& x, const MotorParams& p);

// ½σLs|i|² + |λ|²/(2Lr) + ½Jω²; non-increasing when v = 0 and TL = 0.
double stored_energy(const MotorState& x, const MotorParams& p);

struct ControllerGains {
    double Kp = 100.0;   // current loop
    double Ki = 100.0;
    double Klp = 10.0;   // flux-norm loop
    double Kli = 100.0;
    double Kwp = 10.0;   // speed loop
    double Kwi = 10.0;
    double flux_ref = 0.0455;  // |λ| reference [Wb]
    double omega_ref = 40.0;   // speed reference [rad/s]
    double flux_floor = 1e-6;  // |λ| substitute below which the angle is ill-defined [Wb]

    std::vector<std::string> problems() const;
};

struct ControllerState {
    Vec2 int_idq;              // ∫ (i_dq_ref - i_dq)
    double int_elambda = 0.0;  // ∫ e_λ
    double int_eomega = 0.0;   // ∫ e_ω

    template <class Self, class F>
    static constexpr void visit(Self& s, F&& f) {
        f(s.int_idq);
        f(s.int_elambda);
        f(s.int_eomega);
    }
};

struct FocOutput {
    Vec2 v;                   // fixed-frame voltage command
    ControllerState d_ctrl;   // integrator derivatives
    double delta = 0.0;       // flux angle
    Vec2 i_dq;
    Vec2 i_dq_ref;
    bool flux_floored = false;
};

// Full-state FOC: uses the true flux and speed. `rr_for_control` enters only the
// flux-loop feed-forward gain of i_d_ref.
FocOutput foc_control(const MotorState& x, const ControllerState& ctrl, const ControllerGains& g,
                      const MotorParams& p, double rr_for_control);

}  // namespace drem_im
