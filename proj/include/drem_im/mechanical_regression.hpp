#pragma once

// Mechanical regression for (TL, ω) given the flux λ and rotor resistance Rr,
// either true values or estimates. With
//
//   η1 = (Rr/Lr) λ - Rr β i,   η2 = n_p Jλ,   F = a/(p+a),  L = 1/(p+a),
//
// the motor satisfies dλ/dt + η1 = η2 ω and J dω/dt = β η2ᵀi - TL, which
// filtering turns into
//
//   z_m = ap/(p+a)[λ] + F[η1] + (β/J) L[(η2ᵀi) F[η2]]
//   Φ_m = [ (1/J) a/(p+a)²[η2] | F[η2] ],   z_m = Φ_m (TL, ω) + ε_t.
//
// ap/(p+a)[λ] is realized as a(λ - F[λ]); a/(p+a)²[η2] as L[F[η2]].

#include "drem_im/drem.hpp"
#include "drem_im/motor.hpp"
#include "drem_im/vec2.hpp"

namespace drem_im {

struct KnownMechanicalParams {
    double Lr = 0.0;
    double beta = 0.0;
    double J = 0.0;
    int n_p = 1;

    static KnownMechanicalParams from(const MotorParams& p) { return {p.Lr, p.beta(), p.J, p.n_p}; }
};

struct MechanicalInputs {
    Vec2 lambda;
    double Rr = 0.0;
    Vec2 i;
};

struct MechanicalChainState {
    Vec2 f_lambda;   // F[λ]
    Vec2 f_eta1;     // F[η1]
    Vec2 f_eta2;     // F[η2]
    Vec2 lag_f_eta2; // L[F[η2]] = a/(p+a)²[η2]
    Vec2 lag_corr;   // L[(η2ᵀi) F[η2]]

    template <class Self, class F>
    static constexpr void visit(Self& s, F&& f) {
        f(s.f_lambda);
        f(s.f_eta1);
        f(s.f_eta2);
        f(s.lag_f_eta2);
        f(s.lag_corr);
    }
};

struct MechanicalOutputs {
    Vec2 eta1, eta2;
    Vec2 z_m;
    SquareMatrix<2> Phi_m{};
};

struct MechanicalRegression {
    Vec2 zeta_m;         // ζ_m1 pairs with TL, ζ_m2 with ω
    double Delta_m = 0.0;
};

MechanicalChainState mechanical_derivative(const MechanicalChainState& x, const MechanicalInputs& in,
                                           double a, const KnownMechanicalParams& p);

MechanicalOutputs mechanical_outputs(const MechanicalChainState& x, const MechanicalInputs& in, double a,
                                     const KnownMechanicalParams& p);

MechanicalRegression mix_mechanical(const MechanicalOutputs& out);

struct SteadyStateDelta {
    double varpi = 0.0;            // electrical frequency of the rotating flux [rad/s]
    double psi = 0.0;              // phase lag of 1/(jϖ + a)
    double delta_predicted = 0.0;  // frequency-response prediction of Δ_m
    double delta_unscaled = 0.0;   // -(|λ|/J) sin ψ, the gain-free expression
};

// Steady-state Δ_m for flux of constant norm rotating at ϖ = n_p ω + Rr TL/(n_p |λ|²):
//   Δ_m = n_p² |λ|² a² ϖ / (J (ϖ² + a²)²)
//       = (a²/(ϖ²+a²)) (1/√(ϖ²+a²)) (n_p²|λ|²/J) sin ψ,  ψ = atan(ϖ/a).
// Throws std::invalid_argument for a non-positive flux norm.
SteadyStateDelta steady_state_delta(double omega_star, double flux_norm_star, double Rr, double TL, double a,
                                    double J, int n_p = 1);

}  // namespace drem_im
