#pragma once

// Electrical linear regression built from measured stator current i and
// voltage v only. For a filter constant α the chain produces scalars z and a
// 6-vector φ with
//
//     z(t, α) = φ(t, α)ᵀ Θ(t) + ε_t,   Θ = (Rr, λ, Rr λ, Rr |λ|²),
//
// where ε_t decays like e^{-αt} from filter initial conditions. Six chains
// with distinct α are stacked into Ψ = Φ Θ and mixed with the adjugate of Φ,
// giving six scalar regressions ζ_k = Δ Θ_k.
//
// Per-chain filtered signals (F = α/(p+α), L = 1/(p+α), W = p/(p+α)):
//   f_i = F[i], ḟ_i = αp/(p+α)[i], f_v = F[v], ḟ_v = αp/(p+α)[v]
//   ρ1 = (2/β)(-Rs f_i - σLs ḟ_i + f_v)
//   ρ2 = -(2/β²) L[vᵀf_v] + Rs μ1 + σ μ2 + Rs² μ3 + Rs σ μ4 + σ² μ5
//   ρ3 = (Rs/β) L[iᵀf_i] - (1/β) L[vᵀf_i] + (σLs/(αβ))(f_iᵀḟ_i - L[|ḟ_i|²])
//   μ1 = (2/β²) L[iᵀf_v + vᵀf_i]
//   μ2 = (2Ls/(αβ²)) f_vᵀḟ_i + (2Ls/β²) L[vᵀḟ_i - ḟ_vᵀḟ_i/α]
//   μ3 = -(2/β²) L[iᵀf_i]
//   μ4 = -(2Ls/β²) L[iᵀḟ_i] + (2Ls/(αβ²))(-f_iᵀḟ_i + L[|ḟ_i|²])
//   μ5 = (2Ls²/(αβ²))(-|ḟ_i|² + ½ W[|ḟ_i|²])
//   z  = ρ2
//   φ  = ((2/(αLr))ρ2 + 2βρ3, -ρ1, (2/(αLr))ρ1 + 2β f_i, -2/Lr)
//
// Only Ls, Lr, Rs, σ and β enter; the rotor resistance and load never do.

#include <array>

#include "drem_im/drem.hpp"
#include "drem_im/motor.hpp"
#include "drem_im/vec2.hpp"

namespace drem_im {

inline constexpr std::size_t kElectricalChains = 6;

// The subset of motor constants the electrical regression may use.
struct KnownElectricalParams {
    double Ls = 0.0;
    double Lr = 0.0;
    double Rs = 0.0;
    double sigma = 0.0;
    double beta = 0.0;

    static KnownElectricalParams from(const MotorParams& p) {
        return {p.Ls, p.Lr, p.Rs, p.sigma(), p.beta()};
    }
};

struct ElectricalChainState {
    Vec2 f_i;               // α/(p+α)[i]
    Vec2 f_v;               // α/(p+α)[v]
    double lag_v_fv = 0.0;  // L[vᵀf_v]
    double lag_mu1 = 0.0;   // L[iᵀf_v + vᵀf_i]
    double lag_mu2 = 0.0;   // L[vᵀḟ_i - ḟ_vᵀḟ_i/α]
    double lag_i_fi = 0.0;  // L[iᵀf_i]
    double lag_i_dfi = 0.0; // L[iᵀḟ_i]
    double lag_dfi_sq = 0.0;// L[|ḟ_i|²], also carries W[|ḟ_i|²]
    double lag_v_fi = 0.0;  // L[vᵀf_i]

    template <class Self, class F>
    static constexpr void visit(Self& s, F&& f) {
        f(s.f_i);
        f(s.f_v);
        f(s.lag_v_fv);
        f(s.lag_mu1);
        f(s.lag_mu2);
        f(s.lag_i_fi);
        f(s.lag_i_dfi);
        f(s.lag_dfi_sq);
        f(s.lag_v_fi);
    }
};

struct ElectricalChainOutputs {
    Vec2 f_i, df_i, f_v, df_v;
    Vec2 rho1;
    double rho2 = 0.0;
    double rho3 = 0.0;
    double mu[5] = {};
    double z = 0.0;
    Vector<6> phi{};
};

// State derivative of one chain driven by the measurement (i, v).
ElectricalChainState chain_derivative(const ElectricalChainState& x, const Vec2& i, const Vec2& v,
                                      double alpha);

// z and φ for the current chain state and measurement.
ElectricalChainOutputs chain_outputs(const ElectricalChainState& x, const Vec2& i, const Vec2& v,
                                     double alpha, const KnownElectricalParams& p);

// Standalone advance of one chain by an RK4 step, with the measurement given
// as a callable t -> std::pair<Vec2, Vec2>{i, v}. Used for open-loop drives.
template <class Measurement>
ElectricalChainState advance_chain(const ElectricalChainState& x, const Measurement& meas, double alpha,
                                   double t, double dt);

// Θ(t) = (Rr, λ, Rr λ, Rr |λ|²). Ground truth only; never used by the chains.
Vector<6> electrical_theta(double Rr, const Vec2& lambda);

struct ElectricalRegression {
    Vector<6> z{};
    SquareMatrix<6> Phi{};
    Vector<6> zeta{};
    double Delta = 0.0;

    double zeta_e1() const { return zeta[0]; }
    Vec2 zeta_e23() const { return {zeta[1], zeta[2]}; }
};

// Stacks the six chains into Ψ, Φ and mixes.
ElectricalRegression extend_and_mix(const std::array<ElectricalChainOutputs, kElectricalChains>& chains);

// Six distinct, positive, finite filter constants; throws ConfigError otherwise.
void validate_alphas(const std::array<double, kElectricalChains>& alphas);

}  // namespace drem_im

#include "drem_im/electrical_regression_impl.hpp"
