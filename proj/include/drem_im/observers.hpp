#pragma once

// Estimation laws fed by the scalar regressions ζ = Δ θ:
//
//   flux      χ' = v/β - (Rs/β) i + γ_λ Δe (ζe23 + ((σLs/β) i - χ) Δe),  λ̂ = -(σLs/β) i + χ
//   Rr        R̂' = γ_r Δe (ζe1 - R̂ Δe)
//   load      T̂' = γ_T Δm (ζm1 - T̂ Δm)
//   speed     ω̂' = -T̂/J - (n_p β/J) λᵀJi + γ_ω Δm (ζm2 - ω̂ Δm)
//
// With exact regressions the errors obey x̃' = -γ Δ² x̃, i.e.
// x̃(t) = exp(-γ ∫Δ²) x̃(0).

#include <cstddef>
#include <deque>
#include <string_view>

#include "drem_im/motor.hpp"
#include "drem_im/vec2.hpp"

namespace drem_im {

struct ObserverGains {
    double gamma_lambda = 1e-3;
    double gamma_r = 1e-4;
    double gamma_omega = 1e6;
    double gamma_T = 1e6;
};

struct KnownObserverParams {
    double Ls = 0.0;
    double Rs = 0.0;
    double sigma = 0.0;
    double beta = 0.0;
    double J = 0.0;
    int n_p = 1;

    static KnownObserverParams from(const MotorParams& p) {
        return {p.Ls, p.Rs, p.sigma(), p.beta(), p.J, p.n_p};
    }
};

struct ObserverState {
    Vec2 chi;
    double rr_hat = 0.0;
    double tl_hat = 0.0;
    double omega_hat = 0.0;

    template <class Self, class F>
    static constexpr void visit(Self& s, F&& f) {
        f(s.chi);
        f(s.rr_hat);
        f(s.tl_hat);
        f(s.omega_hat);
    }
};

Vec2 flux_estimate(const Vec2& chi, const Vec2& i, const KnownObserverParams& p);

// Returns dχ/dt.
Vec2 flux_observer_step(const Vec2& i, const Vec2& v, const Vec2& zeta_e23, double Delta_e, const Vec2& chi,
                        double gamma_lambda, const KnownObserverParams& p);

// Returns dR̂r/dt.
double rr_estimator_step(double zeta_e1, double Delta_e, double rr_hat, double gamma_r);

struct TlOmegaDerivative {
    double d_tl = 0.0;
    double d_omega = 0.0;
};

// `lambda_in` is the true flux (ground-truth mode) or λ̂ (certainty equivalence).
TlOmegaDerivative tl_omega_step(const Vec2& zeta_m, double Delta_m, const Vec2& lambda_in, const Vec2& i,
                                double tl_hat, double omega_hat, const ObserverGains& g,
                                const KnownObserverParams& p);

enum class Excitation { insufficient, non_l2_trending, pe_like };

std::string_view to_string(Excitation e);

struct ExcitationSettings {
    double window = 1.0;      // sliding window length [s]
    double l2_ratio = 0.05;   // last-window energy below this share of the mean window energy: stalled
    double pe_ratio = 0.1;    // worst window at least this share of the mean window energy: PE-like
};

// Running ∫Δ² (trapezoidal) with sliding-window statistics. Diagnostic only.
class ExcitationMonitor {
public:
    explicit ExcitationMonitor(ExcitationSettings s = {});

    // Accumulates the interval [t, t+dt] whose endpoint samples are the previous
    // and the new delta. The first call only records the starting sample.
    void update(double delta, double dt);
    // Same, with both endpoint samples given explicitly.
    void accumulate(double delta_start, double delta_end, double dt);
    // Adds an already integrated increment of ∫Δ² over dt.
    void advance(double dt, double increment);

    double integral() const { return integral_; }
    double elapsed() const { return elapsed_; }
    // Smallest ∫Δ² over any complete window seen so far; 0 until one window has elapsed.
    double window_min() const { return has_window_ ? window_min_ : 0.0; }
    // ∫Δ² over the most recent complete window.
    double last_window() const;
    Excitation classification() const;

private:
    ExcitationSettings settings_;
    double integral_ = 0.0;
    double elapsed_ = 0.0;
    double last_delta_ = 0.0;
    bool started_ = false;
    bool has_window_ = false;
    double window_min_ = 0.0;
    // (time, integral) samples covering at least the last window.
    std::deque<std::pair<double, double>> history_;
};

}  // namespace drem_im
