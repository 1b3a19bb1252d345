#include "drem_im/observers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drem_im {

Vec2 flux_estimate(const Vec2& chi, const Vec2& i, const KnownObserverParams& p) {
    return -(p.sigma * p.Ls / p.beta) * i + chi;
}

Vec2 flux_observer_step(const Vec2& i, const Vec2& v, const Vec2& zeta_e23, double Delta_e, const Vec2& chi,
                        double gamma_lambda, const KnownObserverParams& p) {
    const Vec2 lambda_hat = flux_estimate(chi, i, p);
    return v / p.beta - (p.Rs / p.beta) * i + gamma_lambda * Delta_e * (zeta_e23 - Delta_e * lambda_hat);
}

double rr_estimator_step(double zeta_e1, double Delta_e, double rr_hat, double gamma_r) {
    return gamma_r * Delta_e * (zeta_e1 - rr_hat * Delta_e);
}

TlOmegaDerivative tl_omega_step(const Vec2& zeta_m, double Delta_m, const Vec2& lambda_in, const Vec2& i,
                                double tl_hat, double omega_hat, const ObserverGains& g,
                                const KnownObserverParams& p) {
    TlOmegaDerivative d;
    d.d_tl = g.gamma_T * Delta_m * (zeta_m.a - tl_hat * Delta_m);
    d.d_omega = -tl_hat / p.J - (p.n_p * p.beta / p.J) * dot(lambda_in, skew(i)) +
                g.gamma_omega * Delta_m * (zeta_m.b - omega_hat * Delta_m);
    return d;
}

std::string_view to_string(Excitation e) {
    switch (e) {
        case Excitation::insufficient: return "insufficient";
        case Excitation::non_l2_trending: return "non-L2-trending";
        case Excitation::pe_like: return "PE-like";
    }
    return "unknown";
}

ExcitationMonitor::ExcitationMonitor(ExcitationSettings s) : settings_(s) {
    if (!(s.window > 0.0)) throw std::invalid_argument("excitation window must be > 0");
    history_.emplace_back(0.0, 0.0);
}

void ExcitationMonitor::update(double delta, double dt) {
    if (!started_) {
        started_ = true;
        last_delta_ = delta;
        return;
    }
    accumulate(last_delta_, delta, dt);
}

void ExcitationMonitor::accumulate(double delta_start, double delta_end, double dt) {
    started_ = true;
    last_delta_ = delta_end;
    advance(dt, 0.5 * dt * (delta_start * delta_start + delta_end * delta_end));
}

void ExcitationMonitor::advance(double dt, double increment) {
    integral_ += increment;
    elapsed_ += dt;
    history_.emplace_back(elapsed_, integral_);

    // Keep exactly one sample at or before (elapsed - window).
    const double start = elapsed_ - settings_.window;
    while (history_.size() >= 2 && history_[1].first <= start + 1e-12 * settings_.window) history_.pop_front();
    if (history_.front().first <= start + 1e-12 * settings_.window) {
        const double w = integral_ - history_.front().second;
        window_min_ = has_window_ ? std::min(window_min_, w) : w;
        has_window_ = true;
    }
}

double ExcitationMonitor::last_window() const {
    if (!has_window_) return 0.0;
    return integral_ - history_.front().second;
}

Excitation ExcitationMonitor::classification() const {
    if (!has_window_ || !(integral_ > std::numeric_limits<double>::min())) return Excitation::insufficient;
    const double mean_window = integral_ / elapsed_ * settings_.window;
    if (last_window() < settings_.l2_ratio * mean_window) return Excitation::insufficient;
    if (window_min() >= settings_.pe_ratio * mean_window) return Excitation::pe_like;
    return Excitation::non_l2_trending;
}

}  // namespace drem_im
