#pragma once

// State-space realizations of the first-order LTI filters used by the
// regression chains. Each function returns the filter output(s) together with
// the state derivative; integration is left to the caller so that every filter
// advances inside the one augmented RK4 step. No input is ever differentiated.
//
// T is double or Vec2.

#include <cmath>
#include <string>
#include <vector>

#include "drem_im/vec2.hpp"

namespace drem_im {

enum class FilterKind { lowpass, derivative_lowpass, pure_lag, washout };

template <class T>
struct LowpassOutput {
    T lowpass;     // α/(p+α)[u]
    T derivative;  // αp/(p+α)[u]
    T d_state;
};

template <class T>
struct LagOutput {
    T y;
    T d_state;
};

// x' = α(u - x); lowpass = x, derivative = α(u - x).
template <class T>
constexpr LowpassOutput<T> lowpass_derivative(const T& u, const T& x, double alpha) {
    const T d = alpha * (u - x);
    return {x, d, d};
}

// 1/(p+α)[u]: x' = u - αx, y = x.
template <class T>
constexpr LagOutput<T> pure_lag(const T& u, const T& x, double alpha) {
    return {x, u - alpha * x};
}

// p/(p+α)[u] = u - α·(1/(p+α))[u], built on one pure-lag state.
template <class T>
constexpr LagOutput<T> washout(const T& u, const T& x, double alpha) {
    return {u - alpha * x, u - alpha * x};
}

// Scalar filter with its own state, for standalone use and tests. Inside the
// simulation the states live in the augmented vector instead.
struct FirstOrderFilter {
    FilterKind kind = FilterKind::lowpass;
    double pole = 1.0;
    double state = 0.0;

    FirstOrderFilter(FilterKind k, double alpha, double x0 = 0.0);

    // Output for input u at the current state.
    double output(double u) const;
    double derivative(double u) const;
};

// Cascade of first-order stages; the output of stage k drives stage k+1.
class FilterChain {
public:
    FilterChain() = default;
    explicit FilterChain(std::vector<FirstOrderFilter> stages);

    std::size_t size() const { return stages_.size(); }
    const std::vector<FirstOrderFilter>& stages() const { return stages_; }

    double output(double u) const;

    // Advance all stages by one RK4 step with u(t) given as a callable.
    template <class Input>
    void advance(const Input& u, double t, double dt);

private:
    std::vector<double> derivatives(double u, const std::vector<double>& states) const;

    std::vector<FirstOrderFilter> stages_;
};

template <class Input>
void FilterChain::advance(const Input& u, double t, double dt) {
    std::vector<double> x(stages_.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = stages_[k].state;
    auto f = [&](double tt, const std::vector<double>& s) { return derivatives(u(tt), s); };
    auto shifted = [](std::vector<double> base, double h, const std::vector<double>& d) {
        for (std::size_t k = 0; k < base.size(); ++k) base[k] += h * d[k];
        return base;
    };
    const auto k1 = f(t, x);
    const auto k2 = f(t + 0.5 * dt, shifted(x, 0.5 * dt, k1));
    const auto k3 = f(t + 0.5 * dt, shifted(x, 0.5 * dt, k2));
    const auto k4 = f(t + dt, shifted(x, dt, k3));
    for (std::size_t k = 0; k < x.size(); ++k) {
        stages_[k].state = x[k] + dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
}

}  // namespace drem_im
