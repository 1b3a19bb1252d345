#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "drem_im/errors.hpp"

namespace drem_im {

template <std::size_t N>
using StateVector = std::array<double, N>;

// One classical Runge-Kutta step of x' = f(t, x) over the whole vector.
// Throws NumericFault stamped with `t` when the result is not finite.
template <std::size_t N, class Derivative>
StateVector<N> step_rk4(const StateVector<N>& x, double t, double dt, Derivative&& f) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be > 0");
    auto axpy = [](const StateVector<N>& base, double h, const StateVector<N>& k) {
        StateVector<N> r;
        for (std::size_t j = 0; j < N; ++j) r[j] = base[j] + h * k[j];
        return r;
    };
    const StateVector<N> k1 = f(t, x);
    const StateVector<N> k2 = f(t + 0.5 * dt, axpy(x, 0.5 * dt, k1));
    const StateVector<N> k3 = f(t + 0.5 * dt, axpy(x, 0.5 * dt, k2));
    const StateVector<N> k4 = f(t + dt, axpy(x, dt, k3));

    StateVector<N> out;
    for (std::size_t j = 0; j < N; ++j) {
        out[j] = x[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        if (!std::isfinite(out[j])) {
            throw NumericFault("integration produced a non-finite state at t=" + std::to_string(t), t);
        }
    }
    return out;
}

}  // namespace drem_im
