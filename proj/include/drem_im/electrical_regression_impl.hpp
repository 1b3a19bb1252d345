#pragma once

#include <utility>

#include "drem_im/rk4.hpp"
#include "drem_im/state_fields.hpp"

namespace drem_im {

template <class Measurement>
ElectricalChainState advance_chain(const ElectricalChainState& x, const Measurement& meas, double alpha,
                                   double t, double dt) {
    constexpr std::size_t n = field_count<ElectricalChainState>();
    StateVector<n> flat{};
    pack(x, flat);
    auto f = [&](double tt, const StateVector<n>& s) {
        const auto [i, v] = meas(tt);
        StateVector<n> d{};
        pack(chain_derivative(unpack<ElectricalChainState>(s), i, v, alpha), d);
        return d;
    };
    return unpack<ElectricalChainState>(step_rk4(flat, t, dt, f));
}

}  // namespace drem_im
