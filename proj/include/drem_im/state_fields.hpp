#pragma once

// Flat packing of the small state structs that make up the augmented ODE state.
// A state struct opts in by providing
//
//   template <class Self, class F> static constexpr void visit(Self& s, F&& f);
//
// which calls f(double&) (or f(const double&)) on each scalar field in a fixed order.

#include <cstddef>
#include <span>
#include <type_traits>

#include "drem_im/vec2.hpp"

namespace drem_im {

namespace detail {
template <class F>
struct FieldAdapter {
    F& f;
    constexpr void operator()(double& x) const { f(x); }
    constexpr void operator()(const double& x) const { f(x); }
    constexpr void operator()(Vec2& x) const { f(x.a); f(x.b); }
    constexpr void operator()(const Vec2& x) const { f(x.a); f(x.b); }
};
}  // namespace detail

template <class S, class F>
constexpr void for_each_field(S& s, F&& f) {
    detail::FieldAdapter<F> adapter{f};
    std::remove_const_t<S>::visit(s, adapter);
}

template <class S>
constexpr std::size_t field_count() {
    S s{};
    std::size_t n = 0;
    for_each_field(s, [&n](double&) { ++n; });
    return n;
}

template <class S>
void pack(const S& s, std::span<double> out) {
    std::size_t k = 0;
    for_each_field(s, [&](const double& x) { out[k++] = x; });
}

template <class S>
S unpack(std::span<const double> in) {
    S s{};
    std::size_t k = 0;
    for_each_field(s, [&](double& x) { x = in[k++]; });
    return s;
}

}  // namespace drem_im
