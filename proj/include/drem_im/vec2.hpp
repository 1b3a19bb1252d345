#pragma once

#include <cmath>

namespace drem_im {

// Fixed-frame (a,b) 2-vector. Used for flux, current and voltage.
struct Vec2 {
    double a = 0.0;
    double b = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) { a += o.a; b += o.b; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) { a -= o.a; b -= o.b; return *this; }
    constexpr Vec2& operator*=(double k) { a *= k; b *= k; return *this; }

    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 x, const Vec2& y) { return x += y; }
constexpr Vec2 operator-(Vec2 x, const Vec2& y) { return x -= y; }
constexpr Vec2 operator-(const Vec2& x) { return {-x.a, -x.b}; }
constexpr Vec2 operator*(double k, Vec2 x) { return x *= k; }
constexpr Vec2 operator*(Vec2 x, double k) { return x *= k; }
constexpr Vec2 operator/(const Vec2& x, double k) { return {x.a / k, x.b / k}; }

constexpr double dot(const Vec2& x, const Vec2& y) { return x.a * y.a + x.b * y.b; }
constexpr double norm_sq(const Vec2& x) { return dot(x, x); }
inline double norm(const Vec2& x) { return std::hypot(x.a, x.b); }

// Multiplication by the skew matrix [[0,-1],[1,0]] (rotation by +90 degrees).
constexpr Vec2 skew(const Vec2& x) { return {-x.b, x.a}; }

inline bool is_finite(const Vec2& x) { return std::isfinite(x.a) && std::isfinite(x.b); }

// exp(J*angle): planar rotation by `angle`.
struct Rotation2 {
    double c = 1.0;
    double s = 0.0;

    static Rotation2 from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

    constexpr Vec2 apply(const Vec2& x) const { return {c * x.a - s * x.b, s * x.a + c * x.b}; }
    constexpr Rotation2 inverse() const { return {c, -s}; }
    constexpr double det() const { return c * c + s * s; }
};

}  // namespace drem_im
