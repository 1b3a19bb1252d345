#pragma once

// Dense algebra for the regressor mixing step: adjugate and determinant of the
// stacked regressor (6x6 electrical, 2x2 mechanical), and the mixing
// zeta = adj(A) y, delta = det(A).
//
// Adjugate and determinant come from a singular value decomposition,
// A = U S Vᵀ, adj(A) = det(U) det(V) V adj(S) Uᵀ with adj(S) = diag(prod_{j!=k} s_j).
// Nothing divides by det(A), so singular A is fine, and the identity
// adj(A) A = det(A) I holds to rounding even when A is badly conditioned.
// The 2x2 case uses the exact closed form.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "drem_im/errors.hpp"

namespace drem_im {

template <std::size_t N>
using SquareMatrix = std::array<std::array<double, N>, N>;

template <std::size_t N>
using Vector = std::array<double, N>;

template <std::size_t N>
struct AdjugateDet {
    SquareMatrix<N> adj{};
    double det = 0.0;
};

template <std::size_t N>
struct Mixed {
    Vector<N> zeta{};
    double delta = 0.0;
};

template <std::size_t N>
constexpr SquareMatrix<N> identity() {
    SquareMatrix<N> I{};
    for (std::size_t k = 0; k < N; ++k) I[k][k] = 1.0;
    return I;
}

template <std::size_t N>
SquareMatrix<N> matmul(const SquareMatrix<N>& A, const SquareMatrix<N>& B) {
    SquareMatrix<N> C{};
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t k = 0; k < N; ++k) {
            const double a = A[r][k];
            for (std::size_t c = 0; c < N; ++c) C[r][c] += a * B[k][c];
        }
    return C;
}

template <std::size_t N>
Vector<N> matvec(const SquareMatrix<N>& A, const Vector<N>& x) {
    Vector<N> y{};
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) y[r] += A[r][c] * x[c];
    return y;
}

template <std::size_t N>
double frobenius(const SquareMatrix<N>& A) {
    double s = 0.0;
    for (const auto& row : A)
        for (double x : row) s += x * x;
    return std::sqrt(s);
}

// Defined for N = 1..6. Throws NumericFault on non-finite entries.
template <std::size_t N>
AdjugateDet<N> adjugate_det(const SquareMatrix<N>& A);

template <std::size_t N>
Mixed<N> mix(const SquareMatrix<N>& A, const Vector<N>& y) {
    const AdjugateDet<N> ad = adjugate_det(A);
    return {matvec(ad.adj, y), ad.det};
}

// Runtime-dimensioned entry point for callers that hold row-major buffers
// (C API, tools). Supports n = 2 and n = 6; throws DimensionError otherwise or
// when the buffer sizes disagree with n.
void mix_dynamic(std::size_t n, std::span<const double> A_row_major, std::span<const double> y,
                 std::span<double> zeta_out, double& delta_out);

}  // namespace drem_im
