#include "drem_im/drem.hpp"

#include <Eigen/Dense>
#include <string>

namespace drem_im {

template <std::size_t N>
AdjugateDet<N> adjugate_det(const SquareMatrix<N>& A) {
    static_assert(N >= 1 && N <= 6);
    for (const auto& row : A)
        for (double x : row)
            if (!std::isfinite(x)) throw NumericFault("adjugate_det: non-finite matrix entry", std::nan(""));

    AdjugateDet<N> out;
    if constexpr (N == 1) {
        out.adj[0][0] = 1.0;
        out.det = A[0][0];
    } else if constexpr (N == 2) {
        out.adj = {{{A[1][1], -A[0][1]}, {-A[1][0], A[0][0]}}};
        out.det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    } else {
        using Mat = Eigen::Matrix<double, int(N), int(N)>;
        Mat M;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) M(int(r), int(c)) = A[r][c];
        const Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        const Mat& U = svd.matrixU();
        const Mat& V = svd.matrixV();
        const double orient = (U.determinant() < 0.0) == (V.determinant() < 0.0) ? 1.0 : -1.0;

        // Products of all singular values but one, without dividing.
        Eigen::Matrix<double, int(N), 1> others;
        double all = 1.0;
        for (int k = 0; k < int(N); ++k) {
            double p = 1.0;
            for (int j = 0; j < int(N); ++j)
                if (j != k) p *= s(j);
            others(k) = p;
            all *= s(k);
        }
        const Mat adj = orient * V * others.asDiagonal() * U.transpose();
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) out.adj[r][c] = adj(int(r), int(c));
        out.det = orient * all;
    }
    return out;
}

template AdjugateDet<1> adjugate_det<1>(const SquareMatrix<1>&);
template AdjugateDet<2> adjugate_det<2>(const SquareMatrix<2>&);
template AdjugateDet<3> adjugate_det<3>(const SquareMatrix<3>&);
template AdjugateDet<4> adjugate_det<4>(const SquareMatrix<4>&);
template AdjugateDet<5> adjugate_det<5>(const SquareMatrix<5>&);
template AdjugateDet<6> adjugate_det<6>(const SquareMatrix<6>&);

namespace {
template <std::size_t N>
void mix_fixed(std::span<const double> a, std::span<const double> y, std::span<double> zeta, double& delta) {
    SquareMatrix<N> A{};
    Vector<N> v{};
    for (std::size_t r = 0; r < N; ++r) {
        v[r] = y[r];
        for (std::size_t c = 0; c < N; ++c) A[r][c] = a[r * N + c];
    }
    const Mixed<N> m = mix(A, v);
    for (std::size_t r = 0; r < N; ++r) zeta[r] = m.zeta[r];
    delta = m.delta;
}
}  // namespace

void mix_dynamic(std::size_t n, std::span<const double> A_row_major, std::span<const double> y,
                 std::span<double> zeta_out, double& delta_out) {
    if (A_row_major.size() != n * n || y.size() != n || zeta_out.size() != n) {
        throw DimensionError("mix: expected a " + std::to_string(n) + "x" + std::to_string(n) +
                             " matrix and length-" + std::to_string(n) + " vectors");
    }
    switch (n) {
        case 2: mix_fixed<2>(A_row_major, y, zeta_out, delta_out); return;
        case 6: mix_fixed<6>(A_row_major, y, zeta_out, delta_out); return;
        default: throw DimensionError("mix: only 2x2 and 6x6 regressors are supported, got n=" + std::to_string(n));
    }
}

}  // namespace drem_im
