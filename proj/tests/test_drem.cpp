#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "drem_im/drem.hpp"

using namespace drem_im;

namespace {

using Dyn = std::vector<std::vector<double>>;

// Laplace expansion along the first row.
double cofactor_det(const Dyn& A) {
    const std::size_t n = A.size();
    if (n == 1) return A[0][0];
    double d = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        Dyn m;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<double> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != c) row.push_back(A[r][k]);
            m.push_back(row);
        }
        d += (c % 2 ? -1.0 : 1.0) * A[0][c] * cofactor_det(m);
    }
    return d;
}

template <std::size_t N>
SquareMatrix<N> cofactor_adjugate(const SquareMatrix<N>& A) {
    SquareMatrix<N> adj{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            Dyn m;
            for (std::size_t r = 0; r < N; ++r) {
                if (r == j) continue;
                std::vector<double> row;
                for (std::size_t c = 0; c < N; ++c)
                    if (c != i) row.push_back(A[r][c]);
                m.push_back(row);
            }
            adj[i][j] = ((i + j) % 2 ? -1.0 : 1.0) * (N == 1 ? 1.0 : cofactor_det(m));
        }
    return adj;
}

template <std::size_t N>
SquareMatrix<N> random_matrix(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    SquareMatrix<N> A{};
    for (auto& row : A)
        for (double& x : row) x = u(rng);
    return A;
}

template <std::size_t N>
double identity_residual(const SquareMatrix<N>& A, const AdjugateDet<N>& ad) {
    double worst = 0.0;
    for (const auto& P : {matmul(ad.adj, A), matmul(A, ad.adj)}) {
        SquareMatrix<N> R = P;
        for (std::size_t k = 0; k < N; ++k) R[k][k] -= ad.det;
        worst = std::max(worst, frobenius(R));
    }
    return worst;
}

template <std::size_t N>
double max_abs_diff(const SquareMatrix<N>& A, const SquareMatrix<N>& B) {
    double m = 0.0;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) m = std::max(m, std::abs(A[r][c] - B[r][c]));
    return m;
}

template <std::size_t N>
double max_abs(const SquareMatrix<N>& A) {
    double m = 0.0;
    for (const auto& row : A)
        for (double x : row) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("identity") {
    const auto ad = adjugate_det(identity<6>());
    CHECK(ad.det == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(max_abs_diff(ad.adj, identity<6>()) < 1e-14);
}

TEST_CASE("2x2 closed form") {
    const SquareMatrix<2> A{{{1.5, -2.0}, {0.25, 3.0}}};
    const auto ad = adjugate_det(A);
    CHECK(ad.det == 1.5 * 3.0 - (-2.0) * 0.25);
    CHECK(ad.adj[0][0] == 3.0);
    CHECK(ad.adj[0][1] == 2.0);
    CHECK(ad.adj[1][0] == -0.25);
    CHECK(ad.adj[1][1] == 1.5);
}

TEST_CASE("random 6x6 agrees with cofactor expansion") {
    std::mt19937_64 rng(2024);
    for (int n = 0; n < 100; ++n) {
        const auto A = random_matrix<6>(rng);
        Dyn d(6, std::vector<double>(6));
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c) d[r][c] = A[r][c];
        const double det_ref = cofactor_det(d);
        const auto adj_ref = cofactor_adjugate(A);
        const auto ad = adjugate_det(A);
        const double scale = 1.0 + max_abs(adj_ref);
        CHECK(std::abs(ad.det - det_ref) <= 1e-9 * (1.0 + std::abs(det_ref)));
        CHECK(max_abs_diff(ad.adj, adj_ref) <= 1e-9 * scale);
        const double normA = frobenius(A);
        CHECK(identity_residual(A, ad) <= 1e-10 * (1.0 + std::pow(normA, 6)));
    }
}

TEST_CASE("other sizes agree with cofactor expansion") {
    std::mt19937_64 rng(5);
    auto check = [&](auto tag) {
        constexpr std::size_t N = decltype(tag)::value;
        for (int n = 0; n < 20; ++n) {
            const auto A = random_matrix<N>(rng, -3.0, 3.0);
            const auto ad = adjugate_det(A);
            CHECK(max_abs_diff(ad.adj, cofactor_adjugate(A)) <= 1e-11 * (1.0 + max_abs(ad.adj)));
        }
    };
    check(std::integral_constant<std::size_t, 1>{});
    check(std::integral_constant<std::size_t, 3>{});
    check(std::integral_constant<std::size_t, 4>{});
    check(std::integral_constant<std::size_t, 5>{});
}

TEST_CASE("scaling laws") {
    std::mt19937_64 rng(17);
    for (double c : {-2.0, 0.5, 3.0}) {
        const auto A = random_matrix<6>(rng);
        auto cA = A;
        for (auto& row : cA)
            for (double& x : row) x *= c;
        const auto ad = adjugate_det(A);
        const auto adc = adjugate_det(cA);
        CHECK(adc.det == Catch::Approx(std::pow(c, 6) * ad.det).epsilon(1e-11));
        auto scaled = ad.adj;
        for (auto& row : scaled)
            for (double& x : row) x *= std::pow(c, 5);
        CHECK(max_abs_diff(adc.adj, scaled) <= 1e-11 * (1.0 + max_abs(scaled)));
    }
}

TEST_CASE("singular matrices") {
    std::mt19937_64 rng(99);
    SECTION("rank n-1: adjugate is rank one and annihilates A") {
        auto A = random_matrix<6>(rng);
        for (int c = 0; c < 6; ++c) A[5][c] = 2.0 * A[0][c] - A[3][c];
        const auto ad = adjugate_det(A);
        CHECK(std::abs(ad.det) < 1e-13);
        CHECK(max_abs(matmul(ad.adj, A)) < 1e-12 * (1.0 + max_abs(ad.adj)));
        CHECK(max_abs(ad.adj) > 1e-3);
        CHECK(max_abs_diff(ad.adj, cofactor_adjugate(A)) < 1e-10 * (1.0 + max_abs(ad.adj)));
        // any two rows of a rank-one matrix are parallel
        double cross = 0.0;
        for (int c = 0; c < 6; ++c)
            for (int k = 0; k < 6; ++k) cross = std::max(cross, std::abs(ad.adj[1][c] * ad.adj[2][k] - ad.adj[1][k] * ad.adj[2][c]));
        CHECK(cross < 1e-12 * (1.0 + max_abs(ad.adj) * max_abs(ad.adj)));
    }
    SECTION("rank n-2: adjugate vanishes") {
        auto A = random_matrix<6>(rng);
        for (int c = 0; c < 6; ++c) {
            A[4][c] = A[0][c] + A[1][c];
            A[5][c] = A[2][c] - A[3][c];
        }
        const auto ad = adjugate_det(A);
        CHECK(std::abs(ad.det) < 1e-13);
        CHECK(max_abs(ad.adj) < 1e-13);
    }
    SECTION("zero matrix") {
        const auto ad = adjugate_det(SquareMatrix<6>{});
        CHECK(ad.det == 0.0);
        CHECK(max_abs(ad.adj) == 0.0);
    }
}

TEST_CASE("non-finite entries raise a fault") {
    auto A = identity<6>();
    A[2][3] = std::nan("");
    CHECK_THROWS_AS(adjugate_det(A), NumericFault);
    SquareMatrix<2> B{{{1.0, INFINITY}, {0.0, 1.0}}};
    CHECK_THROWS_AS(adjugate_det(B), NumericFault);
}

TEST_CASE("mixing decouples a constructed regression") {
    SECTION("identity") {
        const Vector<6> y{1, -2, 3, -4, 5, -6};
        const auto m = mix(identity<6>(), y);
        CHECK(m.delta == Catch::Approx(1.0));
        for (int k = 0; k < 6; ++k) CHECK(m.zeta[k] == Catch::Approx(y[k]));
    }
    SECTION("diagonal") {
        const SquareMatrix<2> A{{{2.0, 0.0}, {0.0, 3.0}}};
        const auto m = mix(A, Vector<2>{10.0, 21.0});
        CHECK(m.delta == 6.0);
        CHECK(m.zeta[0] == 30.0);
        CHECK(m.zeta[1] == 42.0);
    }
    SECTION("random") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int n = 0; n < 50; ++n) {
            const auto A = random_matrix<6>(rng);
            Vector<6> theta{};
            for (double& x : theta) x = u(rng);
            const auto m = mix(A, matvec(A, theta));
            for (int k = 0; k < 6; ++k) {
                const double ref = m.delta * theta[k];
                CHECK(std::abs(m.zeta[k] - ref) <= 1e-9 * (std::abs(ref) + std::abs(m.delta)));
            }
        }
    }
}

TEST_CASE("runtime-sized mixing") {
    const std::vector<double> A{2.0, 0.0, 0.0, 3.0};
    const std::vector<double> y{10.0, 21.0};
    std::vector<double> zeta(2);
    double delta = 0.0;
    mix_dynamic(2, A, y, zeta, delta);
    CHECK(delta == 6.0);
    CHECK(zeta[0] == 30.0);
    CHECK(zeta[1] == 42.0);

    std::vector<double> big(9), y3(3), z3(3);
    CHECK_THROWS_AS(mix_dynamic(3, big, y3, z3, delta), DimensionError);
    CHECK_THROWS_AS(mix_dynamic(2, big, y, zeta, delta), DimensionError);
    CHECK_THROWS_AS(mix_dynamic(2, A, y3, zeta, delta), DimensionError);
    CHECK_THROWS_AS(mix_dynamic(2, A, y, z3, delta), DimensionError);
}
