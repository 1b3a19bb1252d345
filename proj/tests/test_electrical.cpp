#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>

#include "drem_im/electrical_regression.hpp"
#include "drem_im/motor.hpp"
#include "drem_im/rk4.hpp"
#include "drem_im/state_fields.hpp"

using namespace drem_im;

namespace {

constexpr std::array<double, 6> kAlphas{10.0, 20.0, 30.0, 40.0, 50.0, 100.0};

// Open-loop motor driven by a two-tone voltage, with all six chains attached.
struct Rig {
    MotorState m;
    std::array<ElectricalChainState, 6> c{};

    template <class Self, class F>
    static constexpr void visit(Self& s, F&& f) {
        MotorState::visit(s.m, f);
        for (auto& ch : s.c) ElectricalChainState::visit(ch, f);
    }
};

Vec2 two_tone(double t) {
    const double w1 = 2.0 * std::numbers::pi * 5.0;
    const double w2 = 2.0 * std::numbers::pi * 13.0;
    return Vec2{std::cos(w1 * t), std::sin(w1 * t)} * 20.0 + Vec2{std::cos(w2 * t), -std::sin(w2 * t)} * 8.0;
}

class OpenLoop {
public:
    explicit OpenLoop(double filter_ic = 0.0) {
        Rig r;
        r.m.lambda = {0.02, 0.0};
        StateVector<n> s{};
        pack(r, s);
        for (std::size_t k = field_count<MotorState>(); k < n; ++k) s[k] = filter_ic;
        x_ = s;
    }

    void run_until(double t_end) {
        auto f = [this](double t, const StateVector<n>& s) {
            const Rig r = unpack<Rig>(s);
            const Vec2 v = two_tone(t);
            Rig d;
            d.m = motor_derivative(r.m, v, p_);
            for (std::size_t l = 0; l < 6; ++l) d.c[l] = chain_derivative(r.c[l], r.m.i, v, kAlphas[l]);
            StateVector<n> out{};
            pack(d, out);
            return out;
        };
        while (t_ < t_end - 0.5 * dt_) {
            x_ = step_rk4(x_, t_, dt_, f);
            t_ = (++k_) * dt_;
        }
    }

    std::array<ElectricalChainOutputs, 6> outputs() const {
        const Rig r = unpack<Rig>(x_);
        std::array<ElectricalChainOutputs, 6> out;
        for (std::size_t l = 0; l < 6; ++l)
            out[l] = chain_outputs(r.c[l], r.m.i, two_tone(t_), kAlphas[l], KnownElectricalParams::from(p_));
        return out;
    }

    Vector<6> theta() const { return electrical_theta(p_.Rr, unpack<Rig>(x_).m.lambda); }

    // |z - φᵀΘ| relative to the size of the terms.
    std::array<double, 6> residuals() const {
        const auto out = outputs();
        const auto th = theta();
        std::array<double, 6> res{};
        for (std::size_t l = 0; l < 6; ++l) {
            double fit = 0.0, scale = std::abs(out[l].z);
            for (int k = 0; k < 6; ++k) {
                fit += out[l].phi[k] * th[k];
                scale += std::abs(out[l].phi[k] * th[k]);
            }
            res[l] = std::abs(out[l].z - fit) / scale;
        }
        return res;
    }

private:
    static constexpr std::size_t n = field_count<Rig>();
    MotorParams p_{};
    StateVector<n> x_{};
    double t_ = 0.0;
    std::size_t k_ = 0;
    double dt_ = 2e-5;
};

template <class Meas>
ElectricalChainState drive(const Meas& meas, double alpha, double t_end, double dt = 1e-4) {
    ElectricalChainState x;
    const int n = static_cast<int>(std::lround(t_end / dt));
    for (int k = 0; k < n; ++k) x = advance_chain(x, meas, alpha, k * dt, dt);
    return x;
}

}  // namespace

TEST_CASE("zero measurements keep every chain at zero") {
    auto zero = [](double) { return std::pair<Vec2, Vec2>{}; };
    const auto x = drive(zero, 30.0, 0.5);
    const auto out = chain_outputs(x, {}, {}, 30.0, KnownElectricalParams::from(MotorParams{}));
    CHECK(out.rho1 == Vec2{});
    CHECK(out.rho2 == 0.0);
    CHECK(out.rho3 == 0.0);
    CHECK(out.z == 0.0);
    for (int k = 0; k < 5; ++k) CHECK(out.phi[k] == 0.0);
    CHECK(out.phi[5] == -2.0 / MotorParams{}.Lr);
}

TEST_CASE("constant measurement settles to the DC filter gains") {
    const MotorParams p;
    auto dc = [&](double) { return std::pair<Vec2, Vec2>{{1.0, 0.0}, {p.Rs, 0.0}}; };
    const auto x = drive(dc, 20.0, 2.0);
    const auto out = chain_outputs(x, {1.0, 0.0}, {p.Rs, 0.0}, 20.0, KnownElectricalParams::from(p));
    CHECK(out.f_i.a == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(out.f_i.b) < 1e-12);
    CHECK(std::abs(out.df_i.a) < 1e-12);
    CHECK(std::abs(out.df_i.b) < 1e-12);
}

TEST_CASE("outputs scale linearly and quadratically with the measurements") {
    const KnownElectricalParams kp = KnownElectricalParams::from(MotorParams{});
    auto meas = [](double t) {
        return std::pair<Vec2, Vec2>{{std::cos(30.0 * t) + 0.2, 0.5 * std::sin(30.0 * t)},
                                     {10.0 * std::sin(17.0 * t), 4.0 - 10.0 * std::cos(17.0 * t)}};
    };
    const double T = 0.4, alpha = 40.0;
    const auto base = meas(T);
    const auto x1 = drive(meas, alpha, T);
    const auto o1 = chain_outputs(x1, base.first, base.second, alpha, kp);
    for (double c : {-1.5, 3.0}) {
        auto scaled = [&](double t) {
            const auto [i, v] = meas(t);
            return std::pair<Vec2, Vec2>{c * i, c * v};
        };
        const auto xc = drive(scaled, alpha, T);
        const auto oc = chain_outputs(xc, c * base.first, c * base.second, alpha, kp);
        CHECK(oc.rho1.a == Catch::Approx(c * o1.rho1.a).epsilon(1e-10));
        CHECK(oc.rho1.b == Catch::Approx(c * o1.rho1.b).epsilon(1e-10));
        CHECK(oc.rho2 == Catch::Approx(c * c * o1.rho2).epsilon(1e-10));
        CHECK(oc.rho3 == Catch::Approx(c * c * o1.rho3).epsilon(1e-10));
    }
}

TEST_CASE("theta components are internally consistent") {
    const auto th = electrical_theta(3.9, {0.03, -0.04});
    CHECK(th[0] == 3.9);
    CHECK(th[3] == 3.9 * th[1]);
    CHECK(th[4] == 3.9 * th[2]);
    CHECK(th[5] == Catch::Approx(3.9 * (th[1] * th[1] + th[2] * th[2])));
}

TEST_CASE("the regression holds on an open-loop motor") {
    OpenLoop rig;
    rig.run_until(5.0 / kAlphas[0]);
    for (double r : rig.residuals()) CHECK(r < 1e-3);
    rig.run_until(1.5);
    for (double r : rig.residuals()) CHECK(r < 1e-6);
}

TEST_CASE("perturbed filter states only add a decaying term") {
    OpenLoop clean, perturbed(0.5);
    clean.run_until(0.2);
    perturbed.run_until(0.2);
    const auto early = perturbed.residuals();
    CHECK(*std::max_element(early.begin(), early.end()) > 1e-3);
    clean.run_until(1.5);
    perturbed.run_until(1.5);
    const auto late = perturbed.residuals();
    for (std::size_t l = 0; l < 6; ++l) CHECK(late[l] < 1e-3);
}

TEST_CASE("mixing decouples the open-loop regression") {
    OpenLoop rig;
    rig.run_until(1.5);
    const ElectricalRegression reg = extend_and_mix(rig.outputs());
    const auto th = rig.theta();
    REQUIRE(std::abs(reg.Delta) > 0.0);
    for (int k = 0; k < 6; ++k) {
        INFO("component " << k);
        CHECK(std::abs(reg.zeta[k] - reg.Delta * th[k]) <= 1e-6 * (std::abs(reg.zeta[k]) + std::abs(reg.Delta * th[k])));
    }
    CHECK(reg.zeta_e1() == reg.zeta[0]);
    CHECK(reg.zeta_e23() == Vec2{reg.zeta[1], reg.zeta[2]});
}

TEST_CASE("zero chains give a singular stack") {
    std::array<ElectricalChainOutputs, 6> chains{};
    for (auto& c : chains) c.phi[5] = -2.0 / 0.14;
    const ElectricalRegression reg = extend_and_mix(chains);
    CHECK(reg.Delta == 0.0);
}

TEST_CASE("single-frequency steady state leaves at most three independent directions") {
    // With i and v rotating at one frequency and constant amplitude, every
    // filtered quantity is a fixed linear map of (1, cos, sin) of the same
    // phasor: the stacked regressor cannot reach rank six.
    const double w = 41.0;
    auto meas = [w](double t) {
        return std::pair<Vec2, Vec2>{{0.9 * std::cos(w * t), 0.9 * std::sin(w * t)},
                                     {12.0 * std::cos(w * t + 0.6), 12.0 * std::sin(w * t + 0.6)}};
    };
    const double T = 3.0;
    const auto [iT, vT] = meas(T);
    std::array<ElectricalChainOutputs, 6> chains;
    for (std::size_t l = 0; l < 6; ++l)
        chains[l] = chain_outputs(drive(meas, kAlphas[l], T, 2e-5), iT, vT, kAlphas[l],
                                  KnownElectricalParams::from(MotorParams{}));
    const ElectricalRegression reg = extend_and_mix(chains);
    Eigen::Matrix<double, 6, 6> Phi;
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) Phi(r, c) = reg.Phi[r][c];
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>>(Phi).singularValues();
    INFO("singular values " << s.transpose());
    CHECK(s(2) / s(0) > 1e-4);
    CHECK(s(3) / s(0) < 1e-7);
    CHECK(std::abs(reg.Delta) < 1e-12 * std::pow(s(0), 6));
}

TEST_CASE("filter constants must be positive and distinct") {
    CHECK_NOTHROW(validate_alphas({10, 20, 30, 40, 50, 100}));
    CHECK_THROWS_AS(validate_alphas({10, 20, 30, 40, 50, 10}), ConfigError);
    try {
        validate_alphas({10, -20, 30, 30, 0, 100});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.problems().size() == 3);
    }
}
