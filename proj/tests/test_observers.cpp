#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "drem_im/motor.hpp"
#include "drem_im/observers.hpp"
#include "drem_im/rk4.hpp"

using namespace drem_im;

namespace {
const MotorParams kMotor;
const KnownObserverParams kObs = KnownObserverParams::from(kMotor);
}  // namespace

TEST_CASE("flux error dynamics reduce to a scalar decay") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 0; n < 100; ++n) {
        const MotorState x{{0.05 * u(rng), 0.05 * u(rng)}, {u(rng), u(rng)}, 40.0 * u(rng)};
        const Vec2 v{30.0 * u(rng), 30.0 * u(rng)};
        const Vec2 chi{0.1 * u(rng), 0.1 * u(rng)};
        const double Delta = 5.0 * u(rng);
        const double gamma = 1e-3;

        const MotorState dx = motor_derivative(x, v, kMotor);
        const Vec2 d_stator = dx.lambda + (kObs.sigma * kObs.Ls / kObs.beta) * dx.i;
        const Vec2 dchi = flux_observer_step(x.i, v, Delta * x.lambda, Delta, chi, gamma, kObs);
        const Vec2 err = x.lambda - flux_estimate(chi, x.i, kObs);
        // d/dt(λ - λ̂) = d/dt(stator side) - dχ
        const Vec2 d_err = d_stator - dchi;
        const Vec2 expected = -gamma * Delta * Delta * err;
        CHECK(d_err.a == Catch::Approx(expected.a).margin(1e-9));
        CHECK(d_err.b == Catch::Approx(expected.b).margin(1e-9));
    }
}

TEST_CASE("without excitation the flux observer is an open-loop integrator") {
    const Vec2 i{0.7, -0.2}, v{12.0, 5.0};
    const Vec2 d = flux_observer_step(i, v, {3.0, 4.0}, 0.0, {0.01, 0.02}, 1e-3, kObs);
    const Vec2 open = v / kObs.beta - (kObs.Rs / kObs.beta) * i;
    CHECK(d.a == Catch::Approx(open.a));
    CHECK(d.b == Catch::Approx(open.b));
    // and the true motor moves the stator-side combination the same way
    const MotorState x{{0.03, 0.01}, i, 20.0};
    const MotorState dx = motor_derivative(x, v, kMotor);
    const Vec2 ds = dx.lambda + (kObs.sigma * kObs.Ls / kObs.beta) * dx.i;
    CHECK(ds.a == Catch::Approx(open.a).epsilon(1e-12));
    CHECK(ds.b == Catch::Approx(open.b).epsilon(1e-12));
}

TEST_CASE("resistance error follows exp(-gamma * integral of delta squared)") {
    const double Rr = 3.9, gamma = 2.0;
    auto Delta = [](double t) { return std::sin(3.0 * t) + 0.5; };
    // ∫(sin 3s + 0.5)^2 ds
    auto energy = [](double t) { return 0.75 * t - std::sin(6.0 * t) / 12.0 - (std::cos(3.0 * t) - 1.0) / 3.0; };
    auto f = [&](double t, const StateVector<1>& s) {
        return StateVector<1>{rr_estimator_step(Delta(t) * Rr, Delta(t), s[0], gamma)};
    };
    StateVector<1> s{0.0};
    const double dt = 1e-3;
    for (int k = 0; k < 3000; ++k) s = step_rk4(s, k * dt, dt, f);
    const double err = s[0] - Rr;
    CHECK(err == Catch::Approx(-Rr * std::exp(-gamma * energy(3.0))).epsilon(1e-8));
}

TEST_CASE("resistance estimate is frozen without excitation") {
    CHECK(rr_estimator_step(5.0, 0.0, 1.2, 1e-4) == 0.0);
}

TEST_CASE("load and speed errors form the expected cascade") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ObserverGains g;
    g.gamma_T = 3.0;
    g.gamma_omega = 7.0;
    for (int n = 0; n < 50; ++n) {
        MotorParams p = kMotor;
        p.TL = 0.1 * u(rng);
        const MotorState x{{0.05 * u(rng), 0.05 * u(rng)}, {u(rng), u(rng)}, 40.0 * u(rng)};
        const double Dm = u(rng);
        const double tl_hat = 0.1 * u(rng), w_hat = 40.0 * u(rng);
        const auto d = tl_omega_step(Dm * Vec2{p.TL, x.omega}, Dm, x.lambda, x.i, tl_hat, w_hat, g, kObs);
        const double w_dot = motor_derivative(x, {}, p).omega;
        const double tl_err = tl_hat - p.TL, w_err = w_hat - x.omega;
        CHECK(d.d_tl == Catch::Approx(-g.gamma_T * Dm * Dm * tl_err).margin(1e-12));
        CHECK(d.d_omega - w_dot == Catch::Approx(-g.gamma_omega * Dm * Dm * w_err - tl_err / p.J).margin(1e-7));
    }
}

TEST_CASE("without mechanical excitation the speed error stays constant") {
    const MotorState x{{0.04, -0.01}, {0.5, 1.2}, 30.0};
    const auto d = tl_omega_step({}, 0.0, x.lambda, x.i, kMotor.TL, 25.0, ObserverGains{}, kObs);
    CHECK(d.d_tl == 0.0);
    CHECK(d.d_omega == Catch::Approx(motor_derivative(x, {}, kMotor).omega).epsilon(1e-12));
}

TEST_CASE("exact estimates are fixed points") {
    const MotorState x{{0.04, -0.01}, {0.5, 1.2}, 30.0};
    const double De = 0.3, Dm = -2.0;
    CHECK(rr_estimator_step(De * kMotor.Rr, De, kMotor.Rr, 1e-4) == 0.0);
    const Vec2 chi = x.lambda + (kObs.sigma * kObs.Ls / kObs.beta) * x.i;
    const Vec2 d = flux_observer_step(x.i, {10.0, 0.0}, De * x.lambda, De, chi, 1e-3, kObs);
    const Vec2 open = Vec2{10.0, 0.0} / kObs.beta - (kObs.Rs / kObs.beta) * x.i;
    CHECK(d.a == Catch::Approx(open.a).epsilon(1e-12));
    CHECK(d.b == Catch::Approx(open.b).epsilon(1e-12));
    const auto m = tl_omega_step(Dm * Vec2{kMotor.TL, x.omega}, Dm, x.lambda, x.i, kMotor.TL, x.omega,
                                 ObserverGains{}, kObs);
    CHECK(m.d_tl == 0.0);
    CHECK(m.d_omega == Catch::Approx(motor_derivative(x, {}, kMotor).omega).epsilon(1e-9));
}

TEST_CASE("excitation monitor: zero signal") {
    ExcitationMonitor mon;
    for (int k = 0; k <= 5000; ++k) mon.update(0.0, 1e-3);
    CHECK(mon.integral() == 0.0);
    CHECK(mon.classification() == Excitation::insufficient);
}

TEST_CASE("excitation monitor: constant signal") {
    ExcitationSettings s;
    s.window = 0.5;
    ExcitationMonitor mon(s);
    const double c = 1.7, dt = 1e-3;
    for (int k = 0; k <= 4000; ++k) mon.update(c, dt);
    CHECK(mon.elapsed() == Catch::Approx(4.0));
    CHECK(mon.integral() == Catch::Approx(c * c * 4.0).epsilon(1e-12));
    CHECK(mon.window_min() == Catch::Approx(c * c * 0.5).epsilon(1e-9));
    CHECK(mon.last_window() == Catch::Approx(c * c * 0.5).epsilon(1e-9));
    CHECK(mon.classification() == Excitation::pe_like);
}

TEST_CASE("excitation monitor: square-integrable signal") {
    ExcitationMonitor mon;
    const double dt = 1e-3;
    for (int k = 0; k <= 50000; ++k) mon.update(1.0 / (1.0 + k * dt), dt);
    CHECK(mon.integral() == Catch::Approx(1.0 - 1.0 / 51.0).epsilon(1e-6));
    CHECK(mon.classification() == Excitation::insufficient);
}

TEST_CASE("excitation monitor: growing but not persistent") {
    // Short bursts with long gaps: the integral keeps growing while some windows are empty.
    ExcitationMonitor mon;
    const double dt = 1e-3;
    for (int k = 0; k <= 18900; ++k) {
        const double t = k * dt;
        mon.update(std::fmod(t, 3.0) < 1.0 ? 1.0 : 0.0, dt);
    }
    // ends inside a burst
    CHECK(mon.window_min() < 1e-6);
    CHECK(mon.classification() == Excitation::non_l2_trending);
}

TEST_CASE("excitation monitor integral never decreases") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0.0, 2.0);
    ExcitationMonitor mon;
    double last = 0.0;
    for (int k = 0; k < 10000; ++k) {
        mon.update(n(rng), 1e-3);
        CHECK(mon.integral() >= last);
        last = mon.integral();
    }
}

TEST_CASE("excitation monitor rebuilt from increments matches") {
    ExcitationMonitor a, b;
    double prev = 0.0;
    for (int k = 0; k <= 3000; ++k) {
        const double d = std::cos(0.01 * k);
        a.update(d, 1e-3);
        if (k > 0) b.advance(1e-3, 0.5e-3 * (prev * prev + d * d));
        prev = d;
    }
    CHECK(a.integral() == Catch::Approx(b.integral()).epsilon(1e-14));
    CHECK(a.window_min() == Catch::Approx(b.window_min()).epsilon(1e-12));
    CHECK(a.classification() == b.classification());
}

TEST_CASE("excitation labels") {
    CHECK(to_string(Excitation::insufficient) == "insufficient");
    CHECK(to_string(Excitation::non_l2_trending) == "non-L2-trending");
    CHECK(to_string(Excitation::pe_like) == "PE-like");
}
