#include "drem_im/simulation.hpp"

#include <span>

namespace drem_im {

namespace {

template <class S>
S load(const AugmentedState& x, std::size_t offset) {
    return unpack<S>(std::span<const double>(x).subspan(offset, field_count<S>()));
}

template <class S>
void store(AugmentedState& x, std::size_t offset, const S& s) {
    pack(s, std::span<double>(x).subspan(offset, field_count<S>()));
}

std::size_t chain_offset(std::size_t l) { return layout::chains + l * layout::chain_size; }

}  // namespace

Simulation::Simulation(ScenarioConfig cfg)
    : cfg_(std::move(cfg)), mon_e_(cfg_.monitor), mon_m_(cfg_.monitor) {
    cfg_.validate();
    elec_params_ = KnownElectricalParams::from(cfg_.motor);
    mech_params_ = KnownMechanicalParams::from(cfg_.motor);
    obs_params_ = KnownObserverParams::from(cfg_.motor);
    total_steps_ = cfg_.total_steps();
    enable_step_ = cfg_.enable_step();

    x_.fill(cfg_.filter_ic);
    MotorState m;
    m.lambda = cfg_.lambda0;
    m.i = cfg_.i0;
    m.omega = cfg_.omega0;
    store(x_, layout::motor, m);
    store(x_, layout::ctrl, ControllerState{});
    store(x_, layout::observer, cfg_.estimates0);

    current_ = evaluate(0.0, x_, gates_for(0), nullptr);
    if (current_.foc.flux_floored) ++flux_floor_events_;
}

Gates Simulation::gates_for(std::size_t step) const {
    Gates g;
    g.observer = step >= enable_step_;
    return g;
}

Signals Simulation::evaluate(double t, const AugmentedState& x, const Gates& g, AugmentedState* derivative) const {
    Signals s;
    s.t = t;
    s.gates = g;
    s.motor = load<MotorState>(x, layout::motor);
    s.ctrl = load<ControllerState>(x, layout::ctrl);
    s.observer = load<ObserverState>(x, layout::observer);

    ControllerState d_ctrl{};
    if (cfg_.drive == Drive::foc) {
        s.foc = foc_control(s.motor, s.ctrl, cfg_.ctrl, cfg_.motor, cfg_.motor.Rr);
        s.v = s.foc.v;
        d_ctrl = s.foc.d_ctrl;
    }
    const MotorState d_motor = motor_derivative(s.motor, s.v, cfg_.motor);
    const Vec2 i = s.motor.i;
    const Vec2 v = s.v;

    std::array<ElectricalChainState, kElectricalChains> d_chains{};
    for (std::size_t l = 0; l < kElectricalChains; ++l) {
        const auto chain = load<ElectricalChainState>(x, chain_offset(l));
        s.chains[l] = chain_outputs(chain, i, v, cfg_.alphas[l], elec_params_);
        if (derivative) d_chains[l] = chain_derivative(chain, i, v, cfg_.alphas[l]);
    }
    // Derivative-only evaluations skip the mixing while the observers ignore it.
    if (g.observer || !derivative) s.elec = extend_and_mix(s.chains);

    s.lambda_hat = flux_estimate(s.observer.chi, i, obs_params_);

    if (cfg_.mode == ObserverMode::ground_truth) s.mech_in = {s.motor.lambda, cfg_.motor.Rr, i};
    else s.mech_in = {s.lambda_hat, s.observer.rr_hat, i};
    const auto mech_state = load<MechanicalChainState>(x, layout::mech);
    s.mech_out = mechanical_outputs(mech_state, s.mech_in, cfg_.a, mech_params_);
    s.mech = mix_mechanical(s.mech_out);

    ObserverState d_obs{};
    if (g.observer) {
        s.delta_e_fed = s.elec.Delta;
        d_obs.chi = flux_observer_step(i, v, s.elec.zeta_e23(), s.elec.Delta, s.observer.chi, cfg_.gains.gamma_lambda,
                                       obs_params_);
        d_obs.rr_hat = rr_estimator_step(s.elec.zeta_e1(), s.elec.Delta, s.observer.rr_hat, cfg_.gains.gamma_r);

        s.delta_m_fed = s.mech.Delta_m;
        const Vec2 lambda_in = cfg_.mode == ObserverMode::ground_truth ? s.motor.lambda : s.lambda_hat;
        const auto d = tl_omega_step(s.mech.zeta_m, s.delta_m_fed, lambda_in, i, s.observer.tl_hat, s.observer.omega_hat,
                                     cfg_.gains, obs_params_);
        d_obs.tl_hat = d.d_tl;
        d_obs.omega_hat = d.d_omega;
    }

    if (derivative) {
        AugmentedState& d = *derivative;
        store(d, layout::motor, d_motor);
        store(d, layout::ctrl, d_ctrl);
        for (std::size_t l = 0; l < kElectricalChains; ++l) store(d, chain_offset(l), d_chains[l]);
        store(d, layout::mech, mechanical_derivative(mech_state, s.mech_in, cfg_.a, mech_params_));
        store(d, layout::observer, d_obs);
    }
    return s;
}

void Simulation::step() {
    if (finished()) return;
    const Gates g = current_.gates;
    const double t0 = current_.t;
    const double dt = cfg_.dt;

    x_ = step_rk4(x_, t0, dt, [&](double t, const AugmentedState& x) {
        AugmentedState d{};
        evaluate(t, x, g, &d);
        return d;
    });
    ++step_;
    const double t1 = static_cast<double>(step_) * dt;

    // Close the interval with the gates that were in force during it.
    Signals end = evaluate(t1, x_, g, nullptr);
    if (g.observer) {
        mon_e_.accumulate(current_.delta_e_fed, end.delta_e_fed, dt);
        mon_m_.accumulate(current_.delta_m_fed, end.delta_m_fed, dt);
    }
    const Gates next = gates_for(step_);
    if (next.observer != g.observer) end = evaluate(t1, x_, next, nullptr);
    current_ = std::move(end);
    if (current_.foc.flux_floored) ++flux_floor_events_;
}

}  // namespace drem_im
