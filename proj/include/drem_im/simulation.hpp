#pragma once

// The augmented closed system: motor, FOC integrators, six electrical
// regression chains, the mechanical chain and the observers, all advanced by
// one RK4 step so every subsystem shares the same time base.
//
// Gating (decided once per step, from the state at the step start):
//  - observers are frozen, and see ζ, Δ = 0, before observer.enable_time;
//  - all regression chains run from t = 0, so their filter transients have
//    died out by the time the observers start.

#include <array>
#include <cstddef>

#include "drem_im/electrical_regression.hpp"
#include "drem_im/mechanical_regression.hpp"
#include "drem_im/motor.hpp"
#include "drem_im/observers.hpp"
#include "drem_im/rk4.hpp"
#include "drem_im/scenario.hpp"
#include "drem_im/state_fields.hpp"

namespace drem_im {

namespace layout {
inline constexpr std::size_t motor = 0;
inline constexpr std::size_t motor_size = field_count<MotorState>();
inline constexpr std::size_t ctrl = motor + motor_size;
inline constexpr std::size_t ctrl_size = field_count<ControllerState>();
inline constexpr std::size_t chains = ctrl + ctrl_size;
inline constexpr std::size_t chain_size = field_count<ElectricalChainState>();
inline constexpr std::size_t mech = chains + kElectricalChains * chain_size;
inline constexpr std::size_t mech_size = field_count<MechanicalChainState>();
inline constexpr std::size_t observer = mech + mech_size;
inline constexpr std::size_t observer_size = field_count<ObserverState>();
inline constexpr std::size_t total = observer + observer_size;
}  // namespace layout

using AugmentedState = StateVector<layout::total>;

struct Gates {
    bool observer = false;
};

// Everything observable at one instant.
struct Signals {
    double t = 0.0;
    Gates gates;
    MotorState motor;
    ControllerState ctrl;
    FocOutput foc;
    Vec2 v;
    std::array<ElectricalChainOutputs, kElectricalChains> chains{};
    ElectricalRegression elec;
    MechanicalInputs mech_in;
    MechanicalOutputs mech_out;
    MechanicalRegression mech;
    ObserverState observer;
    Vec2 lambda_hat;
    double delta_e_fed = 0.0;  // Δe as seen by the observers (0 while gated)
    double delta_m_fed = 0.0;  // Δm as seen by the observers
};

class Simulation {
public:
    explicit Simulation(ScenarioConfig cfg);

    void step();

    double time() const { return current_.t; }
    std::size_t step_index() const { return step_; }
    std::size_t total_steps() const { return total_steps_; }
    bool finished() const { return step_ >= total_steps_; }

    const ScenarioConfig& config() const { return cfg_; }
    const Signals& signals() const { return current_; }
    const AugmentedState& state() const { return x_; }
    const ExcitationMonitor& electrical_monitor() const { return mon_e_; }
    const ExcitationMonitor& mechanical_monitor() const { return mon_m_; }
    std::size_t flux_floor_events() const { return flux_floor_events_; }

    // Signals and state derivative at (t, x) under the given gates.
    Signals evaluate(double t, const AugmentedState& x, const Gates& g, AugmentedState* derivative) const;

private:
    Gates gates_for(std::size_t step) const;

    ScenarioConfig cfg_;
    KnownElectricalParams elec_params_;
    KnownMechanicalParams mech_params_;
    KnownObserverParams obs_params_;
    AugmentedState x_{};
    std::size_t step_ = 0;
    std::size_t total_steps_ = 0;
    std::size_t enable_step_ = 0;
    Signals current_;
    ExcitationMonitor mon_e_;
    ExcitationMonitor mon_m_;
    std::size_t flux_floor_events_ = 0;
};

}  // namespace drem_im
