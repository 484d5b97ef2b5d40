#pragma once

#include <cstdint>

#include "adaptsafe/controller.hpp"
#include "adaptsafe/model.hpp"
#include "adaptsafe/plant.hpp"
#include "adaptsafe/scenario.hpp"

namespace adaptsafe {

/// What the managed system did during one tick.
struct ManagedTick {
  std::int64_t index = 0;
  EnvironmentSample sample;  // sensed at the start of the tick
  double power = 0.0;        // W actually applied
  bool valve_open = true;
  bool guard_active = false;  // guard overrides in force this tick
  bool guard_latched = false;  // guard latched during this tick
  PlantState after;            // state after plant and hazard updates
};

/// Managed system in isolation: environment, guard, controller, plant and
/// hazard accounting, in that order each tick.
class ManagedLoop {
 public:
  ManagedLoop(const Scenario& scenario, PlantParams params, const SystemConfiguration& config, bool guard_enabled)
      : scenario_(scenario), params_(params), env_(scenario_), controller_(config) {
    params_.tick = scenario_.tick;
    params_.validate();
    state_.tank_temp = scenario_.start_temp();
    guard_.enabled = guard_enabled;
  }

  ManagedLoop(const ManagedLoop&) = delete;
  ManagedLoop& operator=(const ManagedLoop&) = delete;

  bool done() const { return k_ >= scenario_.tick_count(); }
  std::int64_t index() const noexcept { return k_; }
  double now() const { return scenario_.time_at(k_); }

  ManagedTick step() {
    ManagedTick t;
    t.index = k_;
    t.sample = env_.sample(k_, state_.outflow_temp());

    const bool was_tripped = guard_.tripped;
    auto g = guard_step(guard_, state_, t.sample.time, params_.tick);
    guard_ = g.guard;
    t.guard_active = g.overrides.power_zeroed;
    t.guard_latched = guard_.tripped && !was_tripped;
    if (t.guard_latched) ++guard_trips_;

    double power = controller_.compute(t.sample, params_.tick, params_.max_power);
    if (g.overrides.power_zeroed) power = 0.0;
    if (g.overrides.valve_closed) state_.valve_open = false;

    state_ = plant_step(state_, params_, t.sample, power);
    state_ = hazard_update(state_, params_);
    t.power = state_.power_cmd;
    t.valve_open = state_.valve_open;
    t.after = state_;
    ++k_;
    return t;
  }

  /// Swaps the control law between ticks; transient controller state starts
  /// from zero.
  void set_configuration(const SystemConfiguration& config) { controller_ = Controller(config); }

  const PlantState& state() const noexcept { return state_; }
  const GuardState& guard() const noexcept { return guard_; }
  const PlantParams& params() const noexcept { return params_; }
  std::int64_t guard_trips() const noexcept { return guard_trips_; }

 private:
  Scenario scenario_;
  PlantParams params_;
  EnvironmentSource env_;
  Controller controller_;
  PlantState state_;
  GuardState guard_;
  std::int64_t k_ = 0;
  std::int64_t guard_trips_ = 0;
};

}  // namespace adaptsafe
