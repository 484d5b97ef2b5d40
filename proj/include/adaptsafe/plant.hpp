#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "adaptsafe/errors.hpp"
#include "adaptsafe/model.hpp"

namespace adaptsafe {

/// Outflow above this temperature, with the valve open, is hazardous once it
/// persists for longer than kHazardDuration.
inline constexpr double kHazardTemp = 90.0;     // degC
inline constexpr double kHazardDuration = 2.0;  // s

struct PlantParams {
  double volume = 50.0;           // L
  double density = 1.0;           // kg/L
  double specific_heat = 4186.0;  // J/(kg*K)
  double max_power = 10000.0;     // W
  double tick = 0.1;              // s

  double heat_capacity() const noexcept { return volume * density * specific_heat; }  // J/K

  void validate(const std::string& path = "plant") const {
    auto positive = [&](double v, const char* name) {
      if (!(std::isfinite(v) && v > 0.0)) throw ValidationError("must be finite and > 0", path + "." + name);
    };
    positive(volume, "volume");
    positive(density, "density");
    positive(specific_heat, "specific_heat");
    positive(max_power, "max_power");
    positive(tick, "tick");
    if (tick > 0.5) throw ValidationError("tick must be <= 0.5 s", path + ".tick");
  }

  friend bool operator==(const PlantParams&, const PlantParams&) = default;
};

/// Well-mixed tank: the outflow temperature is the tank temperature.
struct PlantState {
  double tank_temp = 20.0;  // degC
  bool valve_open = true;
  double power_cmd = 0.0;    // W
  double hazard_accum = 0.0;  // s
  std::int64_t hazard_ticks = 0;
  std::int64_t hazard_count = 0;

  double outflow_temp() const noexcept { return tank_temp; }

  friend bool operator==(const PlantState&, const PlantState&) = default;
};

/// Right-hand side of dT/dt = (q/V)(T_in - T) + P/(rho*c*V).
inline double tank_temp_rate(double tank_temp, double inflow_temp, double flow, double power,
                             const PlantParams& p) noexcept {
  return (flow / p.volume) * (inflow_temp - tank_temp) + power / p.heat_capacity();
}

/// One explicit-Euler tick. The valve gates the flow; power passes through
/// after clamping to [0, max_power].
inline PlantState plant_step(PlantState state, const PlantParams& params, const EnvironmentSample& env,
                             double power_in) {
  if (!std::isfinite(state.tank_temp) || !std::isfinite(env.inflow_temp) || !std::isfinite(env.inflow_rate) ||
      !std::isfinite(power_in))
    throw SimulationFault("non-finite plant input at t=" + std::to_string(env.time));
  if (env.inflow_rate < 0.0) throw SimulationFault("negative inflow rate at t=" + std::to_string(env.time));

  state.power_cmd = std::clamp(power_in, 0.0, params.max_power);
  const double flow = state.valve_open ? env.inflow_rate : 0.0;
  state.tank_temp += params.tick * tank_temp_rate(state.tank_temp, env.inflow_temp, flow, state.power_cmd, params);
  return state;
}

/// Tracks the contiguous time the outflow has been hazardous and counts each
/// episode once, when it first exceeds kHazardDuration.
inline PlantState hazard_update(PlantState state, const PlantParams& params) {
  if (state.valve_open && state.outflow_temp() > kHazardTemp) {
    ++state.hazard_ticks;
    const double before = static_cast<double>(state.hazard_ticks - 1) * params.tick;
    state.hazard_accum = static_cast<double>(state.hazard_ticks) * params.tick;
    // The 1e-9 slack keeps exactly-2.0 s episodes (20 x 0.1 s) from counting.
    constexpr double slack = 1e-9;
    if (state.hazard_accum > kHazardDuration + slack && !(before > kHazardDuration + slack)) ++state.hazard_count;
  } else {
    state.hazard_ticks = 0;
    state.hazard_accum = 0.0;
  }
  return state;
}

// ---------------------------------------------------------------------------
// Independent safety monitor
// ---------------------------------------------------------------------------

struct GuardState {
  bool enabled = true;
  bool tripped = false;
  std::optional<double> trip_time;  // s, when the overrides first take effect

  void manual_reset() noexcept {
    tripped = false;
    trip_time.reset();
  }

  friend bool operator==(const GuardState&, const GuardState&) = default;
};

struct GuardOverrides {
  bool power_zeroed = false;
  bool valve_closed = false;

  friend bool operator==(const GuardOverrides&, const GuardOverrides&) = default;
};

struct GuardStep {
  GuardState guard;
  GuardOverrides overrides;
};

/// Sample-then-act with one tick of latency: an over-limit reading at `now`
/// latches the guard, and the overrides apply from the next tick on. Once
/// latched it stays latched until manual_reset().
inline GuardStep guard_step(GuardState guard, const PlantState& state, double now, double tick) {
  GuardOverrides ov{guard.tripped, guard.tripped};
  if (guard.enabled && !guard.tripped && state.outflow_temp() > kHazardTemp) {
    guard.tripped = true;
    guard.trip_time = now + tick;
  }
  return {guard, ov};
}

}  // namespace adaptsafe
