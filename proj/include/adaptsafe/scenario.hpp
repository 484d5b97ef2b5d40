#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "adaptsafe/errors.hpp"
#include "adaptsafe/model.hpp"

namespace adaptsafe {

struct TimedValue {
  double time = 0.0;
  double value = 0.0;

  friend bool operator==(const TimedValue&, const TimedValue&) = default;
};

enum class Interpolation { constant, linear };

/// Time-indexed signal. Before the first point the first value holds; after
/// the last point the last value holds.
struct SignalTrace {
  std::vector<TimedValue> points;
  Interpolation interpolation = Interpolation::constant;

  static SignalTrace constant(double v) { return {{{0.0, v}}, Interpolation::constant}; }

  double at(double t) const {
    auto it = std::upper_bound(points.begin(), points.end(), t,
                               [](double x, const TimedValue& p) { return x < p.time; });
    if (it == points.begin()) return points.front().value;
    const auto& prev = *(it - 1);
    if (it == points.end() || interpolation == Interpolation::constant) return prev.value;
    const double f = (t - prev.time) / (it->time - prev.time);
    return prev.value + f * (it->value - prev.value);
  }

  void validate(const std::string& path) const {
    if (points.empty()) throw ValidationError("trace needs at least one point", path);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!std::isfinite(points[i].time) || !std::isfinite(points[i].value))
        throw ValidationError("non-finite point", path + "[" + std::to_string(i) + "]");
      if (i > 0 && points[i].time <= points[i - 1].time)
        throw ValidationError("points must be strictly increasing in time", path + "[" + std::to_string(i) + "]");
    }
  }

  friend bool operator==(const SignalTrace&, const SignalTrace&) = default;
};

/// Operator request at a given time; with an option id it asks for that
/// specific option.
struct ManualTrigger {
  double time = 0.0;
  std::optional<std::string> option_id;

  friend bool operator==(const ManualTrigger&, const ManualTrigger&) = default;
};

struct Scenario {
  std::string id;
  double tick = 0.1;       // s
  double duration = 0.0;   // s
  SignalTrace setpoint_schedule;
  SignalTrace inflow_temp_trace;
  SignalTrace inflow_rate_trace;
  std::uint64_t seed = 0;
  bool guard_enabled = true;
  std::optional<double> initial_tank_temp;  // defaults to the first setpoint
  double inflow_temp_noise = 0.0;  // uniform half-width, degC
  double inflow_rate_noise = 0.0;  // uniform half-width, L/s
  std::vector<ManualTrigger> manual_triggers;
  std::optional<SystemConfiguration> controller_override;

  std::int64_t tick_count() const { return static_cast<std::int64_t>(std::llround(duration / tick)); }
  double time_at(std::int64_t k) const { return static_cast<double>(k) * tick; }
  double start_temp() const { return initial_tank_temp.value_or(setpoint_schedule.at(0.0)); }

  void validate(const std::string& path = "scenario") const {
    if (id.empty()) throw ValidationError("empty id", path + ".id");
    if (!(tick > 0.0 && tick <= 0.5)) throw ValidationError("tick must lie in (0, 0.5]", path + ".tick");
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw ValidationError("duration must be >= 0", path + ".duration");
    setpoint_schedule.validate(path + ".setpoint_schedule");
    inflow_temp_trace.validate(path + ".inflow_temp_trace");
    inflow_rate_trace.validate(path + ".inflow_rate_trace");
    if (setpoint_schedule.interpolation != Interpolation::constant)
      throw ValidationError("setpoint schedule is a list of steps", path + ".setpoint_schedule");
    for (const auto& p : inflow_rate_trace.points)
      if (p.value < 0.0) throw ValidationError("inflow rate must be >= 0", path + ".inflow_rate_trace");
    if (!(inflow_temp_noise >= 0.0) || !(inflow_rate_noise >= 0.0))
      throw ValidationError("noise half-widths must be >= 0", path + ".noise");
    for (std::size_t i = 1; i < manual_triggers.size(); ++i)
      if (manual_triggers[i].time < manual_triggers[i - 1].time)
        throw ValidationError("manual triggers must be sorted by time", path + ".manual_triggers");
    if (initial_tank_temp && !std::isfinite(*initial_tank_temp))
      throw ValidationError("must be finite", path + ".initial_tank_temp");
    if (controller_override) controller_override->validate(path + ".controller_override");
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Produces the per-tick environment of a scenario. Noise draws come from a
/// generator seeded by the scenario seed, so the sequence is reproducible.
class EnvironmentSource {
 public:
  explicit EnvironmentSource(const Scenario& s) : scenario_(&s), rng_(s.seed) {}

  /// Sample for tick k. Must be called with k = 0, 1, 2, ... in order.
  EnvironmentSample sample(std::int64_t k, double outflow_temp) {
    const double t = scenario_->time_at(k);
    EnvironmentSample s;
    s.time = t;
    s.setpoint = scenario_->setpoint_schedule.at(t);
    s.inflow_temp = scenario_->inflow_temp_trace.at(t) + noise(scenario_->inflow_temp_noise);
    s.inflow_rate = std::max(0.0, scenario_->inflow_rate_trace.at(t) + noise(scenario_->inflow_rate_noise));
    s.outflow_temp = outflow_temp;
    return s;
  }

 private:
  double noise(double half_width) {
    if (half_width == 0.0) return 0.0;
    return std::uniform_real_distribution<double>(-half_width, half_width)(rng_);
  }

  const Scenario* scenario_;
  std::mt19937_64 rng_;
};

}  // namespace adaptsafe
