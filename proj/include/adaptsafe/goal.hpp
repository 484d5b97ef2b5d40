#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adaptsafe/errors.hpp"
#include "adaptsafe/model.hpp"

namespace adaptsafe {

/// After a setpoint increase the outflow must enter
/// [setpoint - settle_band, setpoint + settle_band] within rise_time_limit.
struct AdaptationGoal {
  double rise_time_limit = 60.0;  // s
  double settle_band = 1.0;       // degC

  void validate(const std::string& path = "goal") const {
    if (!(rise_time_limit > 0.0)) throw ValidationError("rise_time_limit must be > 0", path + ".rise_time_limit");
    if (!(settle_band > 0.0)) throw ValidationError("settle_band must be > 0", path + ".settle_band");
  }

  bool late(double elapsed) const noexcept { return elapsed > rise_time_limit + 1e-9; }
  bool in_band(const EnvironmentSample& s) const noexcept { return std::abs(s.outflow_temp - s.setpoint) <= settle_band; }

  friend bool operator==(const AdaptationGoal&, const AdaptationGoal&) = default;
};

struct GoalAnalysis {
  bool violation = false;
  std::optional<double> rise_time;
};

/// Evaluates the most recent setpoint increase in `history`. Without an
/// increase there is nothing to judge. A band that is never entered counts
/// as a violation only once the horizon is longer than the limit.
inline GoalAnalysis analyze_goal(std::span<const EnvironmentSample> history, const AdaptationGoal& goal) {
  std::optional<std::size_t> event;
  for (std::size_t i = 1; i < history.size(); ++i)
    if (history[i].setpoint > history[i - 1].setpoint) event = i;
  if (!event) return {};
  const auto& start = history[*event];
  for (std::size_t j = *event; j < history.size(); ++j) {
    if (history[j].setpoint != start.setpoint) break;
    if (goal.in_band(history[j])) {
      const double rise = history[j].time - start.time;
      return {goal.late(rise), rise};
    }
  }
  return {goal.late(history.back().time - start.time), std::nullopt};
}

struct RiseRecord {
  double time = 0.0;  // of the setpoint increase
  double setpoint = 0.0;
  std::optional<double> rise_time;
  bool violation = false;

  friend bool operator==(const RiseRecord&, const RiseRecord&) = default;
};

/// Incremental form of analyze_goal for the simulation loop: one record per
/// setpoint increase, and a single violation signal per increase.
class GoalTracker {
 public:
  explicit GoalTracker(AdaptationGoal goal) : goal_(goal) {}

  /// Returns true on the tick the current increase first violates the goal.
  bool observe(const EnvironmentSample& s) {
    if (last_setpoint_ && s.setpoint != *last_setpoint_) {
      close(s.time);
      if (s.setpoint > *last_setpoint_) pending_ = Pending{s.time, s.setpoint, false};
    }
    last_setpoint_ = s.setpoint;
    if (!pending_) return false;

    const double elapsed = s.time - pending_->time;
    if (goal_.in_band(s)) {
      const bool late = goal_.late(elapsed);
      const bool fire = late && !pending_->fired;
      records_.push_back({pending_->time, pending_->setpoint, elapsed, late});
      pending_.reset();
      return fire;
    }
    if (goal_.late(elapsed) && !pending_->fired) {
      pending_->fired = true;
      return true;
    }
    return false;
  }

  /// Closes any open increase at the end of the horizon.
  void finish(double end_time) { close(end_time); }

  const std::vector<RiseRecord>& records() const noexcept { return records_; }
  const AdaptationGoal& goal() const noexcept { return goal_; }

 private:
  struct Pending {
    double time;
    double setpoint;
    bool fired;
  };

  void close(double now) {
    if (!pending_) return;
    records_.push_back({pending_->time, pending_->setpoint, std::nullopt, pending_->fired || goal_.late(now - pending_->time)});
    pending_.reset();
  }

  AdaptationGoal goal_;
  std::optional<double> last_setpoint_;
  std::optional<Pending> pending_;
  std::vector<RiseRecord> records_;
};

}  // namespace adaptsafe
