#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adaptsafe/errors.hpp"
#include "adaptsafe/taxonomy_table.hpp"

namespace adaptsafe {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Operational domains
// ---------------------------------------------------------------------------

/// Closed interval; an infinite end means that side is unbounded.
struct Interval {
  double low = -kInf;
  double high = kInf;

  bool bounded_low() const noexcept { return std::isfinite(low); }
  bool bounded_high() const noexcept { return std::isfinite(high); }
  bool unbounded() const noexcept { return !bounded_low() && !bounded_high(); }
  bool contains(double v) const noexcept { return v >= low && v <= high; }
  bool contains(const Interval& inner) const noexcept { return inner.low >= low && inner.high <= high; }

  void validate(const std::string& path) const {
    if (std::isnan(low) || std::isnan(high)) throw ValidationError("interval bound is NaN", path);
    if (low > high) throw ValidationError("interval has low > high", path);
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Environment variable names an operational domain may constrain.
inline constexpr std::array<std::string_view, 2> kEnvironmentVariables{"inflow_temp", "inflow_rate"};

inline bool is_environment_variable(std::string_view name) {
  for (auto v : kEnvironmentVariables)
    if (v == name) return true;
  return false;
}

/// Axis-aligned box over named environment variables. A missing axis is
/// unbounded.
struct OperationalDomain {
  std::map<std::string, Interval> bounds;

  static OperationalDomain unbounded() { return {}; }

  Interval axis(const std::string& name) const {
    auto it = bounds.find(name);
    return it == bounds.end() ? Interval{} : it->second;
  }

  void validate(const std::string& path = "domain") const {
    for (const auto& [name, iv] : bounds) {
      if (!is_environment_variable(name))
        throw ValidationError("unknown environment variable '" + name + "'", path + "." + name);
      iv.validate(path + "." + name);
    }
  }

  /// Drops axes that carry no constraint.
  OperationalDomain normalized() const {
    OperationalDomain out;
    for (const auto& [name, iv] : bounds)
      if (!iv.unbounded()) out.bounds.emplace(name, iv);
    return out;
  }

  friend bool operator==(const OperationalDomain&, const OperationalDomain&) = default;
};

/// True iff every axis bounded in `outer` contains the matching axis of
/// `inner`. Axes bounded only in `inner` never break containment.
inline bool domain_subset(const OperationalDomain& inner, const OperationalDomain& outer) {
  for (const auto& [name, iv] : inner.bounds) iv.validate("inner." + name);
  for (const auto& [name, iv] : outer.bounds) {
    iv.validate("outer." + name);
    if (!iv.contains(inner.axis(name))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Environment samples
// ---------------------------------------------------------------------------

struct EnvironmentSample {
  double time = 0.0;          // s
  double inflow_temp = 0.0;   // degC
  double inflow_rate = 0.0;   // L/s
  double setpoint = 0.0;      // degC
  double outflow_temp = 0.0;  // degC

  double variable(std::string_view name) const {
    if (name == "inflow_temp") return inflow_temp;
    if (name == "inflow_rate") return inflow_rate;
    throw ValidationError("unknown environment variable '" + std::string(name) + "'");
  }

  friend bool operator==(const EnvironmentSample&, const EnvironmentSample&) = default;
};

inline bool domain_contains(const OperationalDomain& d, const EnvironmentSample& s) {
  for (const auto& [name, iv] : d.bounds)
    if (!iv.contains(s.variable(name))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Configurations and adaptation vocabulary
// ---------------------------------------------------------------------------

enum class ControllerKind { pid, parametric_net };

inline std::string_view to_string(ControllerKind k) {
  return k == ControllerKind::pid ? "pid" : "parametric-net";
}

using ParameterMap = std::map<std::string, double>;

struct SystemConfiguration {
  ControllerKind controller_kind = ControllerKind::pid;
  ParameterMap parameters;

  double at(const std::string& name) const {
    auto it = parameters.find(name);
    if (it == parameters.end()) throw ValidationError("missing parameter '" + name + "'");
    return it->second;
  }

  void validate(const std::string& path = "configuration") const {
    for (const auto& [name, v] : parameters)
      if (!std::isfinite(v)) throw ValidationError("parameter is not finite", path + ".parameters." + name);
  }

  friend bool operator==(const SystemConfiguration&, const SystemConfiguration&) = default;
};

/// Either `low <= target <= high`, or the one-guard conditional form
/// `low < target < high if guard > threshold`.
struct ParameterConstraint {
  enum class Kind { interval, conditional };
  struct Guard {
    std::string parameter;
    double threshold = 0.0;
    friend bool operator==(const Guard&, const Guard&) = default;
  };

  Kind kind = Kind::interval;
  std::string target;
  double low = -kInf;
  double high = kInf;
  std::optional<Guard> condition;

  void validate(const std::string& path) const {
    if (std::isnan(low) || std::isnan(high)) throw ValidationError("bound is NaN", path);
    if (low > high) throw ValidationError("low > high", path);
    if (kind == Kind::conditional && !condition) throw ValidationError("conditional constraint without condition", path);
    if (kind == Kind::interval && condition) throw ValidationError("interval constraint carries a condition", path);
  }

  bool holds(const ParameterMap& assignment) const {
    const double v = assignment.at(target);
    if (kind == Kind::interval) return v >= low && v <= high;
    if (!(assignment.at(condition->parameter) > condition->threshold)) return true;
    return v > low && v < high;
  }

  friend bool operator==(const ParameterConstraint&, const ParameterConstraint&) = default;
};

struct AdaptationOption {
  std::string id;
  std::string model_id;
  ParameterMap assignment;
  std::optional<OperationalDomain> domain;
  std::vector<std::string> design_time_evidence;
  /// Rise time recorded by design-time simulation; drives option selection.
  std::optional<double> design_rise_time;

  friend bool operator==(const AdaptationOption&, const AdaptationOption&) = default;
};

struct AdaptationModel {
  std::string id;
  ControllerKind controller_kind = ControllerKind::pid;
  std::vector<std::string> parameters;
  std::vector<ParameterConstraint> constraints;
  AdaptationDescriptor descriptor;
  std::optional<std::vector<AdaptationOption>> options;

  const AdaptationOption* find_option(std::string_view option_id) const {
    if (!options) return nullptr;
    for (const auto& o : *options)
      if (o.id == option_id) return &o;
    return nullptr;
  }

  bool has_parameter(std::string_view name) const {
    for (const auto& p : parameters)
      if (p == name) return true;
    return false;
  }

  void validate(const std::string& path) const;

  friend bool operator==(const AdaptationModel&, const AdaptationModel&) = default;
};

/// Checks an option against its model: exact parameter coverage plus every
/// constraint. Throws ValidationError naming any parameter the model lacks.
inline bool option_satisfies_model(const AdaptationOption& option, const AdaptationModel& model) {
  if (option.model_id != model.id)
    throw ValidationError("option '" + option.id + "' belongs to model '" + option.model_id + "', not '" + model.id + "'");
  std::string unknown;
  for (const auto& [name, value] : option.assignment) {
    if (!model.has_parameter(name)) unknown += (unknown.empty() ? "" : ", ") + name;
  }
  if (!unknown.empty())
    throw ValidationError("unknown parameter(s) in assignment: " + unknown, "options." + option.id + ".assignment");
  for (const auto& p : model.parameters)
    if (!option.assignment.contains(p)) return false;
  for (const auto& [name, value] : option.assignment)
    if (!std::isfinite(value)) return false;
  for (const auto& c : model.constraints)
    if (!c.holds(option.assignment)) return false;
  return true;
}

inline void AdaptationModel::validate(const std::string& path) const {
  if (id.empty()) throw ValidationError("empty id", path + ".id");
  descriptor.validate(path + ".descriptor");
  for (std::size_t i = 0; i < parameters.size(); ++i)
    for (std::size_t j = i + 1; j < parameters.size(); ++j)
      if (parameters[i] == parameters[j])
        throw ValidationError("duplicate parameter '" + parameters[i] + "'", path + ".parameters");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& c = constraints[i];
    const auto cpath = path + ".constraints[" + std::to_string(i) + "]";
    c.validate(cpath);
    if (!has_parameter(c.target)) throw ValidationError("constraint targets unlisted parameter '" + c.target + "'", cpath);
    if (c.condition && !has_parameter(c.condition->parameter))
      throw ValidationError("guard names unlisted parameter '" + c.condition->parameter + "'", cpath);
  }
  const bool enumerated = descriptor.options_enumerated_at_design_time;
  if (enumerated && (!options || options->empty()))
    throw ValidationError("descriptor declares enumerated options but none are listed", path + ".options");
  if (!enumerated && options) throw ValidationError("options listed for a non-enumerable model", path + ".options");
  if (!options) return;
  for (std::size_t i = 0; i < options->size(); ++i) {
    const auto& o = (*options)[i];
    const auto opath = path + ".options[" + std::to_string(i) + "]";
    if (o.id.empty()) throw ValidationError("empty option id", opath);
    for (std::size_t j = 0; j < i; ++j)
      if ((*options)[j].id == o.id) throw ValidationError("duplicate option id '" + o.id + "'", opath);
    if (o.model_id != id) throw ValidationError("model_id '" + o.model_id + "' does not match '" + id + "'", opath);
    if (o.domain) o.domain->validate(opath + ".domain");
    if (controller_kind == ControllerKind::pid && !option_satisfies_model(o, *this))
      throw ValidationError("assignment violates the model's parameters or constraints", opath + ".assignment");
  }
}

enum class PostStep { update_case_constraints, attach_assessment_evidence, reset_spi };

inline std::string_view to_string(PostStep s) {
  switch (s) {
    case PostStep::update_case_constraints: return "update-case-constraints";
    case PostStep::attach_assessment_evidence: return "attach-assessment-evidence";
    case PostStep::reset_spi: return "reset-spi";
  }
  return "?";
}

/// Ordered parameter writes realizing one option, plus bookkeeping steps.
struct AdaptationAction {
  std::string option_id;
  std::vector<std::pair<std::string, double>> steps;
  std::vector<PostStep> post_steps;

  /// The configuration the plant sees once every step has run. Only the
  /// written parameters survive, so the result equals the option's assignment.
  SystemConfiguration apply(ControllerKind kind) const {
    SystemConfiguration out{kind, {}};
    for (const auto& [name, value] : steps) out.parameters[name] = value;
    return out;
  }

  friend bool operator==(const AdaptationAction&, const AdaptationAction&) = default;
};

inline AdaptationAction make_action(std::string option_id, const ParameterMap& assignment,
                                    std::vector<PostStep> post_steps) {
  AdaptationAction a{std::move(option_id), {}, std::move(post_steps)};
  a.steps.assign(assignment.begin(), assignment.end());
  return a;
}

inline std::vector<PostStep> post_steps_for(AdaptationType type) {
  switch (type) {
    case AdaptationType::t0:
    case AdaptationType::t1: return {};
    case AdaptationType::t2: return {PostStep::update_case_constraints, PostStep::attach_assessment_evidence};
    case AdaptationType::t3: return {PostStep::attach_assessment_evidence, PostStep::reset_spi};
  }
  return {};
}

}  // namespace adaptsafe
