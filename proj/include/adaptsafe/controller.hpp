#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "adaptsafe/errors.hpp"
#include "adaptsafe/model.hpp"

namespace adaptsafe {

// ---------------------------------------------------------------------------
// PID
// ---------------------------------------------------------------------------

struct PidConfig {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;

  static PidConfig from_config(const SystemConfiguration& c) {
    if (c.controller_kind != ControllerKind::pid) throw ValidationError("configuration is not a PID configuration");
    return {c.at("kp"), c.at("ki"), c.at("kd")};
  }

  SystemConfiguration to_config() const { return {ControllerKind::pid, {{"kp", kp}, {"ki", ki}, {"kd", kd}}}; }

  friend bool operator==(const PidConfig&, const PidConfig&) = default;
};

struct PidState {
  double integral = 0.0;    // degC*s
  double prev_error = 0.0;  // degC

  friend bool operator==(const PidState&, const PidState&) = default;
};

enum class AntiWindup { clamp, off };

struct PidOutput {
  double power = 0.0;  // W
  PidState state;
  bool saturated = false;
};

/// Positional PID with derivative on error. With AntiWindup::clamp the
/// integral does not advance on a tick whose output saturates.
inline PidOutput pid_compute(const PidConfig& cfg, const PidState& st, double setpoint, double measured,
                             double tick, double max_power, AntiWindup anti_windup = AntiWindup::clamp) {
  const double e = setpoint - measured;
  const double derivative = (e - st.prev_error) / tick;
  const double advanced = st.integral + e * tick;

  const double raw = cfg.kp * e + cfg.ki * advanced + cfg.kd * derivative;
  const bool saturated = raw > max_power || raw < 0.0;

  PidOutput out;
  out.saturated = saturated;
  out.state.prev_error = e;
  if (saturated && anti_windup == AntiWindup::clamp) {
    out.state.integral = st.integral;
    out.power = std::clamp(cfg.kp * e + cfg.ki * st.integral + cfg.kd * derivative, 0.0, max_power);
  } else {
    out.state.integral = advanced;
    out.power = std::clamp(raw, 0.0, max_power);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parametric network controller
// ---------------------------------------------------------------------------

/// Input order: setpoint, outflow_temp, inflow_temp, inflow_rate, d(outflow_temp)/dt.
inline constexpr std::size_t kNetInputs = 5;
inline constexpr int kMaxLayerSize = 16;
inline constexpr int kMaxHiddenLayers = 2;

enum class Activation { tanh };

struct NetHyper {
  std::vector<int> layer_sizes;  // hidden layers only
  Activation activation = Activation::tanh;

  friend bool operator==(const NetHyper&, const NetHyper&) = default;
};

struct NetControllerSpec {
  NetHyper hyper;
  std::vector<double> weights;

  friend bool operator==(const NetControllerSpec&, const NetControllerSpec&) = default;
};

/// Layer widths from input to output, e.g. {5, 4, 1}.
inline std::vector<std::size_t> net_topology(const NetHyper& h) {
  std::vector<std::size_t> dims{kNetInputs};
  for (int s : h.layer_sizes) dims.push_back(static_cast<std::size_t>(s));
  dims.push_back(1);
  return dims;
}

/// Each layer stores its weight matrix row-major (out x in), then its biases.
inline std::size_t net_weight_count(const NetHyper& h) {
  const auto dims = net_topology(h);
  std::size_t n = 0;
  for (std::size_t l = 1; l < dims.size(); ++l) n += dims[l] * dims[l - 1] + dims[l];
  return n;
}

inline void validate_net(const NetControllerSpec& spec, const std::string& path = "net") {
  const auto& sizes = spec.hyper.layer_sizes;
  if (sizes.empty() || sizes.size() > static_cast<std::size_t>(kMaxHiddenLayers))
    throw ValidationError("hidden layer count must be 1 or 2", path + ".hyper.layer_sizes");
  for (int s : sizes)
    if (s < 1 || s > kMaxLayerSize) throw ValidationError("layer size outside [1,16]", path + ".hyper.layer_sizes");
  const auto expected = net_weight_count(spec.hyper);
  if (spec.weights.size() != expected)
    throw ValidationError("expected " + std::to_string(expected) + " weights, got " + std::to_string(spec.weights.size()),
                          path + ".weights");
}

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double net_compute(const NetControllerSpec& spec, std::span<const double, kNetInputs> inputs, double max_power) {
  validate_net(spec);
  const auto dims = net_topology(spec.hyper);
  std::vector<double> act(inputs.begin(), inputs.end());
  std::vector<double> next;
  std::size_t w = 0;
  for (std::size_t l = 1; l < dims.size(); ++l) {
    const std::size_t in = dims[l - 1];
    const std::size_t out = dims[l];
    const std::size_t bias_at = w + in * out;
    next.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double z = spec.weights[bias_at + o];
      for (std::size_t i = 0; i < in; ++i) z += spec.weights[w + o * in + i] * act[i];
      next[o] = (l + 1 == dims.size()) ? z : std::tanh(z);
    }
    w = bias_at + out;
    act.swap(next);
  }
  return logistic(act[0]) * max_power;
}

namespace detail {
inline std::string weight_key(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "w%05zu", i);
  return buf;
}
}  // namespace detail

/// Flattens a network into named parameters so it can live in a
/// SystemConfiguration: layer_count, layer_size_<i>, activation, w00000...
inline SystemConfiguration to_config(const NetControllerSpec& spec) {
  SystemConfiguration c{ControllerKind::parametric_net, {}};
  c.parameters["layer_count"] = static_cast<double>(spec.hyper.layer_sizes.size());
  for (std::size_t i = 0; i < spec.hyper.layer_sizes.size(); ++i)
    c.parameters["layer_size_" + std::to_string(i)] = spec.hyper.layer_sizes[i];
  c.parameters["activation"] = 0.0;
  for (std::size_t i = 0; i < spec.weights.size(); ++i) c.parameters[detail::weight_key(i)] = spec.weights[i];
  return c;
}

inline NetControllerSpec net_from_config(const SystemConfiguration& c) {
  if (c.controller_kind != ControllerKind::parametric_net)
    throw ValidationError("configuration is not a parametric-net configuration");
  NetControllerSpec spec;
  const double layers = c.at("layer_count");
  if (layers != std::floor(layers) || layers < 1 || layers > kMaxHiddenLayers)
    throw ValidationError("layer_count must be 1 or 2", "configuration.parameters.layer_count");
  for (int i = 0; i < static_cast<int>(layers); ++i) {
    const double s = c.at("layer_size_" + std::to_string(i));
    if (s != std::floor(s)) throw ValidationError("layer size must be integral");
    spec.hyper.layer_sizes.push_back(static_cast<int>(s));
  }
  if (c.parameters.contains("activation") && c.at("activation") != 0.0)
    throw ValidationError("unsupported activation", "configuration.parameters.activation");
  const auto n = net_weight_count(spec.hyper);
  spec.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) spec.weights[i] = c.at(detail::weight_key(i));
  validate_net(spec);
  return spec;
}

// ---------------------------------------------------------------------------
// Runtime controller
// ---------------------------------------------------------------------------

/// A configured control law plus its transient state.
class Controller {
 public:
  explicit Controller(const SystemConfiguration& config) {
    config.validate();
    if (config.controller_kind == ControllerKind::pid)
      law_ = Pid{PidConfig::from_config(config), {}};
    else
      law_ = Net{net_from_config(config), 0.0, false};
  }

  /// Power command for one tick; may be non-finite for a broken network.
  double compute(const EnvironmentSample& s, double tick, double max_power) {
    if (auto* pid = std::get_if<Pid>(&law_)) {
      auto out = pid_compute(pid->config, pid->state, s.setpoint, s.outflow_temp, tick, max_power);
      pid->state = out.state;
      return out.power;
    }
    auto& net = std::get<Net>(law_);
    const double slope = net.has_prev ? (s.outflow_temp - net.prev_outflow) / tick : 0.0;
    net.prev_outflow = s.outflow_temp;
    net.has_prev = true;
    const std::array<double, kNetInputs> in{s.setpoint, s.outflow_temp, s.inflow_temp, s.inflow_rate, slope};
    return net_compute(net.spec, in, max_power);
  }

  void reset() {
    if (auto* pid = std::get_if<Pid>(&law_))
      pid->state = {};
    else
      std::get<Net>(law_).has_prev = false;
  }

 private:
  struct Pid {
    PidConfig config;
    PidState state;
  };
  struct Net {
    NetControllerSpec spec;
    double prev_outflow;
    bool has_prev;
  };
  std::variant<Pid, Net> law_;
};

}  // namespace adaptsafe
