#pragma once

// Independent reference implementations. Nothing here calls into the
// library's arithmetic; tests compare the library against these.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------- plant

struct ReplayInput {
  double inflow_temp;
  double flow;   // L/s reaching the tank (0 with the valve closed)
  double power;  // W
};

/// Integrates dT/dt = (q/V)(Tin - T) + P/(rho c V) with `substeps` Euler
/// steps per tick, inputs held constant over each tick. Returns the tank
/// temperature after every tick.
inline std::vector<double> fine_replay(double t0, const std::vector<ReplayInput>& inputs, double volume, double density,
                                       double specific_heat, double tick, int substeps) {
  std::vector<double> out;
  out.reserve(inputs.size());
  const double h = tick / substeps;
  const double cap = volume * density * specific_heat;
  double T = t0;
  for (const auto& in : inputs) {
    for (int i = 0; i < substeps; ++i) T += h * ((in.flow / volume) * (in.inflow_temp - T) + in.power / cap);
    out.push_back(T);
  }
  return out;
}

/// Exact solution of the same ODE over one tick with constant inputs.
inline double exact_tick(double T, double inflow_temp, double flow, double power, double volume, double cap, double tick) {
  if (flow == 0.0) return T + tick * power / cap;
  const double a = flow / volume;
  const double eq = inflow_temp + power / (cap * a);
  return eq + (T - eq) * std::exp(-a * tick);
}

// ---------------------------------------------------------------- controllers

inline double pid_power(double kp, double ki, double kd, double integral, double prev_error, double e, double tick,
                        double max_power, double* integral_out) {
  double i_next = integral + e * tick;
  double u = kp * e + ki * i_next + kd * (e - prev_error) / tick;
  if (u > max_power || u < 0.0) {
    i_next = integral;
    u = kp * e + ki * integral + kd * (e - prev_error) / tick;
  }
  if (integral_out) *integral_out = i_next;
  return u < 0.0 ? 0.0 : (u > max_power ? max_power : u);
}

/// Straight-line network forward pass: hidden layers tanh, linear output,
/// logistic squashing, times max_power. Weight layout per layer: row-major
/// matrix (out x in) followed by biases.
inline double net_forward(const std::vector<int>& hidden, const std::vector<double>& w, const double* x5, double max_power) {
  std::vector<int> dims{5};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(1);
  std::vector<double> a(x5, x5 + 5);
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int in = dims[l], out = dims[l + 1];
    std::vector<double> z(static_cast<std::size_t>(out));
    for (int o = 0; o < out; ++o) {
      double s = w[off + static_cast<std::size_t>(in * out + o)];
      for (int i = 0; i < in; ++i) s += w[off + static_cast<std::size_t>(o * in + i)] * a[static_cast<std::size_t>(i)];
      z[static_cast<std::size_t>(o)] = s;
    }
    off += static_cast<std::size_t>(in * out + out);
    const bool last = l + 2 == dims.size();
    if (!last)
      for (auto& v : z) v = std::tanh(v);
    a = z;
  }
  return max_power / (1.0 + std::exp(-a[0]));
}

// ---------------------------------------------------------------- statistics

struct Stats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
  double min = 0.0;
  double max = 0.0;
};

inline Stats two_pass(const std::vector<double>& xs) {
  Stats s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(s.n);
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.sd = s.n > 1 ? std::sqrt(ss / static_cast<double>(s.n - 1)) : 0.0;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  return s;
}

/// Admission rule for one bounded axis: both confidence bounds and both
/// extremes inside [low, high].
inline bool admits(const Stats& s, double low, double high, double z) {
  const double half = z * s.sd / std::sqrt(static_cast<double>(s.n));
  return s.mean + half <= high && s.mean - half >= low && s.max <= high && s.min >= low;
}

// ---------------------------------------------------------------- SPI

/// Seconds with outflow >= level among the last `window_ticks` entries.
inline double spi_recount(const std::vector<double>& outflow, std::size_t end, std::size_t window_ticks, double level,
                          double tick, std::size_t since = 0) {
  const std::size_t lo = std::max(since, end > window_ticks ? end - window_ticks : std::size_t{0});
  std::size_t n = 0;
  for (std::size_t i = lo; i < end; ++i)
    if (outflow[i] >= level) ++n;
  return static_cast<double>(n) * tick;
}

// ---------------------------------------------------------------- taxonomy

struct Desc {
  bool affects, independence, enumerated;
  int safety;  // 0 none, 1 unconditional, 2 domain-conditional
  bool constraints, runtime, in_repo;
};

/// Types whose full criteria set the descriptor meets, written from the
/// criteria table row by row.
inline std::vector<std::string> matching_types(const Desc& d) {
  std::vector<std::string> out;
  // T0.C1 adaptation does not affect safety-critical functions
  if (!d.affects) out.push_back("T0");
  // TI.C1 affects, TI.C2 options at design time, TI.C3 shown safe at design time
  if (d.affects && d.enumerated && d.safety == 1) out.push_back("TI");
  // TII.C1..C4: affects, design-time options, safe subject to domain, constraints imposed
  if (d.affects && d.enumerated && d.safety == 2 && d.constraints) out.push_back("TII");
  // TIII.C1..C4: affects, options not enumerable, run-time assessment, case in knowledge
  if (d.affects && !d.enumerated && d.runtime && d.in_repo) out.push_back("TIII");
  return out;
}

inline const std::vector<std::string>& table_obligations(const std::string& type) {
  static const std::vector<std::string> t0{"T0.B1", "T0.B2"};
  static const std::vector<std::string> t1{"TI.B1", "TI.B2", "TI.B3", "TI.B4"};
  static const std::vector<std::string> t2{"TII.B1", "TII.B2", "TII.B3", "TII.B4", "TII.B5"};
  static const std::vector<std::string> t3{"TIII.B1", "TIII.B2", "TIII.B3", "TIII.B4", "TIII.B5", "TIII.B6", "TIII.B7"};
  if (type == "T0") return t0;
  if (type == "TI") return t1;
  if (type == "TII") return t2;
  return t3;
}

// ---------------------------------------------------------------- misc

/// Deterministic 64-bit generator for test inputs (xorshift64*).
struct Rng {
  unsigned long long s;
  explicit Rng(unsigned long long seed) : s(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  unsigned long long next() {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return s * 2685821657736338717ULL;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<unsigned long long>(hi - lo + 1)); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Splits one CSV line on commas (no quoting in traces).
inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace oracle
