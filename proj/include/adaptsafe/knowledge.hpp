#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "adaptsafe/model.hpp"
#include "adaptsafe/ring_buffer.hpp"
#include "adaptsafe/safety_case.hpp"
#include "adaptsafe/spi.hpp"

namespace adaptsafe {

/// Shared state of the managing system. Mutated only by the simulation
/// loop's owner.
struct KnowledgeRepository {
  SystemConfiguration current_config;
  RingBuffer<EnvironmentSample> sample_history;
  SafetyCase safety_case;
  std::vector<SpiWindow> spi_windows;
  std::string active_option_id;
  bool guard_enabled = false;
  bool guard_tripped = false;

  /// One hour of samples at `tick`, plus one.
  static std::size_t history_capacity(double tick) {
    return static_cast<std::size_t>(std::ceil(3600.0 / tick)) + 1;
  }

  const EnvironmentSample* latest() const { return sample_history.empty() ? nullptr : &sample_history.back(); }

  /// Samples with time > now - span, oldest first.
  std::vector<EnvironmentSample> recent(double now, double span) const {
    std::size_t first = sample_history.size();
    while (first > 0 && sample_history[first - 1].time > now - span) --first;
    std::vector<EnvironmentSample> out;
    out.reserve(sample_history.size() - first);
    for (std::size_t i = first; i < sample_history.size(); ++i) out.push_back(sample_history[i]);
    return out;
  }

  /// Oldest retained sample time, or now when empty.
  double history_start(double now) const { return sample_history.empty() ? now : sample_history.front().time; }

  void reset_spi() {
    for (auto& w : spi_windows) w.reset();
  }
};

inline KnowledgeRepository make_repository(SystemConfiguration config, std::string active_option_id, SafetyCase safety_case,
                                           const std::vector<SpiConfig>& spis, double tick) {
  KnowledgeRepository repo{std::move(config),
                           RingBuffer<EnvironmentSample>(KnowledgeRepository::history_capacity(tick)),
                           std::move(safety_case),
                           {},
                           std::move(active_option_id)};
  for (const auto& s : spis) repo.spi_windows.emplace_back(s, tick);
  return repo;
}

}  // namespace adaptsafe
