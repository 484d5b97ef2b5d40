#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "adaptsafe/errors.hpp"
#include "adaptsafe/model.hpp"
#include "adaptsafe/plant.hpp"
#include "adaptsafe/ring_buffer.hpp"

namespace adaptsafe {

/// Which temperature scale "within N% of the limit" is measured on.
enum class MarginBase { celsius, kelvin };

/// True when the outflow is at or above `margin_fraction` below the hazard
/// limit. The default threshold is 0.95 * 90 = 85.5 degC, inclusive.
struct NearLimitPredicate {
  double hazard_limit = kHazardTemp;  // degC
  double margin_fraction = 0.05;
  MarginBase base = MarginBase::celsius;

  double level() const noexcept {
    if (base == MarginBase::celsius) return hazard_limit * (1.0 - margin_fraction);
    constexpr double k0 = 273.15;
    return (hazard_limit + k0) * (1.0 - margin_fraction) - k0;
  }

  bool operator()(const EnvironmentSample& s) const noexcept { return s.outflow_temp >= level(); }

  friend bool operator==(const NearLimitPredicate&, const NearLimitPredicate&) = default;
};

struct SpiConfig {
  std::string id = "near-limit";
  NearLimitPredicate predicate;
  double window = 3600.0;   // s
  double threshold = 60.0;  // s

  void validate(const std::string& path = "spi") const {
    if (id.empty()) throw ValidationError("empty id", path + ".id");
    if (!(window > 0.0)) throw ValidationError("window must be > 0", path + ".window");
    if (!(threshold >= 0.0) || threshold > window) throw ValidationError("threshold must lie in [0, window]", path + ".threshold");
    if (!(predicate.margin_fraction >= 0.0 && predicate.margin_fraction < 1.0))
      throw ValidationError("margin_fraction must lie in [0, 1)", path + ".margin_fraction");
  }

  friend bool operator==(const SpiConfig&, const SpiConfig&) = default;
};

/// Sliding-window duration counter. Holds one boolean per tick for the last
/// `window` seconds and a running count of the true entries, so each update
/// is constant work.
class SpiWindow {
 public:
  SpiWindow(SpiConfig config, double tick)
      : config_(std::move(config)),
        tick_(tick),
        ring_(static_cast<std::size_t>(std::llround(config_.window / tick))),
        threshold_ticks_(static_cast<std::size_t>(std::llround(config_.threshold / tick))) {
    config_.validate();
  }

  const SpiConfig& config() const noexcept { return config_; }
  const std::string& id() const noexcept { return config_.id; }
  double tick() const noexcept { return tick_; }
  std::size_t capacity() const noexcept { return ring_.capacity(); }
  std::size_t retained() const noexcept { return ring_.size(); }
  std::size_t true_ticks() const noexcept { return true_count_; }
  double accumulated() const noexcept { return static_cast<double>(true_count_) * tick_; }

  /// Strictly more near-limit time than the threshold within the window.
  bool breached() const noexcept { return true_count_ > threshold_ticks_; }

  /// Elementary ring operations performed since construction.
  std::uint64_t work() const noexcept { return work_; }

  bool entry(std::size_t i) const { return ring_[i] != 0; }

  void update(const EnvironmentSample& s) {
    const bool hit = config_.predicate(s);
    ++work_;
    if (auto evicted = ring_.push_back(hit ? 1 : 0)) {
      ++work_;
      if (*evicted) --true_count_;
    }
    if (hit) ++true_count_;
  }

  void reset() noexcept {
    ring_.clear();
    true_count_ = 0;
  }

  friend bool operator==(const SpiWindow& a, const SpiWindow& b) {
    return a.config_ == b.config_ && a.tick_ == b.tick_ && a.ring_ == b.ring_ && a.true_count_ == b.true_count_;
  }

 private:
  SpiConfig config_;
  double tick_;
  RingBuffer<unsigned char> ring_;  // not vector<bool>: slots are returned by reference
  std::size_t threshold_ticks_;
  std::size_t true_count_ = 0;
  std::uint64_t work_ = 0;
};

inline SpiWindow spi_update(SpiWindow w, const EnvironmentSample& s) {
  w.update(s);
  return w;
}

inline bool spi_breached(const SpiWindow& w) { return w.breached(); }

}  // namespace adaptsafe
