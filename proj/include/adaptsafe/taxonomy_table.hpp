#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adaptsafe/errors.hpp"

namespace adaptsafe {

enum class AdaptationType { t0, t1, t2, t3 };

inline std::string_view to_string(AdaptationType t) {
  switch (t) {
    case AdaptationType::t0: return "T0";
    case AdaptationType::t1: return "TI";
    case AdaptationType::t2: return "TII";
    case AdaptationType::t3: return "TIII";
  }
  return "?";
}

inline std::optional<AdaptationType> adaptation_type_from_string(std::string_view s) {
  if (s == "T0") return AdaptationType::t0;
  if (s == "TI") return AdaptationType::t1;
  if (s == "TII") return AdaptationType::t2;
  if (s == "TIII") return AdaptationType::t3;
  return std::nullopt;
}

enum class DesignTimeSafety { none, unconditional, domain_conditional };

inline std::string_view to_string(DesignTimeSafety s) {
  switch (s) {
    case DesignTimeSafety::none: return "none";
    case DesignTimeSafety::unconditional: return "unconditional";
    case DesignTimeSafety::domain_conditional: return "domain-conditional";
  }
  return "?";
}

/// Structural facts about one adaptation, as declared by its designers.
struct AdaptationDescriptor {
  bool affects_safety_critical = false;
  bool independence_argued = false;
  bool options_enumerated_at_design_time = false;
  DesignTimeSafety design_time_safety = DesignTimeSafety::none;
  bool domain_constraints_declared = false;
  bool runtime_assessment_declared = false;
  bool case_in_knowledge_repo = false;

  bool well_formed() const {
    return design_time_safety == DesignTimeSafety::none || options_enumerated_at_design_time;
  }

  void validate(const std::string& path = "descriptor") const {
    if (!well_formed())
      throw ValidationError("design_time_safety requires options_enumerated_at_design_time", path);
  }

  friend bool operator==(const AdaptationDescriptor&, const AdaptationDescriptor&) = default;
};

/// Where an obligation's argument has to live in the safety case.
enum class ObligationPlacement { any, static_only, dynamic_only };

struct ObligationInfo {
  std::string_view id;
  AdaptationType type;
  ObligationPlacement placement;
  std::string_view text;
};

// Table order matters: obligations_for() returns them in this order.
inline constexpr std::array<ObligationInfo, 18> kObligations{{
    {"T0.B1", AdaptationType::t0, ObligationPlacement::any,
     "Argue that the adaptation does not interfere with the safety-critical functions."},
    {"T0.B2", AdaptationType::t0, ObligationPlacement::static_only,
     "The safety case is defined at design-time and does not change at run-time."},
    {"TI.B1", AdaptationType::t1, ObligationPlacement::any,
     "Argue that the managing system only executes adaptations defined at design-time."},
    {"TI.B2", AdaptationType::t1, ObligationPlacement::any,
     "Argue that each adaptation option is safe within the entire operational domain."},
    {"TI.B3", AdaptationType::t1, ObligationPlacement::static_only,
     "Statically argue that the managing system safely executes the adaptation action."},
    {"TI.B4", AdaptationType::t1, ObligationPlacement::static_only,
     "The safety case is defined at design-time and does not change at run-time."},
    {"TII.B1", AdaptationType::t2, ObligationPlacement::static_only,
     "Statically argue that the managing system only executes adaptations defined at design-time."},
    {"TII.B2", AdaptationType::t2, ObligationPlacement::static_only,
     "Statically argue that the options are safe subject to operational-domain assumptions."},
    {"TII.B3", AdaptationType::t2, ObligationPlacement::static_only,
     "Statically argue that the managing system safely executes the adaptation action."},
    {"TII.B4", AdaptationType::t2, ObligationPlacement::dynamic_only,
     "Dynamically argue that the current operational domain satisfies the applied option's constraints."},
    {"TII.B5", AdaptationType::t2, ObligationPlacement::dynamic_only,
     "Dynamically argue that violations of the current constraints are safely handled or not possible."},
    {"TIII.B1", AdaptationType::t3, ObligationPlacement::static_only,
     "Statically argue that the managing system safely executes the adaptation action."},
    {"TIII.B2", AdaptationType::t3, ObligationPlacement::static_only,
     "Statically argue that the adaptation is reasonably safe on design-time evidence."},
    {"TIII.B3", AdaptationType::t3, ObligationPlacement::static_only,
     "Statically argue that the run-time safety assessment procedures are appropriate."},
    {"TIII.B4", AdaptationType::t3, ObligationPlacement::static_only,
     "Statically argue that the managing system will not apply an option it determines to be unsafe."},
    {"TIII.B5", AdaptationType::t3, ObligationPlacement::static_only,
     "Statically argue that the managing system detects and responds to SPI changes."},
    {"TIII.B6", AdaptationType::t3, ObligationPlacement::dynamic_only,
     "Dynamically argue, from run-time assessment evidence, that the selected option is safe."},
    {"TIII.B7", AdaptationType::t3, ObligationPlacement::dynamic_only,
     "Dynamically argue, from real-time SPI data, that operation continues to be safe."},
}};

inline const ObligationInfo* find_obligation(std::string_view id) {
  for (const auto& o : kObligations)
    if (o.id == id) return &o;
  return nullptr;
}

/// Criteria ids decidable from a descriptor alone, per type.
inline std::vector<std::string> structural_criteria(AdaptationType t) {
  switch (t) {
    case AdaptationType::t0: return {"T0.C1"};
    case AdaptationType::t1: return {"TI.C1", "TI.C2", "TI.C3"};
    case AdaptationType::t2: return {"TII.C1", "TII.C2", "TII.C3", "TII.C4"};
    case AdaptationType::t3: return {"TIII.C1", "TIII.C2", "TIII.C3", "TIII.C4"};
  }
  return {};
}

}  // namespace adaptsafe
