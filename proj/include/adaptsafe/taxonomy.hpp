#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adaptsafe/errors.hpp"
#include "adaptsafe/knowledge.hpp"
#include "adaptsafe/model.hpp"
#include "adaptsafe/safety_case.hpp"
#include "adaptsafe/taxonomy_table.hpp"
#include "adaptsafe/validity.hpp"

namespace adaptsafe {

/// Outcome of classify(): either a type, or the closest type and the first
/// criterion the descriptor fails for it.
struct Classification {
  std::optional<AdaptationType> type;
  AdaptationType nearest = AdaptationType::t0;
  std::string unmet_criterion;
  std::vector<std::string> matched_criteria;

  bool ok() const noexcept { return type.has_value(); }
};

/// Checks the structural criteria of each type. Behavioral criteria
/// (TII.C5 monotonicity, TIII.C5 assessment uncertainty) are enforced at
/// run time by the managing system, not here.
inline Classification classify(const AdaptationDescriptor& d) {
  d.validate();
  Classification c;
  auto result = [&](AdaptationType t) {
    c.type = t;
    c.nearest = t;
    c.matched_criteria = structural_criteria(t);
    return c;
  };
  auto fail = [&](AdaptationType nearest, std::string unmet, std::vector<std::string> matched) {
    c.nearest = nearest;
    c.unmet_criterion = std::move(unmet);
    c.matched_criteria = std::move(matched);
    return c;
  };

  if (!d.affects_safety_critical) return result(AdaptationType::t0);

  if (d.options_enumerated_at_design_time) {
    switch (d.design_time_safety) {
      case DesignTimeSafety::unconditional: return result(AdaptationType::t1);
      case DesignTimeSafety::domain_conditional:
        if (d.domain_constraints_declared) return result(AdaptationType::t2);
        return fail(AdaptationType::t2, "TII.C4", {"TII.C1", "TII.C2", "TII.C3"});
      case DesignTimeSafety::none: return fail(AdaptationType::t1, "TI.C3", {"TI.C1", "TI.C2"});
    }
  }
  if (!d.runtime_assessment_declared) return fail(AdaptationType::t3, "TIII.C3", {"TIII.C1", "TIII.C2"});
  if (!d.case_in_knowledge_repo) return fail(AdaptationType::t3, "TIII.C4", {"TIII.C1", "TIII.C2", "TIII.C3"});
  return result(AdaptationType::t3);
}

inline std::vector<std::string> obligations_for(AdaptationType t) {
  std::vector<std::string> out;
  for (const auto& o : kObligations)
    if (o.type == t) out.emplace_back(o.id);
  return out;
}

enum class Discharge { discharged, missing, unsupported_node };

inline std::string_view to_string(Discharge d) {
  switch (d) {
    case Discharge::discharged: return "discharged";
    case Discharge::missing: return "missing";
    case Discharge::unsupported_node: return "unsupported-node";
  }
  return "?";
}

using DischargeMap = std::map<std::string, Discharge>;

/// An obligation is discharged iff at least one supported node carries it.
/// "Statically argue" obligations must sit on static nodes and "Dynamically
/// argue" ones on dynamic nodes; a node violating that raises
/// LifecycleMismatch.
inline DischargeMap check_obligations(AdaptationType type, const SafetyCase& c, double now, const KnowledgeRepository& k) {
  DischargeMap out;
  const auto ids = obligations_for(type);
  if (c.nodes.empty()) {
    for (const auto& id : ids) out[id] = Discharge::missing;
    return out;
  }
  const auto validity = evaluate_validity(c, now, k);
  for (const auto& id : ids) {
    const auto* info = find_obligation(id);
    const auto carriers = c.nodes_discharging(id);
    for (const auto& node_id : carriers) {
      const bool dynamic = c.nodes.at(node_id).is_dynamic();
      if ((info->placement == ObligationPlacement::static_only && dynamic) ||
          (info->placement == ObligationPlacement::dynamic_only && !dynamic))
        throw LifecycleMismatch(node_id, id);
    }
    if (carriers.empty()) {
      out[id] = Discharge::missing;
      continue;
    }
    bool any = false;
    for (const auto& node_id : carriers) {
      auto it = validity.supported.find(node_id);
      any = any || (it != validity.supported.end() && it->second);
    }
    out[id] = any ? Discharge::discharged : Discharge::unsupported_node;
  }
  return out;
}

struct TaxonomyVerdict {
  std::string model_id;
  Classification classification;
  std::vector<std::string> required_obligations;
  std::optional<DischargeMap> discharge;

  bool all_discharged() const {
    if (!classification.ok()) return false;
    if (!discharge) return true;
    for (const auto& [id, d] : *discharge)
      if (d != Discharge::discharged) return false;
    return true;
  }
};

inline TaxonomyVerdict make_verdict(const AdaptationModel& model) {
  TaxonomyVerdict v{model.id, classify(model.descriptor), {}, std::nullopt};
  if (v.classification.ok()) v.required_obligations = obligations_for(*v.classification.type);
  return v;
}

inline TaxonomyVerdict make_verdict(const AdaptationModel& model, const SafetyCase& c, double now,
                                    const KnowledgeRepository& k) {
  auto v = make_verdict(model);
  if (v.classification.ok()) v.discharge = check_obligations(*v.classification.type, c, now, k);
  return v;
}

}  // namespace adaptsafe
