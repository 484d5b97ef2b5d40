#pragma once

#include <map>
#include <string>
#include <vector>

#include "adaptsafe/errors.hpp"
#include "adaptsafe/knowledge.hpp"
#include "adaptsafe/safety_case.hpp"

namespace adaptsafe {

struct ValidityResult {
  bool valid = false;
  /// Nodes unsupported on their own account (bad evidence, false predicate,
  /// childless goal), in id order. Ancestors failing only through them are
  /// not listed.
  std::vector<std::string> failing_nodes;
  std::map<std::string, bool> supported;
};

/// Evaluates a named runtime check against the knowledge repository. No
/// sample yet means nothing contradicts the constraint.
inline bool evaluate_predicate(const CaseNode& node, const KnowledgeRepository& k) {
  const std::string& name = *node.predicate;
  if (name == "sample-in-constraint") {
    const auto* s = k.latest();
    return s == nullptr || domain_contains(*node.constraint, *s);
  }
  if (name == "spi-within-threshold") {
    for (const auto& w : k.spi_windows)
      if (w.breached()) return false;
    return true;
  }
  if (name == "guard-armed") return k.guard_enabled && !k.guard_tripped;
  throw ValidationError("unknown predicate '" + name + "'", "nodes." + node.id + ".predicate");
}

namespace detail {

inline bool intrinsically_supported(const SafetyCase& c, const CaseNode& n, double now, const KnowledgeRepository& k) {
  if (n.predicate && !evaluate_predicate(n, k)) return false;
  switch (n.kind) {
    case NodeKind::solution:
      if (n.evidence.empty()) return false;
      for (const auto& id : n.evidence) {
        auto it = c.evidence.find(id);
        if (it == c.evidence.end()) throw StructuralError("node '" + n.id + "' cites unknown evidence '" + id + "'");
        if (it->second.verdict != Verdict::pass || !it->second.fresh_at(now)) return false;
      }
      return true;
    case NodeKind::goal:
    case NodeKind::strategy: return !n.children.empty();
    case NodeKind::context:
    case NodeKind::assumption: return true;
  }
  return false;
}

inline bool support(const SafetyCase& c, const std::string& id, double now, const KnowledgeRepository& k,
                    ValidityResult& r, int depth) {
  if (depth > static_cast<int>(c.nodes.size())) throw StructuralError("cycle through '" + id + "'");
  auto it = c.nodes.find(id);
  if (it == c.nodes.end()) throw StructuralError("dangling child '" + id + "'");
  const CaseNode& n = it->second;
  const bool own = intrinsically_supported(c, n, now, k);
  bool all_children = true;
  for (const auto& ch : n.children) all_children = support(c, ch, now, k, r, depth + 1) && all_children;
  if (!own) r.failing_nodes.push_back(id);
  const bool ok = own && all_children;
  r.supported[id] = ok;
  return ok;
}

}  // namespace detail

/// Strict conjunction: a node is supported iff its own check passes and all
/// of its children (contexts and assumptions included) are supported.
/// Solutions need at least one evidence item, and every item must be a fresh
/// pass.
inline ValidityResult evaluate_validity(const SafetyCase& c, double now, const KnowledgeRepository& k) {
  ValidityResult r;
  if (!c.nodes.contains(c.root)) throw StructuralError("root '" + c.root + "' is not a node");
  r.valid = detail::support(c, c.root, now, k, r, 0);
  std::sort(r.failing_nodes.begin(), r.failing_nodes.end());
  return r;
}

}  // namespace adaptsafe
