#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adaptsafe/errors.hpp"
#include "adaptsafe/model.hpp"
#include "adaptsafe/taxonomy_table.hpp"

namespace adaptsafe {

enum class NodeKind { goal, strategy, solution, context, assumption };
enum class Lifecycle { static_, dynamic };
enum class EvidenceKind { design_analysis, design_simulation, runtime_observation, runtime_assessment };
enum class Verdict { pass, fail };

inline std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::goal: return "goal";
    case NodeKind::strategy: return "strategy";
    case NodeKind::solution: return "solution";
    case NodeKind::context: return "context";
    case NodeKind::assumption: return "assumption";
  }
  return "?";
}
inline std::string_view to_string(Lifecycle l) { return l == Lifecycle::static_ ? "static" : "dynamic"; }
inline std::string_view to_string(EvidenceKind k) {
  switch (k) {
    case EvidenceKind::design_analysis: return "design-analysis";
    case EvidenceKind::design_simulation: return "design-simulation";
    case EvidenceKind::runtime_observation: return "runtime-observation";
    case EvidenceKind::runtime_assessment: return "runtime-assessment";
  }
  return "?";
}
inline std::string_view to_string(Verdict v) { return v == Verdict::pass ? "pass" : "fail"; }

inline bool is_runtime(EvidenceKind k) {
  return k == EvidenceKind::runtime_observation || k == EvidenceKind::runtime_assessment;
}

/// Runtime checks a dynamic node may bind to. Evaluated in validity.hpp.
inline constexpr std::array<std::string_view, 3> kPredicates{
    "sample-in-constraint",  // latest sample lies inside the node's constraint
    "spi-within-threshold",  // no SPI window is breached
    "guard-armed",           // safety monitor enabled and not latched
};

inline bool is_known_predicate(std::string_view name) {
  return std::find(kPredicates.begin(), kPredicates.end(), name) != kPredicates.end();
}

struct EvidenceItem {
  std::string id;
  EvidenceKind kind = EvidenceKind::design_analysis;
  Verdict verdict = Verdict::pass;
  double produced_at = 0.0;            // s
  std::optional<double> freshness;     // s; nullopt = unlimited
  std::string payload_ref;

  bool fresh_at(double now) const noexcept { return !freshness || now - produced_at <= *freshness; }

  void validate(const std::string& path) const {
    if (id.empty()) throw ValidationError("empty evidence id", path);
    if (!std::isfinite(produced_at)) throw ValidationError("produced_at must be finite", path + ".produced_at");
    if (is_runtime(kind) && (!freshness || !std::isfinite(*freshness) || *freshness < 0.0))
      throw ValidationError("runtime evidence needs a finite freshness", path + ".freshness");
    if (!is_runtime(kind) && freshness) throw ValidationError("design evidence has unlimited freshness", path + ".freshness");
  }

  friend bool operator==(const EvidenceItem&, const EvidenceItem&) = default;
};

struct CaseNode {
  std::string id;
  NodeKind kind = NodeKind::goal;
  std::string text;
  Lifecycle lifecycle = Lifecycle::static_;
  std::vector<std::string> children;
  std::set<std::string> discharges;
  std::optional<OperationalDomain> constraint;
  std::optional<std::string> predicate;
  std::vector<std::string> evidence;

  bool is_dynamic() const noexcept { return lifecycle == Lifecycle::dynamic; }
  bool is_leaf_kind() const noexcept {
    return kind == NodeKind::solution || kind == NodeKind::context || kind == NodeKind::assumption;
  }

  friend bool operator==(const CaseNode&, const CaseNode&) = default;
};

struct Snapshot {
  std::uint64_t revision = 0;
  double time = 0.0;
  std::string cause;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// Explicit GSN-style safety case: a tree of nodes plus an evidence store.
struct SafetyCase {
  std::map<std::string, CaseNode> nodes;
  std::string root;
  std::uint64_t revision = 0;
  std::vector<Snapshot> snapshots;
  std::map<std::string, EvidenceItem> evidence;

  const CaseNode& node(const std::string& id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw StructuralError("no node '" + id + "'");
    return it->second;
  }

  bool all_static() const {
    return std::all_of(nodes.begin(), nodes.end(), [](const auto& kv) { return !kv.second.is_dynamic(); });
  }

  /// Ids of nodes tagged with `obligation`, in id order.
  std::vector<std::string> nodes_discharging(std::string_view obligation) const {
    std::vector<std::string> out;
    for (const auto& [id, n] : nodes)
      if (n.discharges.contains(std::string(obligation))) out.push_back(id);
    return out;
  }

  /// Checks the tree shape and every per-node rule. Throws StructuralError for
  /// graph defects and ValidationError for field defects.
  void validate() const;

  friend bool operator==(const SafetyCase&, const SafetyCase&) = default;
};

namespace detail {

inline void validate_node_fields(const CaseNode& n, const SafetyCase& c) {
  const std::string path = "nodes." + n.id;
  if (n.kind == NodeKind::solution) {
    for (const auto& ev : n.evidence)
      if (!c.evidence.contains(ev)) throw StructuralError("node '" + n.id + "' cites unknown evidence '" + ev + "'");
  } else if (!n.evidence.empty()) {
    throw ValidationError("only solutions carry evidence", path + ".evidence");
  }
  if (n.constraint) {
    if (n.kind != NodeKind::context) throw ValidationError("only context nodes carry a constraint", path + ".constraint");
    n.constraint->validate(path + ".constraint");
  }
  if (n.predicate) {
    if (!n.is_dynamic()) throw ValidationError("only dynamic nodes carry a predicate", path + ".predicate");
    if (!is_known_predicate(*n.predicate)) throw ValidationError("unknown predicate '" + *n.predicate + "'", path + ".predicate");
    if (*n.predicate == "sample-in-constraint" && !n.constraint)
      throw ValidationError("sample-in-constraint needs a constraint", path + ".predicate");
  }
  for (const auto& o : n.discharges)
    if (!find_obligation(o)) throw ValidationError("unknown obligation '" + o + "'", path + ".discharges");
}

}  // namespace detail

inline void SafetyCase::validate() const {
  if (!nodes.contains(root)) throw StructuralError("root '" + root + "' is not a node");
  std::map<std::string, int> parents;
  for (const auto& [id, n] : nodes) {
    if (id != n.id) throw StructuralError("node keyed '" + id + "' has id '" + n.id + "'");
    if (n.is_leaf_kind() && !n.children.empty())
      throw StructuralError(std::string(to_string(n.kind)) + " '" + id + "' must be a leaf");
    for (const auto& ch : n.children) {
      if (!nodes.contains(ch)) throw StructuralError("node '" + id + "' has dangling child '" + ch + "'");
      if (++parents[ch] > 1) throw StructuralError("node '" + ch + "' has more than one parent");
    }
    detail::validate_node_fields(n, *this);
  }
  if (parents.contains(root)) throw StructuralError("root '" + root + "' has a parent");
  // Every node reachable from the root exactly once means a single tree.
  std::set<std::string> seen;
  std::vector<std::string> stack{root};
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) throw StructuralError("cycle through '" + id + "'");
    for (const auto& ch : nodes.at(id).children) stack.push_back(ch);
  }
  if (seen.size() != nodes.size()) throw StructuralError("case has nodes unreachable from root '" + root + "'");
  for (const auto& [id, ev] : evidence) {
    if (id != ev.id) throw StructuralError("evidence keyed '" + id + "' has id '" + ev.id + "'");
    ev.validate("evidence." + id);
  }
  for (std::size_t i = 1; i < snapshots.size(); ++i)
    if (snapshots[i].revision <= snapshots[i - 1].revision) throw StructuralError("snapshot revisions must increase");
  if (!snapshots.empty() && snapshots.back().revision > revision)
    throw StructuralError("snapshot revision exceeds case revision");
}

// ---------------------------------------------------------------------------
// Run-time patches
// ---------------------------------------------------------------------------

/// Adds evidence to a dynamic solution. Evidence of the same kind already on
/// the node is superseded (it stays in the evidence store for audit).
struct AttachEvidence {
  std::string node_id;
  EvidenceItem item;
};

struct ReplaceConstraintContext {
  std::string node_id;
  OperationalDomain domain;
};

/// Grafts dynamic nodes under a dynamic parent; `subtree_root` becomes the
/// parent's last child.
struct AddDynamicSubtree {
  std::string parent_id;
  std::string subtree_root;
  std::vector<CaseNode> nodes;
};

using CasePatch = std::variant<AttachEvidence, ReplaceConstraintContext, AddDynamicSubtree>;

namespace detail {

inline CaseNode& dynamic_target(SafetyCase& c, const std::string& id, const char* what) {
  auto it = c.nodes.find(id);
  if (it == c.nodes.end()) throw StructuralError(std::string(what) + ": no node '" + id + "'");
  if (!it->second.is_dynamic()) throw ImmutabilityViolation(id, std::string(what) + " rejected");
  return it->second;
}

inline void apply_patch(SafetyCase& c, const AttachEvidence& p) {
  CaseNode& n = dynamic_target(c, p.node_id, "attach-evidence");
  if (n.kind != NodeKind::solution) throw StructuralError("attach-evidence: '" + p.node_id + "' is not a solution");
  p.item.validate("patch.evidence");
  if (c.evidence.contains(p.item.id)) throw StructuralError("attach-evidence: duplicate evidence id '" + p.item.id + "'");
  std::erase_if(n.evidence, [&](const std::string& ev) { return c.evidence.at(ev).kind == p.item.kind; });
  c.evidence.emplace(p.item.id, p.item);
  n.evidence.push_back(p.item.id);
}

inline void apply_patch(SafetyCase& c, const ReplaceConstraintContext& p) {
  CaseNode& n = dynamic_target(c, p.node_id, "replace-constraint-context");
  if (n.kind != NodeKind::context || !n.constraint)
    throw StructuralError("replace-constraint-context: '" + p.node_id + "' is not a constraint context");
  p.domain.validate("patch.domain");
  n.constraint = p.domain;
}

inline void apply_patch(SafetyCase& c, const AddDynamicSubtree& p) {
  dynamic_target(c, p.parent_id, "add-dynamic-subtree");
  for (const auto& n : p.nodes) {
    if (!n.is_dynamic()) throw ValidationError("grafted node '" + n.id + "' must be dynamic", "patch.nodes");
    if (c.nodes.contains(n.id)) throw StructuralError("add-dynamic-subtree: duplicate node id '" + n.id + "'");
    c.nodes.emplace(n.id, n);
  }
  auto& parent = c.nodes.at(p.parent_id);
  if (parent.is_leaf_kind()) throw StructuralError("add-dynamic-subtree: parent '" + p.parent_id + "' is a leaf kind");
  parent.children.push_back(p.subtree_root);
}

}  // namespace detail

/// Applies `patches` in order to a copy of `c`. On success the revision
/// advances by one and a snapshot is logged; on any error `c` is untouched
/// and the error propagates.
inline SafetyCase adapt_case(const SafetyCase& c, std::span<const CasePatch> patches, double now,
                             const std::string& cause) {
  SafetyCase out = c;
  for (const auto& patch : patches) std::visit([&](const auto& p) { detail::apply_patch(out, p); }, patch);
  out.validate();
  out.revision = c.revision + 1;
  out.snapshots.push_back({out.revision, now, cause});
  return out;
}

inline SafetyCase adapt_case(const SafetyCase& c, std::initializer_list<CasePatch> patches, double now,
                             const std::string& cause) {
  return adapt_case(c, std::span<const CasePatch>(patches.begin(), patches.size()), now, cause);
}

/// Context nodes carrying a constraint, in id order.
inline std::vector<std::string> constraint_contexts(const SafetyCase& c) {
  std::vector<std::string> out;
  for (const auto& [id, n] : c.nodes)
    if (n.kind == NodeKind::context && n.constraint) out.push_back(id);
  return out;
}

/// The operational domain the case currently argues over; unbounded when the
/// case has no constraint context.
inline OperationalDomain current_constraints(const SafetyCase& c) {
  const auto ids = constraint_contexts(c);
  if (ids.size() > 1) throw StructuralError("case has " + std::to_string(ids.size()) + " active constraint contexts");
  if (ids.empty()) return OperationalDomain::unbounded();
  return *c.nodes.at(ids.front()).constraint;
}

/// First dynamic node of `kind` that discharges `obligation`, if any.
inline std::optional<std::string> find_dynamic_node(const SafetyCase& c, NodeKind kind, std::string_view obligation) {
  for (const auto& [id, n] : c.nodes)
    if (n.is_dynamic() && n.kind == kind && n.discharges.contains(std::string(obligation))) return id;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_bound(double v) {
  if (!std::isfinite(v)) return v < 0 ? "-inf" : "inf";
  std::ostringstream os;
  os << v;
  return os.str();
}

inline std::string format_domain(const OperationalDomain& d) {
  if (d.bounds.empty()) return "{unbounded}";
  std::string out = "{";
  bool first = true;
  for (const auto& [name, iv] : d.bounds) {
    out += (first ? "" : ", ") + name + ": [" + format_bound(iv.low) + ", " + format_bound(iv.high) + "]";
    first = false;
  }
  return out + "}";
}

inline void render_node(const SafetyCase& c, const std::string& id, int depth, std::ostringstream& os) {
  const CaseNode& n = c.nodes.at(id);
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << '[' << to_string(n.kind) << "] " << n.id;
  if (n.is_dynamic()) os << " (dynamic)";
  if (!n.text.empty()) os << ": " << n.text;
  if (!n.discharges.empty()) {
    os << "  {";
    bool first = true;
    for (const auto& o : n.discharges) {
      os << (first ? "" : ", ") << o;
      first = false;
    }
    os << '}';
  }
  if (n.constraint) os << "  domain=" << format_domain(*n.constraint);
  if (n.predicate) os << "  check=" << *n.predicate;
  os << '\n';
  for (const auto& ev : n.evidence) {
    const auto& e = c.evidence.at(ev);
    os << std::string(static_cast<std::size_t>(depth + 1) * 2, ' ') << "- evidence " << e.id << ' ' << to_string(e.kind)
       << ' ' << to_string(e.verdict) << " @" << e.produced_at << '\n';
  }
  for (const auto& ch : n.children) render_node(c, ch, depth + 1, os);
}

}  // namespace detail

/// Indented plain-text tree for human review.
inline std::string render_tree(const SafetyCase& c) {
  std::ostringstream os;
  os << "safety case rev " << c.revision << '\n';
  detail::render_node(c, c.root, 0, os);
  return os.str();
}

}  // namespace adaptsafe
