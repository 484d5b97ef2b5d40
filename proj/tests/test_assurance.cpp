#include <catch2/catch_amalgamated.hpp>

#include "adaptsafe/adaptsafe.hpp"

using namespace adaptsafe;

namespace {

CaseNode node(std::string id, NodeKind kind, Lifecycle lc = Lifecycle::static_, std::vector<std::string> children = {}) {
  CaseNode n;
  n.id = std::move(id);
  n.kind = kind;
  n.lifecycle = lc;
  n.children = std::move(children);
  return n;
}

EvidenceItem runtime_pass(std::string id, double at, double freshness = 3600.0) {
  return {std::move(id), EvidenceKind::runtime_assessment, Verdict::pass, at, freshness, "x"};
}

void add(SafetyCase& c, CaseNode n) { c.nodes.emplace(n.id, std::move(n)); }

/// G0 -> Sn0 with one runtime evidence item.
SafetyCase simple_case(double produced_at) {
  SafetyCase c;
  c.root = "G0";
  add(c, node("G0", NodeKind::goal, Lifecycle::dynamic, {"Sn0"}));
  auto sn = node("Sn0", NodeKind::solution, Lifecycle::dynamic);
  sn.evidence = {"E0"};
  add(c, sn);
  c.evidence.emplace("E0", runtime_pass("E0", produced_at));
  return c;
}

OperationalDomain cold_fast() {
  OperationalDomain d;
  d.bounds["inflow_temp"] = {-10, 2};
  d.bounds["inflow_rate"] = {0.2, 1.0};
  return d;
}

OperationalDomain permissive() {
  OperationalDomain d;
  d.bounds["inflow_temp"] = {-10, 40};
  d.bounds["inflow_rate"] = {0.01, 1.0};
  return d;
}

KnowledgeRepository repo_with_sample(double inflow_temp, double rate = 0.5) {
  auto k = make_repository({}, "opt-9", {}, {}, 0.1);
  k.sample_history.push_back({10.0, inflow_temp, rate, 40.0, 40.0});
  k.guard_enabled = true;
  return k;
}

SafetyCase type2_case() {
  SafetyCase c;
  c.root = "G0";
  add(c, node("G0", NodeKind::goal, Lifecycle::static_, {"S0"}));
  add(c, node("S0", NodeKind::strategy, Lifecycle::static_, {"G1", "G4", "G5"}));
  auto g1 = node("G1", NodeKind::goal, Lifecycle::static_, {"Sn1"});
  g1.discharges = {"TII.B1", "TII.B2", "TII.B3"};
  add(c, g1);
  auto sn1 = node("Sn1", NodeKind::solution);
  sn1.evidence = {"D1"};
  add(c, sn1);
  auto g4 = node("G4", NodeKind::goal, Lifecycle::dynamic, {"C1", "Sn4"});
  add(c, g4);
  auto c1 = node("C1", NodeKind::context, Lifecycle::dynamic);
  c1.constraint = permissive();
  c1.predicate = "sample-in-constraint";
  add(c, c1);
  auto sn4 = node("Sn4", NodeKind::solution, Lifecycle::dynamic);
  sn4.evidence = {"R4"};
  sn4.discharges = {"TII.B4"};
  add(c, sn4);
  auto g5 = node("G5", NodeKind::goal, Lifecycle::dynamic, {"Sn5"});
  add(c, g5);
  auto sn5 = node("Sn5", NodeKind::solution, Lifecycle::dynamic);
  sn5.evidence = {"D5"};
  sn5.predicate = "guard-armed";
  sn5.discharges = {"TII.B5"};
  add(c, sn5);
  c.evidence.emplace("D1", EvidenceItem{"D1", EvidenceKind::design_analysis, Verdict::pass, 0, std::nullopt, "doc"});
  c.evidence.emplace("D5", EvidenceItem{"D5", EvidenceKind::design_simulation, Verdict::pass, 0, std::nullopt, "sim"});
  c.evidence.emplace("R4", EvidenceItem{"R4", EvidenceKind::runtime_observation, Verdict::pass, 0, 3600.0, "adm"});
  return c;
}

}  // namespace

TEST_CASE("fresh pass evidence supports the case", "[assurance][validity]") {
  const auto c = simple_case(0.0);
  c.validate();
  const auto k = make_repository({}, "a", {}, {}, 0.1);
  const auto r = evaluate_validity(c, 100.0, k);
  CHECK(r.valid);
  CHECK(r.failing_nodes.empty());
}

TEST_CASE("freshness boundary is inclusive", "[assurance][validity]") {
  const auto c = simple_case(100.0);
  const auto k = make_repository({}, "a", {}, {}, 0.1);
  CHECK(evaluate_validity(c, 3700.0, k).valid);
  const auto stale = evaluate_validity(c, 3700.0 + 1e-6, k);
  CHECK_FALSE(stale.valid);
  CHECK(stale.failing_nodes == std::vector<std::string>{"Sn0"});
}

TEST_CASE("fail verdicts and missing evidence invalidate", "[assurance][validity]") {
  auto c = simple_case(0.0);
  c.evidence.at("E0").verdict = Verdict::fail;
  const auto k = make_repository({}, "a", {}, {}, 0.1);
  CHECK_FALSE(evaluate_validity(c, 1.0, k).valid);
  c.nodes.at("Sn0").evidence.clear();
  CHECK(evaluate_validity(c, 1.0, k).failing_nodes == std::vector<std::string>{"Sn0"});
}

TEST_CASE("constraint context fails when the sample leaves it", "[assurance][validity]") {
  auto c = type2_case();
  c.nodes.at("C1").constraint = cold_fast();
  c.validate();
  CHECK(evaluate_validity(c, 10.0, repo_with_sample(1.0)).valid);
  const auto r = evaluate_validity(c, 10.0, repo_with_sample(5.0));
  CHECK_FALSE(r.valid);
  CHECK(r.failing_nodes == std::vector<std::string>{"C1"});
  CHECK_FALSE(r.supported.at("G4"));
  CHECK(r.supported.at("G5"));
}

TEST_CASE("guard predicate", "[assurance][validity]") {
  const auto c = type2_case();
  auto k = repo_with_sample(1.0);
  CHECK(evaluate_validity(c, 1.0, k).valid);
  k.guard_tripped = true;
  CHECK(evaluate_validity(c, 1.0, k).failing_nodes == std::vector<std::string>{"Sn5"});
}

TEST_CASE("attaching assessment evidence bumps the revision", "[assurance][patch]") {
  const auto c = simple_case(0.0);
  const auto out = adapt_case(c, {AttachEvidence{"Sn0", runtime_pass("E1", 50.0)}}, 50.0, "assess");
  CHECK(out.revision == c.revision + 1);
  CHECK(out.nodes.at("Sn0").evidence == std::vector<std::string>{"E1"});  // same kind superseded
  CHECK(out.evidence.contains("E0"));
  REQUIRE(out.snapshots.size() == 1);
  CHECK(out.snapshots[0].cause == "assess");
}

TEST_CASE("evidence of a different kind accumulates", "[assurance][patch]") {
  const auto c = simple_case(0.0);
  EvidenceItem obs{"E2", EvidenceKind::runtime_observation, Verdict::pass, 5.0, 60.0, "spi"};
  const auto out = adapt_case(c, {AttachEvidence{"Sn0", obs}}, 5.0, "spi");
  CHECK(out.nodes.at("Sn0").evidence == std::vector<std::string>{"E0", "E2"});
}

TEST_CASE("constraint context narrows to option 9", "[assurance][patch]") {
  auto c = type2_case();
  CHECK(current_constraints(c) == permissive());
  c = adapt_case(c, {ReplaceConstraintContext{"C1", cold_fast()}}, 460.0, "adaptation:opt-9");
  CHECK(current_constraints(c) == cold_fast());
  CHECK(c.revision == 1);
}

TEST_CASE("no constraint context means unbounded", "[assurance]") {
  CHECK(current_constraints(simple_case(0.0)) == OperationalDomain::unbounded());
}

TEST_CASE("static nodes are immutable", "[assurance][patch]") {
  SafetyCase c;
  c.root = "G0";
  add(c, node("G0", NodeKind::goal, Lifecycle::static_, {"Sn0"}));
  auto sn = node("Sn0", NodeKind::solution);
  sn.evidence = {"D"};
  add(c, sn);
  c.evidence.emplace("D", EvidenceItem{"D", EvidenceKind::design_analysis, Verdict::pass, 0, std::nullopt, ""});
  CHECK_THROWS_AS(adapt_case(c, {AttachEvidence{"Sn0", runtime_pass("E", 1)}}, 1, "x"), ImmutabilityViolation);
  CHECK_THROWS_AS(adapt_case(c, {AddDynamicSubtree{"G0", "G9", {node("G9", NodeKind::goal, Lifecycle::dynamic)}}}, 1, "x"),
                  ImmutabilityViolation);
}

TEST_CASE("a failing patch leaves the case untouched", "[assurance][patch]") {
  const auto c = simple_case(0.0);
  const auto before = c;
  std::vector<CasePatch> patches{AttachEvidence{"Sn0", runtime_pass("E5", 1)}, AttachEvidence{"nope", runtime_pass("E6", 1)}};
  CHECK_THROWS_AS(adapt_case(c, patches, 1.0, "x"), StructuralError);
  CHECK(c == before);
  CHECK_THROWS_AS(adapt_case(c, {AttachEvidence{"Sn0", runtime_pass("E0", 1)}}, 1, "dup"), StructuralError);
}

TEST_CASE("dynamic subtree grafting", "[assurance][patch]") {
  const auto c = simple_case(0.0);
  auto g = node("G7", NodeKind::goal, Lifecycle::dynamic, {"Sn7"});
  auto s = node("Sn7", NodeKind::solution, Lifecycle::dynamic);
  s.evidence = {"E0"};
  const auto out = adapt_case(c, {AddDynamicSubtree{"G0", "G7", {g, s}}}, 2.0, "graft");
  CHECK(out.nodes.at("G0").children.back() == "G7");
  CHECK(evaluate_validity(out, 2.0, make_repository({}, "a", {}, {}, 0.1)).valid);
  auto bad = node("Sx", NodeKind::solution);
  CHECK_THROWS_AS(adapt_case(c, {AddDynamicSubtree{"G0", "Sx", {bad}}}, 2.0, "graft"), ValidationError);
}

TEST_CASE("structure checks", "[assurance][structure]") {
  auto c = simple_case(0.0);
  c.nodes.at("Sn0").children = {"G0"};
  CHECK_THROWS_AS(c.validate(), StructuralError);

  c = simple_case(0.0);
  c.nodes.at("G0").children.push_back("ghost");
  CHECK_THROWS_AS(c.validate(), StructuralError);

  c = simple_case(0.0);
  add(c, node("orphan", NodeKind::goal));
  CHECK_THROWS_AS(c.validate(), StructuralError);

  c = simple_case(0.0);
  c.root = "missing";
  CHECK_THROWS_AS(c.validate(), StructuralError);

  c = simple_case(0.0);
  c.evidence.at("E0").freshness.reset();
  CHECK_THROWS_AS(c.validate(), ValidationError);

  c = simple_case(0.0);
  auto ctx = node("C", NodeKind::context);
  ctx.predicate = "guard-armed";
  add(c, ctx);
  c.nodes.at("G0").children.push_back("C");
  CHECK_THROWS_AS(c.validate(), ValidationError);  // predicate on a static node
}

TEST_CASE("two constraint contexts are ambiguous", "[assurance]") {
  auto c = type2_case();
  auto c2 = node("C2", NodeKind::context, Lifecycle::dynamic);
  c2.constraint = cold_fast();
  add(c, c2);
  c.nodes.at("G4").children.push_back("C2");
  CHECK_THROWS_AS(current_constraints(c), StructuralError);
}

TEST_CASE("render shows the tree", "[assurance]") {
  const auto text = render_tree(type2_case());
  CHECK(text.rfind("safety case rev 0\n[goal] G0", 0) == 0);
  CHECK(text.find("    [goal] G4 (dynamic)") != std::string::npos);
  CHECK(text.find("domain={inflow_rate: [0.01, 1], inflow_temp: [-10, 40]}") != std::string::npos);
}
