#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adaptsafe/controller.hpp"
#include "adaptsafe/errors.hpp"
#include "adaptsafe/goal.hpp"
#include "adaptsafe/mapek.hpp"
#include "adaptsafe/model.hpp"
#include "adaptsafe/plant.hpp"
#include "adaptsafe/safety_case.hpp"
#include "adaptsafe/scenario.hpp"
#include "adaptsafe/spi.hpp"
#include "adaptsafe/taxonomy.hpp"

namespace adaptsafe::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Path-aware reading
// ---------------------------------------------------------------------------

/// A JSON value plus its location, so every error names the offending field.
class Reader {
 public:
  Reader(const json& value, std::string path) : v_(&value), path_(std::move(path)) {}

  const json& value() const noexcept { return *v_; }
  const std::string& path() const noexcept { return path_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ValidationError(msg, path_); }

  bool is_object() const { return v_->is_object(); }
  bool is_array() const { return v_->is_array(); }
  bool is_null() const { return v_->is_null(); }

  bool has(const char* key) const { return v_->is_object() && v_->contains(key); }

  Reader at(const char* key) const {
    expect_object();
    auto it = v_->find(key);
    if (it == v_->end()) throw ValidationError("missing required field", child_path(key));
    return {*it, child_path(key)};
  }

  std::optional<Reader> find(const char* key) const {
    expect_object();
    auto it = v_->find(key);
    if (it == v_->end() || it->is_null()) return std::nullopt;
    return Reader{*it, child_path(key)};
  }

  std::size_t size() const {
    expect_array();
    return v_->size();
  }

  Reader operator[](std::size_t i) const {
    expect_array();
    return {(*v_)[i], path_ + "[" + std::to_string(i) + "]"};
  }

  template <class F>
  void each_member(F&& f) const {
    expect_object();
    for (auto it = v_->begin(); it != v_->end(); ++it) f(it.key(), Reader{it.value(), child_path(it.key())});
  }

  double number() const {
    if (!v_->is_number()) fail("expected a number");
    const double d = v_->get<double>();
    if (!std::isfinite(d)) fail("expected a finite number");
    return d;
  }

  /// Number, or null meaning the given infinite default.
  double bound(double if_null) const { return v_->is_null() ? if_null : number(); }

  std::int64_t integer() const {
    if (!v_->is_number_integer()) fail("expected an integer");
    return v_->get<std::int64_t>();
  }

  std::uint64_t unsigned_integer() const {
    if (v_->is_number_unsigned()) return v_->get<std::uint64_t>();
    const auto i = integer();
    if (i < 0) fail("expected a non-negative integer");
    return static_cast<std::uint64_t>(i);
  }

  bool boolean() const {
    if (!v_->is_boolean()) fail("expected true or false");
    return v_->get<bool>();
  }

  std::string string() const {
    if (!v_->is_string()) fail("expected a string");
    return v_->get<std::string>();
  }

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].string());
    return out;
  }

  /// Rejects keys outside `allowed`, catching typos in hand-written files.
  void only(std::initializer_list<const char*> allowed) const {
    expect_object();
    for (auto it = v_->begin(); it != v_->end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || it.key() == a;
      if (!ok) throw ValidationError("unknown field", child_path(it.key()));
    }
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  void expect_object() const {
    if (!v_->is_object()) fail("expected an object");
  }
  void expect_array() const {
    if (!v_->is_array()) fail("expected an array");
  }

  const json* v_;
  std::string path_;
};

inline json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what(), origin);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json load_json(const std::string& path) { return parse_text(read_file(path), path); }

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

// ---------------------------------------------------------------------------
// Enums
// ---------------------------------------------------------------------------

template <class E, std::size_t N>
E parse_enum(const Reader& r, const std::array<E, N>& values) {
  const auto s = r.string();
  for (E e : values)
    if (to_string(e) == s) return e;
  std::string allowed;
  for (E e : values) allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(e));
  r.fail("unknown value '" + s + "' (expected one of: " + allowed + ")");
}

inline ControllerKind read_controller_kind(const Reader& r) {
  return parse_enum(r, std::array{ControllerKind::pid, ControllerKind::parametric_net});
}
inline NodeKind read_node_kind(const Reader& r) {
  return parse_enum(r, std::array{NodeKind::goal, NodeKind::strategy, NodeKind::solution, NodeKind::context,
                                  NodeKind::assumption});
}
inline Lifecycle read_lifecycle(const Reader& r) { return parse_enum(r, std::array{Lifecycle::static_, Lifecycle::dynamic}); }
inline EvidenceKind read_evidence_kind(const Reader& r) {
  return parse_enum(r, std::array{EvidenceKind::design_analysis, EvidenceKind::design_simulation,
                                  EvidenceKind::runtime_observation, EvidenceKind::runtime_assessment});
}
inline Verdict read_verdict(const Reader& r) { return parse_enum(r, std::array{Verdict::pass, Verdict::fail}); }
inline DesignTimeSafety read_design_time_safety(const Reader& r) {
  return parse_enum(r, std::array{DesignTimeSafety::none, DesignTimeSafety::unconditional,
                                  DesignTimeSafety::domain_conditional});
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

inline json bound_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// {"inflow_temp": [lo, hi]} with null for an open side.
inline OperationalDomain read_domain(const Reader& r) {
  OperationalDomain d;
  r.each_member([&](const std::string& name, const Reader& iv) {
    if (iv.size() != 2) iv.fail("expected [low, high]");
    Interval i{iv[0].bound(-kInf), iv[1].bound(kInf)};
    i.validate(iv.path());
    d.bounds.emplace(name, i);
  });
  d.validate(r.path());
  return d;
}

inline json to_json(const OperationalDomain& d) {
  json j = json::object();
  for (const auto& [name, iv] : d.bounds) j[name] = json::array({bound_json(iv.low), bound_json(iv.high)});
  return j;
}

inline ParameterMap read_parameters(const Reader& r) {
  ParameterMap m;
  r.each_member([&](const std::string& k, const Reader& v) { m[k] = v.number(); });
  return m;
}

inline json to_json(const ParameterMap& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

inline SystemConfiguration read_configuration(const Reader& r) {
  r.only({"controller_kind", "parameters"});
  SystemConfiguration c{read_controller_kind(r.at("controller_kind")), read_parameters(r.at("parameters"))};
  c.validate(r.path());
  return c;
}

inline json to_json(const SystemConfiguration& c) {
  return {{"controller_kind", to_string(c.controller_kind)}, {"parameters", to_json(c.parameters)}};
}

inline AdaptationDescriptor read_descriptor(const Reader& r) {
  r.only({"affects_safety_critical", "independence_argued", "options_enumerated_at_design_time", "design_time_safety",
          "domain_constraints_declared", "runtime_assessment_declared", "case_in_knowledge_repo"});
  AdaptationDescriptor d;
  auto flag = [&](const char* key, bool& out) {
    if (auto v = r.find(key)) out = v->boolean();
  };
  flag("affects_safety_critical", d.affects_safety_critical);
  flag("independence_argued", d.independence_argued);
  flag("options_enumerated_at_design_time", d.options_enumerated_at_design_time);
  if (auto v = r.find("design_time_safety")) d.design_time_safety = read_design_time_safety(*v);
  flag("domain_constraints_declared", d.domain_constraints_declared);
  flag("runtime_assessment_declared", d.runtime_assessment_declared);
  flag("case_in_knowledge_repo", d.case_in_knowledge_repo);
  d.validate(r.path());
  return d;
}

inline json to_json(const AdaptationDescriptor& d) {
  return {{"affects_safety_critical", d.affects_safety_critical},
          {"independence_argued", d.independence_argued},
          {"options_enumerated_at_design_time", d.options_enumerated_at_design_time},
          {"design_time_safety", to_string(d.design_time_safety)},
          {"domain_constraints_declared", d.domain_constraints_declared},
          {"runtime_assessment_declared", d.runtime_assessment_declared},
          {"case_in_knowledge_repo", d.case_in_knowledge_repo}};
}

/// {"target": "kp", "low": 0, "high": 5} or, conditional,
/// {"target": "kp", "low": 0, "high": 5, "if": {"parameter": "ki", "above": 0}}.
inline ParameterConstraint read_constraint(const Reader& r) {
  r.only({"target", "low", "high", "if"});
  ParameterConstraint c;
  c.target = r.at("target").string();
  if (auto v = r.find("low")) c.low = v->number();
  if (auto v = r.find("high")) c.high = v->number();
  if (auto g = r.find("if")) {
    g->only({"parameter", "above"});
    c.kind = ParameterConstraint::Kind::conditional;
    c.condition = ParameterConstraint::Guard{g->at("parameter").string(), g->at("above").number()};
  }
  c.validate(r.path());
  return c;
}

inline json to_json(const ParameterConstraint& c) {
  json j{{"target", c.target}, {"low", bound_json(c.low)}, {"high", bound_json(c.high)}};
  if (c.condition) j["if"] = {{"parameter", c.condition->parameter}, {"above", c.condition->threshold}};
  return j;
}

inline AdaptationOption read_option(const Reader& r, const std::string& model_id) {
  r.only({"id", "model_id", "assignment", "domain", "design_time_evidence", "design_rise_time"});
  AdaptationOption o;
  o.id = r.at("id").string();
  o.model_id = r.has("model_id") ? r.at("model_id").string() : model_id;
  o.assignment = read_parameters(r.at("assignment"));
  if (auto d = r.find("domain")) o.domain = read_domain(*d);
  if (auto e = r.find("design_time_evidence")) o.design_time_evidence = e->strings();
  if (auto t = r.find("design_rise_time")) o.design_rise_time = t->number();
  return o;
}

inline json to_json(const AdaptationOption& o) {
  json j{{"id", o.id}, {"model_id", o.model_id}, {"assignment", to_json(o.assignment)}};
  if (o.domain) j["domain"] = to_json(*o.domain);
  if (!o.design_time_evidence.empty()) j["design_time_evidence"] = o.design_time_evidence;
  if (o.design_rise_time) j["design_rise_time"] = *o.design_rise_time;
  return j;
}

inline AdaptationModel read_model(const Reader& r) {
  r.only({"id", "controller_kind", "parameters", "constraints", "descriptor", "options"});
  AdaptationModel m;
  m.id = r.at("id").string();
  m.controller_kind = read_controller_kind(r.at("controller_kind"));
  if (auto p = r.find("parameters")) m.parameters = p->strings();
  if (auto cs = r.find("constraints"))
    for (std::size_t i = 0; i < cs->size(); ++i) m.constraints.push_back(read_constraint((*cs)[i]));
  m.descriptor = read_descriptor(r.at("descriptor"));
  if (auto os = r.find("options")) {
    m.options.emplace();
    for (std::size_t i = 0; i < os->size(); ++i) m.options->push_back(read_option((*os)[i], m.id));
  }
  m.validate(r.path());
  return m;
}

inline json to_json(const AdaptationModel& m) {
  json j{{"id", m.id},
         {"controller_kind", to_string(m.controller_kind)},
         {"parameters", m.parameters},
         {"descriptor", to_json(m.descriptor)}};
  json cs = json::array();
  for (const auto& c : m.constraints) cs.push_back(to_json(c));
  j["constraints"] = cs;
  if (m.options) {
    json os = json::array();
    for (const auto& o : *m.options) os.push_back(to_json(o));
    j["options"] = os;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Safety case
// ---------------------------------------------------------------------------

inline EvidenceItem read_evidence(const Reader& r, const std::string& id) {
  r.only({"kind", "verdict", "produced_at", "freshness", "payload_ref"});
  EvidenceItem e;
  e.id = id;
  e.kind = read_evidence_kind(r.at("kind"));
  e.verdict = read_verdict(r.at("verdict"));
  if (auto v = r.find("produced_at")) e.produced_at = v->number();
  if (auto v = r.find("freshness")) {
    if (!(v->value().is_string() && v->string() == "unlimited")) e.freshness = v->number();
  }
  if (auto v = r.find("payload_ref")) e.payload_ref = v->string();
  e.validate(r.path());
  return e;
}

inline json to_json(const EvidenceItem& e) {
  return {{"kind", to_string(e.kind)},
          {"verdict", to_string(e.verdict)},
          {"produced_at", e.produced_at},
          {"freshness", e.freshness ? json(*e.freshness) : json("unlimited")},
          {"payload_ref", e.payload_ref}};
}

inline CaseNode read_node(const Reader& r, const std::string& id) {
  r.only({"kind", "text", "lifecycle", "children", "discharges", "constraint", "predicate", "evidence"});
  CaseNode n;
  n.id = id;
  n.kind = read_node_kind(r.at("kind"));
  if (auto v = r.find("text")) n.text = v->string();
  if (auto v = r.find("lifecycle")) n.lifecycle = read_lifecycle(*v);
  if (auto v = r.find("children")) n.children = v->strings();
  if (auto v = r.find("discharges"))
    for (auto& s : v->strings()) n.discharges.insert(std::move(s));
  if (auto v = r.find("constraint")) n.constraint = read_domain(*v);
  if (auto v = r.find("predicate")) n.predicate = v->string();
  if (auto v = r.find("evidence")) n.evidence = v->strings();
  return n;
}

inline json to_json(const CaseNode& n) {
  json j{{"kind", to_string(n.kind)}, {"text", n.text}, {"lifecycle", to_string(n.lifecycle)}};
  if (!n.children.empty()) j["children"] = n.children;
  if (!n.discharges.empty()) j["discharges"] = n.discharges;
  if (n.constraint) j["constraint"] = to_json(*n.constraint);
  if (n.predicate) j["predicate"] = *n.predicate;
  if (!n.evidence.empty()) j["evidence"] = n.evidence;
  return j;
}

inline SafetyCase read_case(const Reader& r) {
  r.only({"root", "revision", "nodes", "evidence", "snapshots"});
  SafetyCase c;
  c.root = r.at("root").string();
  if (auto v = r.find("revision")) c.revision = v->unsigned_integer();
  r.at("nodes").each_member([&](const std::string& id, const Reader& n) { c.nodes.emplace(id, read_node(n, id)); });
  if (auto ev = r.find("evidence"))
    ev->each_member([&](const std::string& id, const Reader& e) { c.evidence.emplace(id, read_evidence(e, id)); });
  if (auto ss = r.find("snapshots")) {
    for (std::size_t i = 0; i < ss->size(); ++i) {
      const auto s = (*ss)[i];
      s.only({"revision", "time", "cause"});
      c.snapshots.push_back({s.at("revision").unsigned_integer(), s.at("time").number(),
                             s.find("cause") ? s.at("cause").string() : std::string{}});
    }
  }
  c.validate();
  return c;
}

inline json to_json(const SafetyCase& c) {
  json nodes = json::object();
  for (const auto& [id, n] : c.nodes) nodes[id] = to_json(n);
  json ev = json::object();
  for (const auto& [id, e] : c.evidence) ev[id] = to_json(e);
  json snaps = json::array();
  for (const auto& s : c.snapshots) snaps.push_back({{"revision", s.revision}, {"time", s.time}, {"cause", s.cause}});
  return {{"root", c.root}, {"revision", c.revision}, {"nodes", nodes}, {"evidence", ev}, {"snapshots", snaps}};
}

inline SafetyCase load_case(const std::string& path) { return read_case(Reader(load_json(path), "")); }

// ---------------------------------------------------------------------------
// Plant, SPI, policies
// ---------------------------------------------------------------------------

inline PlantParams read_plant(const Reader& r) {
  r.only({"volume", "density", "specific_heat", "max_power", "tick"});
  PlantParams p;
  if (auto v = r.find("volume")) p.volume = v->number();
  if (auto v = r.find("density")) p.density = v->number();
  if (auto v = r.find("specific_heat")) p.specific_heat = v->number();
  if (auto v = r.find("max_power")) p.max_power = v->number();
  if (auto v = r.find("tick")) p.tick = v->number();
  p.validate(r.path());
  return p;
}

inline json to_json(const PlantParams& p) {
  return {{"volume", p.volume},
          {"density", p.density},
          {"specific_heat", p.specific_heat},
          {"max_power", p.max_power},
          {"tick", p.tick}};
}

inline SpiConfig read_spi(const Reader& r) {
  r.only({"id", "hazard_limit", "margin_fraction", "margin_base", "window", "threshold"});
  SpiConfig s;
  if (auto v = r.find("id")) s.id = v->string();
  if (auto v = r.find("hazard_limit")) s.predicate.hazard_limit = v->number();
  if (auto v = r.find("margin_fraction")) s.predicate.margin_fraction = v->number();
  if (auto v = r.find("margin_base")) {
    const auto b = v->string();
    if (b == "celsius")
      s.predicate.base = MarginBase::celsius;
    else if (b == "kelvin")
      s.predicate.base = MarginBase::kelvin;
    else
      v->fail("expected celsius or kelvin");
  }
  if (auto v = r.find("window")) s.window = v->number();
  if (auto v = r.find("threshold")) s.threshold = v->number();
  s.validate(r.path());
  return s;
}

inline AdmissionPolicy read_admission(const Reader& r) {
  r.only({"window", "min_samples", "confidence_z"});
  AdmissionPolicy p;
  if (auto v = r.find("window")) p.window = v->number();
  if (auto v = r.find("min_samples")) p.min_samples = v->unsigned_integer();
  if (auto v = r.find("confidence_z")) p.confidence_z = v->number();
  p.validate(r.path());
  return p;
}

inline AdaptationGoal read_goal(const Reader& r) {
  r.only({"rise_time_limit", "settle_band"});
  AdaptationGoal g;
  if (auto v = r.find("rise_time_limit")) g.rise_time_limit = v->number();
  if (auto v = r.find("settle_band")) g.settle_band = v->number();
  g.validate(r.path());
  return g;
}

// ---------------------------------------------------------------------------
// Scenarios and networks
// ---------------------------------------------------------------------------

/// Either a bare [[t, v], ...] list (piecewise constant) or
/// {"interpolation": "linear", "points": [[t, v], ...]}.
inline SignalTrace read_trace(const Reader& r) {
  SignalTrace t;
  Reader pts = r;
  if (r.is_object()) {
    r.only({"interpolation", "points"});
    if (auto i = r.find("interpolation")) {
      const auto s = i->string();
      if (s == "linear")
        t.interpolation = Interpolation::linear;
      else if (s != "constant")
        i->fail("expected constant or linear");
    }
    pts = r.at("points");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto p = pts[i];
    if (p.size() != 2) p.fail("expected [time, value]");
    t.points.push_back({p[0].number(), p[1].number()});
  }
  t.validate(r.path());
  return t;
}

inline json to_json(const SignalTrace& t) {
  json pts = json::array();
  for (const auto& p : t.points) pts.push_back(json::array({p.time, p.value}));
  if (t.interpolation == Interpolation::constant) return pts;
  return {{"interpolation", "linear"}, {"points", pts}};
}

inline Scenario read_scenario(const Reader& r) {
  r.only({"id", "tick", "duration", "setpoint_schedule", "inflow_temp_trace", "inflow_rate_trace", "seed",
          "guard_enabled", "initial_tank_temp", "noise", "manual_triggers", "controller_override"});
  Scenario s;
  s.id = r.at("id").string();
  if (auto v = r.find("tick")) s.tick = v->number();
  s.duration = r.at("duration").number();
  s.setpoint_schedule = read_trace(r.at("setpoint_schedule"));
  s.inflow_temp_trace = read_trace(r.at("inflow_temp_trace"));
  s.inflow_rate_trace = read_trace(r.at("inflow_rate_trace"));
  if (auto v = r.find("seed")) s.seed = v->unsigned_integer();
  if (auto v = r.find("guard_enabled")) s.guard_enabled = v->boolean();
  if (auto v = r.find("initial_tank_temp")) s.initial_tank_temp = v->number();
  if (auto n = r.find("noise")) {
    n->only({"inflow_temp", "inflow_rate"});
    if (auto v = n->find("inflow_temp")) s.inflow_temp_noise = v->number();
    if (auto v = n->find("inflow_rate")) s.inflow_rate_noise = v->number();
  }
  if (auto ms = r.find("manual_triggers")) {
    for (std::size_t i = 0; i < ms->size(); ++i) {
      const auto m = (*ms)[i];
      m.only({"time", "option"});
      ManualTrigger t{m.at("time").number(), std::nullopt};
      if (auto o = m.find("option")) t.option_id = o->string();
      s.manual_triggers.push_back(t);
    }
  }
  if (auto c = r.find("controller_override")) s.controller_override = read_configuration(*c);
  s.validate(r.path().empty() ? "scenario" : r.path());
  return s;
}

inline json to_json(const Scenario& s) {
  json j{{"id", s.id},
         {"tick", s.tick},
         {"duration", s.duration},
         {"setpoint_schedule", to_json(s.setpoint_schedule)},
         {"inflow_temp_trace", to_json(s.inflow_temp_trace)},
         {"inflow_rate_trace", to_json(s.inflow_rate_trace)},
         {"seed", s.seed},
         {"guard_enabled", s.guard_enabled}};
  if (s.initial_tank_temp) j["initial_tank_temp"] = *s.initial_tank_temp;
  if (s.inflow_temp_noise != 0.0 || s.inflow_rate_noise != 0.0)
    j["noise"] = {{"inflow_temp", s.inflow_temp_noise}, {"inflow_rate", s.inflow_rate_noise}};
  if (!s.manual_triggers.empty()) {
    json ms = json::array();
    for (const auto& m : s.manual_triggers) {
      json t{{"time", m.time}};
      if (m.option_id) t["option"] = *m.option_id;
      ms.push_back(t);
    }
    j["manual_triggers"] = ms;
  }
  if (s.controller_override) j["controller_override"] = to_json(*s.controller_override);
  return j;
}

inline Scenario load_scenario(const std::string& path) { return read_scenario(Reader(load_json(path), "")); }

/// Accepts a parametric-net configuration or {"layer_sizes", "weights"}.
inline NetControllerSpec read_net(const Reader& r) {
  if (r.has("controller_kind")) {
    const auto c = read_configuration(r);
    if (c.controller_kind != ControllerKind::parametric_net) r.at("controller_kind").fail("expected parametric-net");
    try {
      return net_from_config(c);
    } catch (const ValidationError& e) {
      throw ValidationError(e.message(), e.path().empty() ? "parameters" : e.path());
    }
  }
  r.only({"layer_sizes", "activation", "weights"});
  NetControllerSpec s;
  const auto ls = r.at("layer_sizes");
  for (std::size_t i = 0; i < ls.size(); ++i) s.hyper.layer_sizes.push_back(static_cast<int>(ls[i].integer()));
  if (auto a = r.find("activation"))
    if (a->string() != "tanh") a->fail("only tanh is supported");
  const auto ws = r.at("weights");
  for (std::size_t i = 0; i < ws.size(); ++i) s.weights.push_back(ws[i].number());
  validate_net(s, r.path().empty() ? "net" : r.path());
  return s;
}

inline json to_json(const NetControllerSpec& s) {
  return {{"layer_sizes", s.hyper.layer_sizes}, {"activation", "tanh"}, {"weights", s.weights}};
}

// ---------------------------------------------------------------------------
// Decisions and verdicts
// ---------------------------------------------------------------------------

inline json to_json(const AdmissionReport& r) {
  json vars = json::array();
  for (const auto& v : r.variables)
    vars.push_back({{"variable", v.variable},
                    {"n", v.n},
                    {"mean", v.mean},
                    {"stddev", v.stddev},
                    {"min", v.min},
                    {"max", v.max},
                    {"low", bound_json(v.bound.low)},
                    {"high", bound_json(v.bound.high)},
                    {"lcb", v.lcb},
                    {"ucb", v.ucb},
                    {"pass", v.pass}});
  return {{"outcome", to_string(r.outcome)}, {"samples", r.samples}, {"span", r.span}, {"variables", vars}};
}

inline json to_json(const AdaptationDecision& d) {
  json j{{"time", d.time},
         {"trigger", to_string(d.trigger)},
         {"chosen_option", d.chosen_option ? json(*d.chosen_option) : json(nullptr)},
         {"assessment_evidence", d.assessment_evidence},
         {"applied", d.applied},
         {"reason", d.reason}};
  if (d.requested_option) j["requested_option"] = *d.requested_option;
  if (d.configuration) j["configuration"] = to_json(*d.configuration);
  if (d.admission) j["admission"] = to_json(*d.admission);
  if (!d.candidates.empty()) {
    json cs = json::array();
    for (const auto& c : d.candidates)
      cs.push_back({{"id", c.id},
                    {"payload_ref", c.payload_ref},
                    {"verdict", to_string(c.verdict)},
                    {"evidence", c.evidence_id},
                    {"reason", c.reason}});
    j["candidates"] = cs;
  }
  return j;
}

inline json to_json(const Classification& c) {
  json j{{"type", c.type ? json(to_string(*c.type)) : json(nullptr)},
         {"nearest", to_string(c.nearest)},
         {"matched_criteria", c.matched_criteria}};
  if (!c.ok()) j["unmet_criterion"] = c.unmet_criterion;
  return j;
}

inline json to_json(const TaxonomyVerdict& v) {
  json j{{"model_id", v.model_id},
         {"classification", to_json(v.classification)},
         {"required_obligations", v.required_obligations}};
  if (v.discharge) {
    json d = json::object();
    for (const auto& [id, s] : *v.discharge) d[id] = to_string(s);
    j["discharge"] = d;
  }
  j["all_discharged"] = v.all_discharged();
  return j;
}

}  // namespace adaptsafe::io
