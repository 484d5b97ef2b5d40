#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "adaptsafe/controller.hpp"
#include "adaptsafe/errors.hpp"
#include "adaptsafe/goal.hpp"
#include "adaptsafe/knowledge.hpp"
#include "adaptsafe/managed_loop.hpp"
#include "adaptsafe/model.hpp"
#include "adaptsafe/safety_case.hpp"
#include "adaptsafe/scenario.hpp"
#include "adaptsafe/taxonomy_table.hpp"

namespace adaptsafe {

/// Default freshness of run-time evidence.
inline constexpr double kRuntimeFreshness = 3600.0;  // s

// ---------------------------------------------------------------------------
// Statistical admission (constrained assurance)
// ---------------------------------------------------------------------------

struct AdmissionPolicy {
  double window = 300.0;  // s
  std::size_t min_samples = 300;
  double confidence_z = 2.326;  // one-sided 99%

  void validate(const std::string& path = "admission") const {
    if (!(window > 0.0)) throw ValidationError("window must be > 0", path + ".window");
    if (min_samples < 2) throw ValidationError("min_samples must be >= 2", path + ".min_samples");
    if (!(confidence_z > 0.0)) throw ValidationError("confidence_z must be > 0", path + ".confidence_z");
  }

  friend bool operator==(const AdmissionPolicy&, const AdmissionPolicy&) = default;
};

inline double upper_confidence_bound(double mean, double stddev, std::size_t n, double z) {
  return mean + z * stddev / std::sqrt(static_cast<double>(n));
}

inline double lower_confidence_bound(double mean, double stddev, std::size_t n, double z) {
  return mean - z * stddev / std::sqrt(static_cast<double>(n));
}

struct VariableStats {
  std::string variable;
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) standard deviation
  double min = 0.0;
  double max = 0.0;
  Interval bound;
  double lcb = 0.0;
  double ucb = 0.0;
  bool pass = false;
};

enum class AdmissionOutcome { admit, reject, not_ready };

inline std::string_view to_string(AdmissionOutcome o) {
  switch (o) {
    case AdmissionOutcome::admit: return "admit";
    case AdmissionOutcome::reject: return "reject";
    case AdmissionOutcome::not_ready: return "not-ready";
  }
  return "?";
}

struct AdmissionReport {
  AdmissionOutcome outcome = AdmissionOutcome::not_ready;
  std::size_t samples = 0;
  double span = 0.0;  // s
  std::vector<VariableStats> variables;

  bool admit() const noexcept { return outcome == AdmissionOutcome::admit; }
};

/// Admits a domain when, for every bounded side of every axis, both the
/// one-sided confidence bound on the mean and the observed extreme lie inside
/// the bound. `samples` must be the most recent window, oldest first.
inline AdmissionReport admission_test(std::span<const EnvironmentSample> samples, const OperationalDomain& domain,
                                      const AdmissionPolicy& policy) {
  AdmissionReport r;
  r.samples = samples.size();
  if (samples.size() >= 2) {
    const double covered = samples.back().time - samples.front().time;
    r.span = covered * static_cast<double>(samples.size()) / static_cast<double>(samples.size() - 1);
  }
  if (samples.size() < policy.min_samples || r.span < policy.window - 1e-6) return r;

  bool all = true;
  for (const auto& [name, bound] : domain.bounds) {
    VariableStats v;
    v.variable = name;
    v.bound = bound;
    v.n = samples.size();
    v.min = std::numeric_limits<double>::infinity();
    v.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& s : samples) {
      const double x = s.variable(name);
      sum += x;
      v.min = std::min(v.min, x);
      v.max = std::max(v.max, x);
    }
    v.mean = sum / static_cast<double>(v.n);
    double ss = 0.0;
    for (const auto& s : samples) ss += (s.variable(name) - v.mean) * (s.variable(name) - v.mean);
    v.stddev = std::sqrt(ss / static_cast<double>(v.n - 1));
    v.ucb = upper_confidence_bound(v.mean, v.stddev, v.n, policy.confidence_z);
    v.lcb = lower_confidence_bound(v.mean, v.stddev, v.n, policy.confidence_z);
    v.pass = true;
    if (bound.bounded_high()) v.pass = v.pass && v.ucb <= bound.high && v.max <= bound.high;
    if (bound.bounded_low()) v.pass = v.pass && v.lcb >= bound.low && v.min >= bound.low;
    all = all && v.pass;
    r.variables.push_back(v);
  }
  r.outcome = all ? AdmissionOutcome::admit : AdmissionOutcome::reject;
  return r;
}

// ---------------------------------------------------------------------------
// Decisions
// ---------------------------------------------------------------------------

enum class Trigger { goal_violation, spi_breach, manual };

inline std::string_view to_string(Trigger t) {
  switch (t) {
    case Trigger::goal_violation: return "goal-violation";
    case Trigger::spi_breach: return "spi-breach";
    case Trigger::manual: return "manual";
  }
  return "?";
}

struct CandidateRecord {
  std::string id;
  std::string payload_ref;
  Verdict verdict = Verdict::fail;
  std::string evidence_id;
  std::string reason;
};

struct AdaptationDecision {
  double time = 0.0;
  Trigger trigger = Trigger::manual;
  std::optional<std::string> requested_option;
  std::optional<std::string> chosen_option;
  std::vector<std::string> assessment_evidence;
  bool applied = false;
  std::string reason;
  std::optional<SystemConfiguration> configuration;
  std::optional<AdmissionReport> admission;
  std::vector<CandidateRecord> candidates;
};

/// A decision plus everything the Executor needs to carry it out.
struct AdaptationPlan {
  AdaptationDecision decision;
  AdaptationType type = AdaptationType::t1;
  ControllerKind kind = ControllerKind::pid;
  std::optional<AdaptationAction> action;
  std::vector<EvidenceItem> evidence;
  std::optional<OperationalDomain> constraints;
};

namespace detail {

inline double rise_or_inf(const AdaptationOption& o) {
  return o.design_rise_time.value_or(std::numeric_limits<double>::infinity());
}

/// Smallest recorded rise time, ties to the lowest id.
inline const AdaptationOption* best_option(const std::vector<const AdaptationOption*>& eligible) {
  const AdaptationOption* best = nullptr;
  for (const auto* o : eligible) {
    if (!best || rise_or_inf(*o) < rise_or_inf(*best) || (rise_or_inf(*o) == rise_or_inf(*best) && o->id < best->id))
      best = o;
  }
  return best;
}

inline bool strictly_better(const AdaptationOption& candidate, const AdaptationOption* active) {
  return !active || rise_or_inf(candidate) < rise_or_inf(*active);
}

inline AdaptationPlan start_plan(AdaptationType type, const AdaptationModel& model, Trigger trigger,
                                 std::optional<std::string> requested, double now) {
  AdaptationPlan p;
  p.type = type;
  p.kind = model.controller_kind;
  p.decision.time = now;
  p.decision.trigger = trigger;
  p.decision.requested_option = std::move(requested);
  return p;
}

inline void choose(AdaptationPlan& p, const AdaptationOption& o) {
  p.decision.chosen_option = o.id;
  p.decision.configuration = SystemConfiguration{p.kind, o.assignment};
  p.action = make_action(o.id, o.assignment, post_steps_for(p.type));
}

}  // namespace detail

/// Static-assurance policy: only ever picks one of the model's enumerated
/// options. Also used for non-interfering (Type 0) models that list options.
inline AdaptationPlan plan_type1(const AdaptationModel& model, const std::string& active_option, Trigger trigger,
                                 const std::optional<std::string>& requested, double now,
                                 AdaptationType type = AdaptationType::t1) {
  auto p = detail::start_plan(type, model, trigger, requested, now);
  if (!model.options || model.options->empty()) {
    p.decision.reason = "model '" + model.id + "' has no design-time options";
    return p;
  }
  const auto* active = model.find_option(active_option);
  if (requested) {
    const auto* o = model.find_option(*requested);
    if (!o) {
      p.decision.reason = "refused: option '" + *requested + "' is not a design-time option (TI.B1)";
      return p;
    }
    if (o == active) {
      p.decision.reason = "option '" + *requested + "' is already active";
      return p;
    }
    detail::choose(p, *o);
    p.decision.reason = "requested design-time option";
    return p;
  }
  std::vector<const AdaptationOption*> eligible;
  for (const auto& o : *model.options)
    if (&o != active) eligible.push_back(&o);
  const auto* best = detail::best_option(eligible);
  if (!best || !detail::strictly_better(*best, active)) {
    p.decision.reason = "no better option available";
    return p;
  }
  detail::choose(p, *best);
  p.decision.reason = "fastest design-time rise time";
  return p;
}

struct EvidenceIdSource {
  std::string prefix = "ev";
  std::uint64_t next_id = 1;

  std::string next(std::string_view kind) { return prefix + "-" + std::string(kind) + "-" + std::to_string(next_id++); }
};

inline EvidenceItem admission_evidence(const std::string& id, const std::string& option_id, const AdmissionReport& r,
                                       double now, double freshness) {
  char payload[160];
  std::snprintf(payload, sizeof payload, "admission:%s:n=%zu:%s", option_id.c_str(), r.samples,
                std::string(to_string(r.outcome)).c_str());
  return {id, EvidenceKind::runtime_observation, r.admit() ? Verdict::pass : Verdict::fail, now, freshness, payload};
}

/// Constrained-assurance policy. An option is eligible only if it narrows the
/// current constraints (monotone domain restriction) and the recent samples
/// admit its domain.
inline AdaptationPlan plan_type2(const AdaptationModel& model, const std::string& active_option,
                                 std::span<const EnvironmentSample> window, const AdmissionPolicy& policy,
                                 const SafetyCase& safety_case, Trigger trigger,
                                 const std::optional<std::string>& requested, double now, EvidenceIdSource& ids,
                                 double freshness = kRuntimeFreshness) {
  auto p = detail::start_plan(AdaptationType::t2, model, trigger, requested, now);
  if (!model.options || model.options->empty()) {
    p.decision.reason = "model '" + model.id + "' has no design-time options";
    return p;
  }
  const auto current = current_constraints(safety_case);
  const auto* active = model.find_option(active_option);

  std::vector<const AdaptationOption*> pool;
  if (requested) {
    const auto* o = model.find_option(*requested);
    if (!o) {
      p.decision.reason = "refused: option '" + *requested + "' is not a design-time option (TII.B1)";
      return p;
    }
    if (o == active) {
      p.decision.reason = "option '" + *requested + "' is already active";
      return p;
    }
    if (!domain_subset(o->domain.value_or(OperationalDomain{}), current)) {
      p.decision.reason = "refused: option '" + *requested + "' would relax the operational constraints (TII.C5)";
      return p;
    }
    pool.push_back(o);
  } else {
    for (const auto& o : *model.options)
      if (&o != active && domain_subset(o.domain.value_or(OperationalDomain{}), current) &&
          detail::strictly_better(o, active))
        pool.push_back(&o);
  }

  std::vector<const AdaptationOption*> admitted;
  std::vector<AdmissionReport> reports;
  bool not_ready = false;
  for (const auto* o : pool) {
    auto r = admission_test(window, o->domain.value_or(OperationalDomain{}), policy);
    not_ready = not_ready || r.outcome == AdmissionOutcome::not_ready;
    if (r.admit()) {
      admitted.push_back(o);
      reports.push_back(std::move(r));
    }
  }
  const auto* best = detail::best_option(admitted);
  if (!best) {
    if (pool.empty())
      p.decision.reason = "no better option available";
    else if (not_ready)
      p.decision.reason = "admission not ready: " + std::to_string(window.size()) + " samples";
    else
      p.decision.reason = "no option admitted by the observed operational domain";
    return p;
  }
  const auto& report = reports[static_cast<std::size_t>(std::find(admitted.begin(), admitted.end(), best) - admitted.begin())];
  detail::choose(p, *best);
  p.decision.admission = report;
  p.constraints = best->domain.value_or(OperationalDomain{});
  p.evidence.push_back(admission_evidence(ids.next("adm"), best->id, report, now, freshness));
  p.decision.assessment_evidence.push_back(p.evidence.back().id);
  p.decision.reason = requested ? "requested option admitted" : "fastest admitted option";
  return p;
}

// ---------------------------------------------------------------------------
// Dynamic assurance: candidate search and assessment
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
  return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

inline constexpr double kWeightNoise = 0.1;
inline constexpr double kHyperMutationProbability = 0.1;

namespace detail {

/// Copies weights where old and new layers overlap; everything new is zero.
inline NetControllerSpec remap_weights(const NetControllerSpec& from, NetHyper to_hyper) {
  NetControllerSpec to{std::move(to_hyper), {}};
  to.weights.assign(net_weight_count(to.hyper), 0.0);
  const auto a = net_topology(from.hyper);
  const auto b = net_topology(to.hyper);
  // Pair layers from the input side, except that output layers always pair.
  auto offsets = [](const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> off{0};
    for (std::size_t l = 1; l < dims.size(); ++l) off.push_back(off.back() + dims[l] * dims[l - 1] + dims[l]);
    return off;
  };
  const auto oa = offsets(a);
  const auto ob = offsets(b);
  const std::size_t la = a.size() - 1;
  const std::size_t lb = b.size() - 1;
  for (std::size_t j = 1; j <= lb; ++j) {
    std::size_t i = (j == lb) ? la : j;
    if (i > la || (i == la && j != lb)) continue;
    const std::size_t in = std::min(a[i - 1], b[j - 1]);
    const std::size_t out = std::min(a[i], b[j]);
    for (std::size_t o = 0; o < out; ++o) {
      for (std::size_t k = 0; k < in; ++k) to.weights[ob[j - 1] + o * b[j - 1] + k] = from.weights[oa[i - 1] + o * a[i - 1] + k];
      to.weights[ob[j - 1] + b[j] * b[j - 1] + o] = from.weights[oa[i - 1] + a[i] * a[i - 1] + o];
    }
  }
  return to;
}

}  // namespace detail

/// Seeded perturbation. With probability 0.9 adds N(0, 0.1) noise to every
/// weight; otherwise applies exactly one hyperparameter mutation (grow or
/// shrink a layer within [1,16], or add/remove a hidden layer within [1,2]).
inline NetControllerSpec propose_candidate(const NetControllerSpec& current, std::uint64_t seed) {
  validate_net(current);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) >= kHyperMutationProbability) {
    NetControllerSpec out = current;
    std::normal_distribution<double> noise(0.0, kWeightNoise);
    for (auto& w : out.weights) w += noise(rng);
    return out;
  }

  struct Move {
    enum Kind { grow, shrink, add_layer, remove_layer } kind;
    std::size_t layer;
  };
  const auto& sizes = current.hyper.layer_sizes;
  std::vector<Move> moves;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < kMaxLayerSize) moves.push_back({Move::grow, i});
    if (sizes[i] > 1) moves.push_back({Move::shrink, i});
  }
  if (sizes.size() < static_cast<std::size_t>(kMaxHiddenLayers)) moves.push_back({Move::add_layer, sizes.size()});
  if (sizes.size() > 1) moves.push_back({Move::remove_layer, sizes.size() - 1});
  const auto move = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];

  NetHyper h = current.hyper;
  switch (move.kind) {
    case Move::grow: ++h.layer_sizes[move.layer]; break;
    case Move::shrink: --h.layer_sizes[move.layer]; break;
    case Move::add_layer: h.layer_sizes.push_back(1); break;
    case Move::remove_layer: h.layer_sizes.pop_back(); break;
  }
  return detail::remap_weights(current, std::move(h));
}

/// FNV-1a over the topology and the exact bit patterns of the weights.
inline std::string payload_hash(const NetControllerSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  feed(spec.hyper.layer_sizes.size());
  for (int s : spec.hyper.layer_sizes) feed(static_cast<std::uint64_t>(s));
  for (double w : spec.weights) {
    std::uint64_t bits;
    std::memcpy(&bits, &w, sizeof bits);
    feed(bits);
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "net:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct AssessmentSuite {
  std::vector<Scenario> scenarios;

  void validate(const std::string& path = "assessment_suite") const {
    if (scenarios.empty()) throw ValidationError("suite must contain at least one scenario", path);
    for (std::size_t i = 0; i < scenarios.size(); ++i) scenarios[i].validate(path + ".scenarios[" + std::to_string(i) + "]");
  }
};

struct ScenarioOutcome {
  std::string scenario_id;
  std::int64_t hazard_count = 0;
  std::vector<RiseRecord> rises;
  bool goal_met = true;
  bool fault = false;
  double max_temp = 0.0;
  bool pass = false;
};

/// Closed-loop run of one configuration with no managing system attached.
inline ScenarioOutcome run_managed_only(const Scenario& s, const PlantParams& plant, const SystemConfiguration& config,
                                       const AdaptationGoal& goal, bool guard_enabled) {
  ScenarioOutcome r;
  r.scenario_id = s.id;
  GoalTracker tracker(goal);
  try {
    ManagedLoop loop(s, plant, config, guard_enabled);
    r.max_temp = loop.state().tank_temp;
    while (!loop.done()) {
      const auto t = loop.step();
      tracker.observe(t.sample);
      r.max_temp = std::max(r.max_temp, t.after.tank_temp);
    }
    tracker.finish(s.duration);
    r.hazard_count = loop.state().hazard_count;
  } catch (const SimulationFault&) {
    r.fault = true;
  }
  r.rises = tracker.records();
  for (const auto& rr : r.rises) r.goal_met = r.goal_met && rr.rise_time && !rr.violation;
  r.pass = !r.fault && r.hazard_count == 0 && r.goal_met;
  return r;
}

struct Assessment {
  Verdict verdict = Verdict::fail;
  EvidenceItem evidence;
  std::vector<ScenarioOutcome> outcomes;
};

/// Runs every suite scenario with the candidate in the loop and the guard
/// disabled. Passes iff no scenario faults, none has a hazard and every
/// setpoint increase meets the goal.
inline Assessment assess_candidate(const NetControllerSpec& candidate, const AssessmentSuite& suite,
                                   const PlantParams& plant, const AdaptationGoal& goal, double now,
                                   const std::string& evidence_id, double freshness = kRuntimeFreshness) {
  suite.validate();
  Assessment a;
  bool pass = true;
  const auto config = to_config(candidate);
  for (const auto& s : suite.scenarios) {
    a.outcomes.push_back(run_managed_only(s, plant, config, goal, false));
    pass = pass && a.outcomes.back().pass;
  }
  a.verdict = pass ? Verdict::pass : Verdict::fail;
  a.evidence = {evidence_id, EvidenceKind::runtime_assessment, a.verdict, now, freshness, payload_hash(candidate)};
  return a;
}

struct CandidateSearch {
  std::uint64_t seed = 0;
  std::uint64_t decision_index = 0;
  std::size_t max_candidates = 8;
};

/// Dynamic-assurance policy: proposes up to `max_candidates` perturbations of
/// the active network and picks the first that passes assessment. Failed
/// candidates are recorded but never become the chosen option.
inline AdaptationPlan plan_type3(const AdaptationModel& model, const NetControllerSpec& active,
                                 const AssessmentSuite& suite, const PlantParams& plant, const AdaptationGoal& goal,
                                 Trigger trigger, const std::optional<std::string>& requested, double now,
                                 const CandidateSearch& search, EvidenceIdSource& ids,
                                 double freshness = kRuntimeFreshness) {
  auto p = detail::start_plan(AdaptationType::t3, model, trigger, requested, now);
  p.kind = ControllerKind::parametric_net;
  if (requested) {
    p.decision.reason = "refused: run-time assessed models take no requested option";
    return p;
  }
  for (std::size_t attempt = 0; attempt < search.max_candidates; ++attempt) {
    const auto candidate = propose_candidate(active, mix_seed(search.seed, search.decision_index, attempt));
    const std::string cid = "cand-" + std::to_string(search.decision_index) + "-" + std::to_string(attempt);
    auto a = assess_candidate(candidate, suite, plant, goal, now, ids.next("asm"), freshness);
    CandidateRecord rec{cid, a.evidence.payload_ref, a.verdict, a.evidence.id, {}};
    for (const auto& o : a.outcomes)
      if (!o.pass) {
        rec.reason = o.scenario_id + (o.fault ? ": non-finite output" : o.hazard_count ? ": hazard" : ": rise-time goal missed");
        break;
      }
    p.decision.candidates.push_back(rec);
    if (a.verdict != Verdict::pass) continue;
    const auto config = to_config(candidate);
    p.decision.chosen_option = cid;
    p.decision.configuration = config;
    p.decision.assessment_evidence.push_back(a.evidence.id);
    p.evidence.push_back(a.evidence);
    p.action = make_action(cid, config.parameters, post_steps_for(AdaptationType::t3));
    p.decision.reason = "candidate passed assessment";
    return p;
  }
  p.decision.reason = "no candidate passed assessment (" + std::to_string(search.max_candidates) + " tried)";
  return p;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

namespace detail {

inline std::string evidence_node_for(const SafetyCase& c, AdaptationType type) {
  const char* obligation = type == AdaptationType::t2 ? "TII.B4" : "TIII.B6";
  auto id = find_dynamic_node(c, NodeKind::solution, obligation);
  if (!id) throw StructuralError(std::string("no dynamic solution discharging ") + obligation);
  return *id;
}

inline std::string constraint_node(const SafetyCase& c) {
  const auto ids = constraint_contexts(c);
  if (ids.size() != 1) throw StructuralError("expected exactly one constraint context, found " + std::to_string(ids.size()));
  return ids.front();
}

}  // namespace detail

/// Applies a planned adaptation to a copy of the repository: the new
/// configuration, then the post-steps (case patches, SPI reset). If the case
/// rejects a patch the error propagates and `repo` is untouched.
inline KnowledgeRepository execute_adaptation(const AdaptationPlan& plan, const KnowledgeRepository& repo, double now) {
  if (!plan.action) throw Error("plan has no action to execute");
  const auto& action = *plan.action;
  std::vector<CasePatch> patches;
  bool reset_spi = false;
  std::size_t evidence_used = 0;
  for (auto step : action.post_steps) {
    switch (step) {
      case PostStep::update_case_constraints:
        if (!plan.constraints) throw Error("update-case-constraints without constraints");
        patches.push_back(ReplaceConstraintContext{detail::constraint_node(repo.safety_case), *plan.constraints});
        break;
      case PostStep::attach_assessment_evidence:
        if (evidence_used >= plan.evidence.size()) throw Error("attach-assessment-evidence without evidence");
        patches.push_back(AttachEvidence{detail::evidence_node_for(repo.safety_case, plan.type), plan.evidence[evidence_used++]});
        break;
      case PostStep::reset_spi: reset_spi = true; break;
    }
  }
  const auto config = action.apply(plan.kind);
  config.validate();

  KnowledgeRepository out = repo;
  if (!patches.empty()) out.safety_case = adapt_case(repo.safety_case, patches, now, "adaptation:" + action.option_id);
  out.current_config = config;
  out.active_option_id = action.option_id;
  if (reset_spi) out.reset_spi();
  return out;
}

/// Reverts to the baseline configuration, records the event as run-time
/// observation evidence on the SPI solution node when the case has one, and
/// restarts SPI monitoring.
inline KnowledgeRepository fail_safe(const KnowledgeRepository& repo, const SystemConfiguration& baseline,
                                     const std::string& baseline_id, double now, const std::string& evidence_id,
                                     double freshness = kRuntimeFreshness) {
  KnowledgeRepository out = repo;
  out.current_config = baseline;
  out.active_option_id = baseline_id;
  if (auto node = find_dynamic_node(repo.safety_case, NodeKind::solution, "TIII.B7")) {
    EvidenceItem ev{evidence_id, EvidenceKind::runtime_observation, Verdict::pass, now, freshness,
                    "fail-safe:baseline=" + baseline_id};
    out.safety_case = adapt_case(repo.safety_case, {AttachEvidence{*node, ev}}, now, "fail-safe");
  }
  out.reset_spi();
  return out;
}

}  // namespace adaptsafe
