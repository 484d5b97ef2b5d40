// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>

#include "adaptsafe/adaptsafe.hpp"
#include "oracles.hpp"

using namespace adaptsafe;

namespace {

const std::string kCorpus = ADAPTSAFE_CORPUS_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) detail = what;
    pass = pass && cond;
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SystemDescription system_of(const std::string& dir) { return io::load_system(kCorpus + "/" + dir + "/system.json"); }
Scenario scenario_of(const std::string& dir) { return io::load_scenario(kCorpus + "/" + dir + "/scenario.json"); }

SignalTrace steps(oracle::Rng& rng, double duration, double lo, double hi, int n) {
  SignalTrace t;
  double at = 0.0;
  for (int i = 0; i < n && at < duration; ++i) {
    t.points.push_back({at, std::round(rng.uniform(lo, hi))});
    at += rng.uniform(120.0, 600.0);
  }
  return t;
}

// 1. Guard supremacy under adversarial gains.
Outcome guard_supremacy() {
  Outcome v;
  const auto start = std::chrono::steady_clock::now();
  const auto sys = system_of("type0");
  oracle::Rng rng(2024);
  int runs = 0, tripped = 0;
  double worst_delay = 0.0;
  for (; runs < 50; ++runs) {
    Scenario s;
    s.id = "adversarial-" + std::to_string(runs);
    s.duration = 900.0;
    s.seed = static_cast<std::uint64_t>(runs);
    s.initial_tank_temp = rng.uniform(40.0, 88.0);
    s.setpoint_schedule = {{{0.0, rng.uniform(50.0, 85.0)}, {rng.uniform(10.0, 300.0), rng.uniform(91.0, 120.0)}},
                           Interpolation::constant};
    // Inflow conditions under which full power can drive the tank past the limit.
    s.inflow_temp_trace = SignalTrace::constant(rng.uniform(10.0, 40.0));
    s.inflow_rate_trace = SignalTrace::constant(rng.uniform(0.01, 0.08));
    s.inflow_temp_noise = rng.uniform(0.0, 2.0);
    s.controller_override = PidConfig{rng.uniform(1e4, 1e6), rng.uniform(0.0, 1e4), rng.uniform(0.0, 1e4)}.to_config();
    const auto r = run_scenario(s, sys);
    v.require(r.hazard_count() == 0, fmt("run %d: %lld hazards", runs, static_cast<long long>(r.hazard_count())));
    const TraceRow* first_over = nullptr;
    const TraceRow* first_trip = nullptr;
    for (const auto& row : r.trace) {
      if (!first_over && row.outflow_temp > kHazardTemp) first_over = &row;
      if (!first_trip && row.guard_tripped) first_trip = &row;
    }
    if (first_over) {
      v.require(first_trip != nullptr, fmt("run %d: over the limit but no trip", runs));
      if (!first_trip) continue;
      ++tripped;
      worst_delay = std::max(worst_delay, first_trip->t - first_over->t);
      v.require(first_trip->t - first_over->t <= 2.0 + 1e-9, fmt("run %d: trip delay %.1f s", runs, first_trip->t - first_over->t));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(tripped >= 45, fmt("only %d of %d runs reached the limit", tripped, runs));
  v.require(secs < 30.0, fmt("took %.1f s", secs));
  if (!v.pass) v.detail += fmt(" (%.1f s)", secs);
  if (v.pass)
    v.detail = fmt("%d runs, %d trips, 0 hazards, worst trip delay %.1f s, %.1f s", runs, tripped, worst_delay, secs);
  return v;
}

// 2. Static assurance never leaves the enumerated option set.
Outcome closed_option_set() {
  Outcome v;
  const auto sys = system_of("type1");
  const auto& model = sys.active_model();
  if (!model.options || model.options->size() != 10) {
    v.require(false, "model does not enumerate 10 options");
    return v;
  }
  const std::vector<std::string> rogue{"opt-99", "opt-0", "opt-11", "gain-max", ""};
  oracle::Rng rng(7);
  int applied = 0, violations = 0, refused = 0;
  for (int run = 0; run < 12; ++run) {
    Scenario s;
    s.id = "triggers-" + std::to_string(run);
    s.duration = 1800.0;
    s.seed = static_cast<std::uint64_t>(run);
    s.setpoint_schedule = steps(rng, s.duration, 25.0, 75.0, 8);
    s.inflow_temp_trace = SignalTrace::constant(rng.uniform(0.0, 30.0));
    s.inflow_rate_trace = SignalTrace::constant(rng.uniform(0.02, 0.2));
    s.inflow_temp_noise = 0.5;
    for (double t = rng.uniform(30, 200); t < s.duration; t += rng.uniform(60, 400)) {
      const int pick = rng.integer(0, 2);
      std::optional<std::string> id;
      if (pick == 1) id = (*model.options)[static_cast<std::size_t>(rng.integer(0, 9))].id;
      if (pick == 2) id = rogue[static_cast<std::size_t>(rng.integer(0, 4))];
      s.manual_triggers.push_back({t, id});
    }
    const auto r = run_scenario(s, sys);
    for (const auto& d : r.decisions) {
      if (d.trigger == Trigger::goal_violation) ++violations;
      if (d.applied) {
        ++applied;
        const auto* o = model.find_option(*d.chosen_option);
        v.require(o != nullptr, "applied non-enumerated option " + *d.chosen_option);
        if (o) v.require(d.configuration->parameters == o->assignment, "applied assignment differs from " + o->id);
      }
      if (d.requested_option && !model.find_option(*d.requested_option)) {
        ++refused;
        v.require(!d.applied && d.reason.find("TI.B1") != std::string::npos,
                  "rogue '" + *d.requested_option + "' not refused: " + d.reason);
      }
    }
    v.require(r.criteria.closed_option_set, "run " + std::to_string(run) + " left the option set");
  }
  v.require(violations > 0, "no goal-violation triggers occurred");
  v.require(applied > 0, "no adaptation was applied");
  v.require(refused > 0, "no rogue request was made");
  if (v.pass) v.detail = fmt("%d applied (all enumerated), %d goal violations, %d rogue requests refused", applied, violations, refused);
  return v;
}

// 3. Constrained assurance on the cold-climate corpus scenario.
Outcome constrained_assurance() {
  Outcome v;
  const auto sys = system_of("type2");
  const auto base = scenario_of("type2");
  double ucb = 0.0, invalid_after = 0.0;
  std::size_t samples = 0;
  for (std::uint64_t seed : {base.seed, std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{3}}) {
    const auto r = run_scenario(base, sys, {seed, true});
    int applied9 = 0;
    for (const auto& d : r.decisions) {
      if (!d.applied || d.chosen_option != "opt-9") continue;
      ++applied9;
      v.require(d.admission && d.admission->admit(), "option 9 applied without admission");
      if (!d.admission) continue;
      v.require(d.admission->samples >= 300, fmt("admitted on %zu samples", d.admission->samples));
      for (const auto& var : d.admission->variables)
        if (var.variable == "inflow_temp") {
          v.require(var.ucb <= 2.0, fmt("upper confidence bound %.3f", var.ucb));
          if (seed == base.seed) ucb = var.ucb, samples = d.admission->samples;
        }
    }
    v.require(applied9 == 1, fmt("seed %llu: option 9 applied %d times", static_cast<unsigned long long>(seed), applied9));
    v.require(r.criteria.constraints_monotone, "constraint contexts relaxed");
    for (std::size_t i = 1; i < r.constraints.size(); ++i)
      v.require(domain_subset(r.constraints[i].domain, r.constraints[i - 1].domain), "constraint sequence not decreasing");

    double warm = -1.0;
    for (const auto& row : r.trace)
      if (row.inflow_temp > 2.0) {
        warm = row.t;
        break;
      }
    v.require(warm >= 0.0, "inflow never warmed past 2 degC");
    double c1 = -1.0;
    for (const auto& p : r.validity)
      if (p.time >= warm && std::find(p.failing_nodes.begin(), p.failing_nodes.end(), "C1") != p.failing_nodes.end()) {
        c1 = p.time;
        break;
      }
    v.require(c1 >= 0.0 && c1 - warm <= sys.evidence_freshness, "constraint node never failed after warming");
    if (seed == base.seed) invalid_after = c1 - warm;
  }
  if (v.pass)
    v.detail = fmt("option 9 admitted on %zu samples, UCB %.3f degC, constraints monotone, C1 invalid %.1f s after warming",
                   samples, ucb, invalid_after);
  return v;
}

// 4. Dynamic assurance: assessment gates every activation; SPI breach fails safe.
Outcome dynamic_assurance() {
  Outcome v;
  const auto sys = system_of("type3");
  const auto r = run_scenario(scenario_of("type3"), sys);
  std::size_t proposals = 0, failed = 0, activations = 0;
  for (const auto& d : r.decisions) {
    proposals += d.candidates.size();
    for (const auto& c : d.candidates) failed += c.verdict == Verdict::fail;
    if (!d.applied || d.trigger == Trigger::spi_breach) continue;
    ++activations;
    for (const auto& c : d.candidates)
      if (c.id == *d.chosen_option) v.require(c.verdict == Verdict::pass, "failed candidate activated");
    const auto hash = payload_hash(net_from_config(*d.configuration));
    bool backed = false;
    for (const auto& id : d.assessment_evidence) {
      auto it = r.final_case.evidence.find(id);
      backed = backed || (it != r.final_case.evidence.end() && it->second.verdict == Verdict::pass &&
                          it->second.kind == EvidenceKind::runtime_assessment && it->second.payload_ref == hash);
    }
    v.require(backed, fmt("activation at %.1f s lacks pass assessment evidence", d.time));
  }
  v.require(proposals >= 200, fmt("only %zu proposals", proposals));
  v.require(failed > 0, "no candidate failed assessment, so the gate was never exercised");
  v.require(r.criteria.never_applied_failed, "a failed candidate became active");
  v.require(!r.spi_breaches.empty(), "near-limit episode did not breach the SPI");
  for (const auto& b : r.spi_breaches) {
    v.require(b.accumulated > 60.0, "breach below threshold");
    bool next_ok = false;
    for (const auto& row : r.trace)
      if (row.t > b.time + 1e-9) {
        next_ok = row.t - b.time <= 0.1 + 1e-9 && row.active_option == sys.initial_option_id;
        break;
      }
    v.require(next_ok, fmt("breach at %.1f s not followed by the baseline within one tick", b.time));
  }
  v.require(r.hazard_count() == 0, "hazard during the run");
  if (v.pass)
    v.detail = fmt("%zu proposals, %zu failed, %zu activations all backed by pass evidence, %zu breaches each fail-safe next tick",
                   proposals, failed, activations, r.spi_breaches.size());
  return v;
}

// 5. Integrator against a 100x finer replay.
Outcome integrator_oracle() {
  Outcome v;
  double worst = 0.0;
  for (const char* dir : {"type0", "type1", "type2", "type3"}) {
    const auto sys = system_of(dir);
    const auto s = scenario_of(dir);
    const auto r = run_scenario(s, sys);
    std::vector<oracle::ReplayInput> in;
    for (const auto& row : r.trace) in.push_back({row.inflow_temp, row.valve_open ? row.inflow_rate : 0.0, row.power});
    const auto fine = oracle::fine_replay(r.trace.front().outflow_temp, in, sys.plant.volume, sys.plant.density,
                                          sys.plant.specific_heat, s.tick, 100);
    for (std::size_t k = 0; k < fine.size(); ++k) {
      const double sim = k + 1 < r.trace.size() ? r.trace[k + 1].outflow_temp : r.final_state.tank_temp;
      worst = std::max(worst, std::abs(sim - fine[k]));
    }
  }
  v.require(worst <= 0.05, fmt("max deviation %.4f degC", worst));

  const auto hand = run_scenario(io::load_scenario(kCorpus + "/hand/steady_state.json"), system_of("hand"));
  bool steady = !hand.trace.empty();
  for (const auto& row : hand.trace) steady = steady && fmt("%.3f", row.outflow_temp) == "20.000";
  steady = steady && fmt("%.3f", hand.final_state.tank_temp) == "20.000";
  v.require(steady, "hand steady state drifted from 20.000");
  if (v.pass) v.detail = fmt("max deviation %.2e degC over 4 x 3600 s runs; hand steady state 20.000", worst);
  return v;
}

// 6. Taxonomy golden tests and brute force.
Outcome taxonomy() {
  Outcome v;
  AdaptationDescriptor t0;
  t0.independence_argued = true;
  AdaptationDescriptor t1;
  t1.affects_safety_critical = t1.options_enumerated_at_design_time = true;
  t1.design_time_safety = DesignTimeSafety::unconditional;
  AdaptationDescriptor t2 = t1;
  t2.design_time_safety = DesignTimeSafety::domain_conditional;
  t2.domain_constraints_declared = true;
  AdaptationDescriptor t3;
  t3.affects_safety_critical = t3.runtime_assessment_declared = t3.case_in_knowledge_repo = true;
  const std::pair<AdaptationDescriptor, AdaptationType> golden[] = {
      {t0, AdaptationType::t0}, {t1, AdaptationType::t1}, {t2, AdaptationType::t2}, {t3, AdaptationType::t3}};
  for (const auto& [d, t] : golden) v.require(classify(d).type == t, "golden descriptor misclassified");

  const std::pair<AdaptationType, std::size_t> sizes[] = {
      {AdaptationType::t0, 2}, {AdaptationType::t1, 4}, {AdaptationType::t2, 5}, {AdaptationType::t3, 7}};
  for (const auto& [t, n] : sizes) {
    const auto ids = obligations_for(t);
    v.require(ids.size() == n && ids == oracle::table_obligations(std::string(to_string(t))),
              "obligation set differs for " + std::string(to_string(t)));
  }

  int well_formed = 0, typed = 0;
  for (int bits = 0; bits < 64; ++bits)
    for (int safety = 0; safety < 3; ++safety) {
      const oracle::Desc o{bool(bits & 1), bool(bits & 2), bool(bits & 4), safety, bool(bits & 8), bool(bits & 16), bool(bits & 32)};
      const AdaptationDescriptor d{o.affects, o.independence, o.enumerated, static_cast<DesignTimeSafety>(safety),
                                   o.constraints, o.runtime, o.in_repo};
      if (!d.well_formed()) continue;
      ++well_formed;
      const auto expect = oracle::matching_types(o);
      v.require(expect.size() <= 1, "two types match one descriptor");
      const auto c = classify(d);
      v.require(c.ok() == (expect.size() == 1), "classify disagrees with brute force");
      if (c.ok() && expect.size() == 1) {
        v.require(std::string(to_string(*c.type)) == expect.front(), "classify picked the wrong type");
        ++typed;
      }
    }
  if (v.pass)
    v.detail = fmt("4 golden descriptors, obligation sets 2/4/5/7, %d well-formed descriptors (%d typed, %d errors)",
                   well_formed, typed, well_formed - typed);
  return v;
}

// 7. Byte-identical traces.
Outcome determinism() {
  Outcome v;
  int pairs = 0;
  for (const char* dir : {"type0", "type1", "type2", "type3"}) {
    const auto sys = system_of(dir);
    const auto s = scenario_of(dir);
    for (std::uint64_t seed : {s.seed, std::uint64_t{99}}) {
      const auto a = run_scenario(s, sys, {seed, true});
      const auto b = run_scenario(s, sys, {seed, true});
      v.require(trace_csv(a.trace) == trace_csv(b.trace), fmt("%s seed %llu: traces differ", dir, static_cast<unsigned long long>(seed)));
      v.require(io::report_json(a).dump() == io::report_json(b).dump(), fmt("%s: reports differ", dir));
      ++pairs;
    }
  }
  if (v.pass) v.detail = fmt("%d (scenario, system, seed) triples reproduced byte for byte", pairs);
  return v;
}

// 8. Assurance property suite.
Outcome property_suite() {
  Outcome v;
  const std::string cmd = std::string("\"") + ADAPTSAFE_PROPERTY_TESTS + "\" \"[assurance]\" > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  v.require(rc == 0, "property_tests [assurance] failed; run it directly for details");
  if (v.pass) v.detail = "static immutability, evidence monotonicity and freshness boundary at 10000 cases each";
  return v;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"guard supremacy", guard_supremacy},       {"closed option set", closed_option_set},
      {"constrained assurance", constrained_assurance}, {"dynamic assurance", dynamic_assurance},
      {"integrator oracle", integrator_oracle},   {"taxonomy", taxonomy},
      {"determinism", determinism},               {"validity semantics", property_suite},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Outcome v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", n, name, v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
