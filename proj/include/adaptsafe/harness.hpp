#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adaptsafe/io.hpp"
#include "adaptsafe/managed_loop.hpp"
#include "adaptsafe/managing_system.hpp"
#include "adaptsafe/system.hpp"
#include "adaptsafe/taxonomy.hpp"

namespace adaptsafe {

inline constexpr const char* kTraceHeader =
    "t,inflow_temp,inflow_rate,setpoint,outflow_temp,power,valve_open,active_option,hazard_accum,hazard_count,"
    "guard_tripped,spi_near_limit,case_revision,case_valid";

/// One CSV row. Environment and outflow are the values sensed at the start of
/// the tick; power, valve and hazard fields describe the tick itself; case
/// fields are read after the managing system ran.
struct TraceRow {
  double t = 0.0;
  double inflow_temp = 0.0;
  double inflow_rate = 0.0;
  double setpoint = 0.0;
  double outflow_temp = 0.0;
  double power = 0.0;
  bool valve_open = true;
  std::string active_option;
  double hazard_accum = 0.0;
  std::int64_t hazard_count = 0;
  bool guard_tripped = false;
  double spi_near_limit = 0.0;
  std::uint64_t case_revision = 0;
  bool case_valid = false;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

inline std::string format_row(const TraceRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%d,%s,%.6f,%lld,%d,%.6f,%llu,%d", r.t, r.inflow_temp,
                r.inflow_rate, r.setpoint, r.outflow_temp, r.power, r.valve_open ? 1 : 0, r.active_option.c_str(),
                r.hazard_accum, static_cast<long long>(r.hazard_count), r.guard_tripped ? 1 : 0, r.spi_near_limit,
                static_cast<unsigned long long>(r.case_revision), r.case_valid ? 1 : 0);
  return buf;
}

inline void emit_trace(const std::vector<TraceRow>& rows, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const auto& r : rows) out << format_row(r) << '\n';
}

inline std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream os;
  emit_trace(rows, os);
  return os.str();
}

struct GuardTrip {
  double first_over_limit = 0.0;  // time of the sample that latched the guard
  double trip_time = 0.0;         // when the overrides took effect
};

struct ValidityPoint {
  double time = 0.0;
  std::uint64_t revision = 0;
  bool valid = false;
  std::vector<std::string> failing_nodes;
};

struct RuntimeCriteria {
  bool closed_option_set = true;    // every applied option was enumerated
  bool constraints_monotone = true;  // constraint contexts only narrowed
  bool never_applied_failed = true;  // no failed candidate ever active
};

struct RunResult {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::vector<TraceRow> trace;
  std::vector<AdaptationDecision> decisions;
  std::vector<RiseRecord> rises;
  std::vector<SpiBreach> spi_breaches;
  std::vector<GuardTrip> guard_trips;
  std::vector<ValidityPoint> validity;
  std::vector<ConstraintChange> constraints;
  std::vector<TaxonomyVerdict> verdicts;
  std::optional<std::string> taxonomy_error;
  RuntimeCriteria criteria;
  PlantState final_state;
  SafetyCase final_case;
  SystemConfiguration final_config;
  std::string final_option;
  double max_tank_temp = 0.0;

  std::int64_t hazard_count() const noexcept { return final_state.hazard_count; }

  bool undischarged() const {
    if (taxonomy_error) return true;
    for (const auto& v : verdicts)
      if (v.discharge && !v.all_discharged()) return true;
    return false;
  }

  /// 3 on any hazard or undischarged obligation, else 0.
  int exit_code() const { return hazard_count() > 0 || undischarged() ? 3 : 0; }
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  bool keep_trace = true;
};

namespace detail {

inline RuntimeCriteria runtime_criteria(const ManagingSystem& ms) {
  RuntimeCriteria c;
  const auto& model = ms.model();
  for (const auto& d : ms.decisions()) {
    if (!d.applied || d.trigger == Trigger::spi_breach) continue;
    if (model.options && !model.find_option(*d.chosen_option)) c.closed_option_set = false;
    if (model.controller_kind == ControllerKind::parametric_net) {
      // The applied configuration must carry a pass assessment for exactly it.
      const auto& store = ms.repo().safety_case.evidence;
      const auto hash = payload_hash(net_from_config(*d.configuration));
      bool backed = false;
      for (const auto& id : d.assessment_evidence) {
        auto it = store.find(id);
        backed = backed || (it != store.end() && it->second.verdict == Verdict::pass && it->second.payload_ref == hash);
      }
      if (ms.has_case() && !backed) c.never_applied_failed = false;
    }
  }
  for (const auto& p : ms.active_payloads())
    if (ms.failed_payloads().contains(p)) c.never_applied_failed = false;
  const auto& cs = ms.constraint_history();
  for (std::size_t i = 1; i < cs.size(); ++i)
    if (!domain_subset(cs[i].domain, cs[i - 1].domain)) c.constraints_monotone = false;
  return c;
}

}  // namespace detail

/// Runs the full pipeline for `scenario.duration / tick` ticks:
/// sense, guard, control, plant, hazard, SPI, MAPE, then one trace row.
inline RunResult run_scenario(Scenario scenario, const SystemDescription& system_in, const RunOptions& opts = {}) {
  if (opts.seed) scenario.seed = *opts.seed;
  scenario.validate();
  SystemDescription system = system_in;
  if (scenario.controller_override) {
    system.initial_configuration = *scenario.controller_override;
    system.initial_option_id = "override";
  }
  system.validate();

  RunResult r;
  r.scenario_id = scenario.id;
  r.seed = scenario.seed;
  ManagedLoop loop(scenario, system.plant, system.initial_configuration, scenario.guard_enabled);
  ManagingSystem ms(system, scenario, loop.params().tick, scenario.seed);
  r.max_tank_temp = loop.state().tank_temp;

  while (!loop.done()) {
    const auto t = loop.step();
    const auto mape = ms.on_tick(t);
    if (mape.new_config) loop.set_configuration(*mape.new_config);

    if (t.guard_latched) r.guard_trips.push_back({t.sample.time, loop.guard().trip_time.value_or(t.sample.time)});
    r.max_tank_temp = std::max(r.max_tank_temp, t.after.tank_temp);

    const auto& repo = ms.repo();
    bool valid = false;
    if (ms.has_case()) {
      auto v = ms.validity(t.sample.time);
      valid = v.valid;
      if (r.validity.empty() || r.validity.back().valid != v.valid ||
          r.validity.back().revision != repo.safety_case.revision ||
          r.validity.back().failing_nodes != v.failing_nodes)
        r.validity.push_back({t.sample.time, repo.safety_case.revision, v.valid, std::move(v.failing_nodes)});
    }
    if (opts.keep_trace) {
      TraceRow row;
      row.t = t.sample.time;
      row.inflow_temp = t.sample.inflow_temp;
      row.inflow_rate = t.sample.inflow_rate;
      row.setpoint = t.sample.setpoint;
      row.outflow_temp = t.sample.outflow_temp;
      row.power = t.power;
      row.valve_open = t.valve_open;
      row.active_option = repo.active_option_id;
      row.hazard_accum = t.after.hazard_accum;
      row.hazard_count = t.after.hazard_count;
      row.guard_tripped = t.guard_active;
      row.spi_near_limit = repo.spi_windows.empty() ? 0.0 : repo.spi_windows.front().accumulated();
      row.case_revision = repo.safety_case.revision;
      row.case_valid = valid;
      r.trace.push_back(std::move(row));
    }
  }
  const double end = scenario.time_at(scenario.tick_count());
  ms.finish_run(end);

  r.decisions = ms.decisions();
  r.rises = ms.goal_tracker().records();
  r.spi_breaches = ms.spi_breaches();
  r.constraints = ms.constraint_history();
  r.criteria = detail::runtime_criteria(ms);
  r.final_state = loop.state();
  r.final_case = ms.repo().safety_case;
  r.final_config = ms.repo().current_config;
  r.final_option = ms.repo().active_option_id;
  try {
    for (const auto& m : system.models) {
      if (m.id == system.active_model_id && ms.has_case())
        r.verdicts.push_back(make_verdict(m, ms.repo().safety_case, end, ms.repo()));
      else
        r.verdicts.push_back(make_verdict(m));
    }
    for (const auto& v : r.verdicts)
      if (v.model_id == system.active_model_id && !v.classification.ok())
        r.taxonomy_error = "model '" + v.model_id + "' unclassifiable: unmet " + v.classification.unmet_criterion;
  } catch (const Error& e) {
    r.taxonomy_error = e.what();
  }
  return r;
}

namespace io {

inline json report_json(const RunResult& r) {
  json decisions = json::array();
  for (const auto& d : r.decisions) decisions.push_back(to_json(d));
  json rises = json::array();
  for (const auto& x : r.rises)
    rises.push_back({{"time", x.time},
                     {"setpoint", x.setpoint},
                     {"rise_time", x.rise_time ? json(*x.rise_time) : json(nullptr)},
                     {"violation", x.violation}});
  json breaches = json::array();
  for (const auto& b : r.spi_breaches) breaches.push_back({{"time", b.time}, {"spi", b.spi_id}, {"accumulated", b.accumulated}});
  json trips = json::array();
  for (const auto& g : r.guard_trips)
    trips.push_back({{"first_over_limit", g.first_over_limit}, {"trip_time", g.trip_time}});
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  json validity = json::array();
  for (const auto& v : r.validity)
    validity.push_back({{"time", v.time}, {"revision", v.revision}, {"valid", v.valid}, {"failing_nodes", v.failing_nodes}});
  json constraints = json::array();
  for (const auto& c : r.constraints) constraints.push_back({{"time", c.time}, {"domain", to_json(c.domain)}});

  json j{{"scenario_id", r.scenario_id},
         {"seed", r.seed},
         {"ticks", r.trace.size()},
         {"hazard_count", r.hazard_count()},
         {"guard_trips", r.guard_trips.size()},
         {"guard_trip_events", trips},
         {"max_tank_temp", r.max_tank_temp},
         {"decisions", decisions},
         {"rise_times", rises},
         {"spi_breaches", breaches},
         {"taxonomy", verdicts},
         {"case_validity", validity},
         {"constraint_contexts", constraints},
         {"runtime_criteria",
          {{"closed_option_set", r.criteria.closed_option_set},
           {"constraints_monotone", r.criteria.constraints_monotone},
           {"never_applied_failed", r.criteria.never_applied_failed}}},
         {"final",
          {{"active_option", r.final_option},
           {"configuration", to_json(r.final_config)},
           {"tank_temp", r.final_state.tank_temp},
           {"case_revision", r.final_case.revision}}}};
  if (r.taxonomy_error) j["taxonomy_error"] = *r.taxonomy_error;
  return j;
}

inline std::string decision_log(const std::vector<AdaptationDecision>& ds) {
  std::string out;
  for (const auto& d : ds) out += to_json(d).dump() + "\n";
  return out;
}

}  // namespace io

}  // namespace adaptsafe
