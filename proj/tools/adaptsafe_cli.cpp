// Command-line front end: simulate, classify, check-case, assess.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adaptsafe/adaptsafe.hpp"

namespace {

using namespace adaptsafe;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kUnsafe = 3;

int simulate(const std::string& scenario_path, const std::string& system_path, const std::string& out,
             const std::string& report, std::optional<std::uint64_t> seed, const std::string& decision_log) {
  const auto scenario = io::load_scenario(scenario_path);
  const auto system = io::load_system(system_path);
  const auto r = run_scenario(scenario, system, {seed, true});
  if (!out.empty()) io::write_file(out, trace_csv(r.trace));
  if (!report.empty()) io::write_file(report, io::report_json(r).dump(2) + "\n");
  if (!decision_log.empty()) io::write_file(decision_log, io::decision_log(r.decisions));

  std::size_t applied = 0;
  for (const auto& d : r.decisions) applied += d.applied ? 1 : 0;
  std::printf("%s: %zu ticks, hazards %lld, guard trips %zu, decisions %zu (%zu applied), spi breaches %zu, final %s\n",
              r.scenario_id.c_str(), r.trace.size(), static_cast<long long>(r.hazard_count()), r.guard_trips.size(),
              r.decisions.size(), applied, r.spi_breaches.size(), r.final_option.c_str());
  if (r.taxonomy_error) std::printf("taxonomy: %s\n", r.taxonomy_error->c_str());
  for (const auto& v : r.verdicts)
    if (v.discharge)
      for (const auto& [id, d] : *v.discharge)
        if (d != Discharge::discharged) std::printf("undischarged: %s (%s)\n", id.c_str(), std::string(to_string(d)).c_str());
  return r.exit_code();
}

int classify_cmd(const std::string& system_path, const std::string& model_id) {
  const auto system = io::load_system(system_path);
  json out = json::array();
  bool ok = true;
  for (const auto& m : system.models) {
    if (!model_id.empty() && m.id != model_id) continue;
    const auto v = make_verdict(m);
    ok = ok && v.classification.ok();
    out.push_back(io::to_json(v));
  }
  if (out.empty()) throw ValidationError("no model '" + model_id + "'", "--model");
  std::cout << out.dump(2) << "\n";
  return ok ? kOk : kInvalid;
}

int check_case(const std::string& system_path, const std::string& case_path) {
  const auto system = io::load_system(system_path);
  const auto c = io::load_case(case_path);
  const auto repo = make_repository(system.initial_configuration, system.initial_option_id, c, system.spis,
                                    system.plant.tick);
  const auto verdict = make_verdict(system.active_model(), c, 0.0, repo);
  const auto validity = evaluate_validity(c, 0.0, repo);
  std::cout << render_tree(c);
  json out = io::to_json(verdict);
  out["valid"] = validity.valid;
  out["failing_nodes"] = validity.failing_nodes;
  std::cout << out.dump(2) << "\n";
  if (!verdict.classification.ok()) return kInvalid;
  return verdict.all_discharged() ? kOk : kUnsafe;
}

int assess(const std::string& system_path, const std::string& candidate_path) {
  const auto system = io::load_system(system_path);
  const auto candidate = io::read_net(io::Reader(io::load_json(candidate_path), ""));
  const auto a = assess_candidate(candidate, system.suite, system.plant, system.goal, 0.0, "cli-assessment");
  json scen = json::array();
  for (const auto& o : a.outcomes) {
    json rises = json::array();
    for (const auto& r : o.rises) rises.push_back(r.rise_time ? json(*r.rise_time) : json(nullptr));
    scen.push_back({{"scenario", o.scenario_id},
                    {"pass", o.pass},
                    {"hazards", o.hazard_count},
                    {"fault", o.fault},
                    {"max_temp", o.max_temp},
                    {"rise_times", rises}});
  }
  json out{{"verdict", to_string(a.verdict)}, {"evidence", io::to_json(a.evidence)}, {"scenarios", scen}};
  std::cout << out.dump(2) << "\n";
  return a.verdict == Verdict::pass ? kOk : kUnsafe;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and audit a self-adaptive water heater"};
  app.require_subcommand(1);

  std::string scenario, system, out, report, decision_log, model, case_path, candidate;
  std::optional<std::uint64_t> seed;

  auto* sim = app.add_subcommand("simulate", "Run a scenario and write trace and report");
  sim->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--system", system, "System description JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out, "Trace CSV");
  sim->add_option("--report", report, "Report JSON");
  sim->add_option("--seed", seed, "Override the scenario seed");
  sim->add_option("--decision-log", decision_log, "Decision log (JSON lines)");

  auto* cls = app.add_subcommand("classify", "Classify the system's adaptation models");
  cls->add_option("--system", system, "System description JSON")->required()->check(CLI::ExistingFile);
  cls->add_option("--model", model, "Only this model");

  auto* chk = app.add_subcommand("check-case", "Check a safety case against the active model's obligations");
  chk->add_option("--system", system, "System description JSON")->required()->check(CLI::ExistingFile);
  chk->add_option("--case", case_path, "Safety case JSON")->required()->check(CLI::ExistingFile);

  auto* asm_ = app.add_subcommand("assess", "Run the assessment suite on a candidate network");
  asm_->add_option("--system", system, "System description JSON")->required()->check(CLI::ExistingFile);
  asm_->add_option("--candidate", candidate, "Network JSON")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInvalid;
  }

  try {
    if (*sim) return simulate(scenario, system, out, report, seed, decision_log);
    if (*cls) return classify_cmd(system, model);
    if (*chk) return check_case(system, case_path);
    if (*asm_) return assess(system, candidate);
  } catch (const adaptsafe::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  } catch (const adaptsafe::LifecycleMismatch& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  } catch (const adaptsafe::StructuralError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kOk;
}
