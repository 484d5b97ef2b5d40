#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adaptsafe/errors.hpp"
#include "adaptsafe/goal.hpp"
#include "adaptsafe/io.hpp"
#include "adaptsafe/mapek.hpp"
#include "adaptsafe/model.hpp"
#include "adaptsafe/plant.hpp"
#include "adaptsafe/safety_case.hpp"
#include "adaptsafe/scenario.hpp"
#include "adaptsafe/spi.hpp"
#include "adaptsafe/taxonomy.hpp"

namespace adaptsafe {

namespace detail {

inline Scenario suite_scenario(std::string id, double sp0, double sp1, double step_at, SignalTrace inflow_temp,
                               SignalTrace inflow_rate) {
  Scenario s;
  s.id = std::move(id);
  s.tick = 0.1;
  s.duration = 240.0;
  s.setpoint_schedule = {{{0.0, sp0}, {step_at, sp1}}, Interpolation::constant};
  s.inflow_temp_trace = std::move(inflow_temp);
  s.inflow_rate_trace = std::move(inflow_rate);
  s.guard_enabled = false;
  return s;
}

}  // namespace detail

/// Six probes: a small step just below the hazard limit, a large step, cold
/// and hot inflow, a drop to minimum inflow rate, and the combined worst case.
inline AssessmentSuite default_assessment_suite() {
  using detail::suite_scenario;
  const auto c = SignalTrace::constant;
  return {{
      suite_scenario("suite-step-small", 82.0, 87.0, 20.0, c(15.0), c(0.06)),
      suite_scenario("suite-step-large", 35.0, 55.0, 20.0, c(15.0), c(0.1)),
      suite_scenario("suite-cold-inflow", 30.0, 45.0, 20.0, c(0.0), c(0.1)),
      suite_scenario("suite-hot-inflow", 45.0, 60.0, 20.0, c(40.0), c(0.1)),
      suite_scenario("suite-rate-drop", 40.0, 50.0, 100.0, c(15.0),
                     {{{0.0, 0.1}, {60.0, 0.02}}, Interpolation::constant}),
      suite_scenario("suite-worst-case", 35.0, 50.0, 20.0, c(0.0), c(0.1)),
  }};
}

/// Everything the harness needs about one self-adaptive system.
struct SystemDescription {
  std::string name;
  PlantParams plant;
  SystemConfiguration initial_configuration;
  std::string initial_option_id = "baseline";  // also the fail-safe baseline
  std::string active_model_id;
  std::vector<AdaptationModel> models;
  AdaptationGoal goal;
  AdmissionPolicy admission;
  std::vector<SpiConfig> spis;
  AssessmentSuite suite;
  std::size_t max_candidates = 8;
  double evidence_refresh_period = 300.0;  // s
  double evidence_freshness = kRuntimeFreshness;  // s
  std::optional<SafetyCase> safety_case;

  const AdaptationModel* find_model(std::string_view id) const {
    for (const auto& m : models)
      if (m.id == id) return &m;
    return nullptr;
  }

  const AdaptationModel& active_model() const {
    const auto* m = find_model(active_model_id);
    if (!m) throw ValidationError("unknown model '" + active_model_id + "'", "active_model_id");
    return *m;
  }

  void validate() const {
    if (name.empty()) throw ValidationError("empty name", "name");
    plant.validate("plant");
    initial_configuration.validate("initial_configuration");
    if (models.empty()) throw ValidationError("at least one adaptation model is required", "adaptation_models");
    for (std::size_t i = 0; i < models.size(); ++i) {
      models[i].validate("adaptation_models[" + std::to_string(i) + "]");
      for (std::size_t j = 0; j < i; ++j)
        if (models[j].id == models[i].id)
          throw ValidationError("duplicate model id '" + models[i].id + "'", "adaptation_models[" + std::to_string(i) + "]");
    }
    const auto& m = active_model();
    if (m.controller_kind != initial_configuration.controller_kind)
      throw ValidationError("controller kind differs from the active model's", "initial_configuration.controller_kind");
    if (m.controller_kind == ControllerKind::parametric_net) net_from_config(initial_configuration);
    if (const auto* o = m.find_option(initial_option_id); o && o->assignment != initial_configuration.parameters)
      throw ValidationError("differs from option '" + initial_option_id + "'", "initial_configuration.parameters");
    const auto cls = classify(m.descriptor);
    if (cls.type == AdaptationType::t2)
      for (std::size_t i = 0; i < m.options->size(); ++i)
        if (!(*m.options)[i].domain)
          throw ValidationError("constrained-assurance options need a domain", "adaptation_models.options[" + std::to_string(i) + "].domain");
    goal.validate("goal");
    admission.validate("admission");
    for (std::size_t i = 0; i < spis.size(); ++i) spis[i].validate("spi[" + std::to_string(i) + "]");
    suite.validate("assessment_suite");
    if (max_candidates == 0) throw ValidationError("must be >= 1", "type3.max_candidates");
    if (!(evidence_refresh_period > 0.0)) throw ValidationError("must be > 0", "evidence_refresh_period");
    if (!(evidence_freshness > 0.0)) throw ValidationError("must be > 0", "evidence_freshness");
    if (safety_case) safety_case->validate();
  }
};

namespace io {

/// Reads a system description. `base_dir` resolves a relative
/// "safety_case" path.
inline SystemDescription read_system(const Reader& r, const std::filesystem::path& base_dir) {
  r.only({"name", "plant", "initial_configuration", "initial_option_id", "active_model_id", "adaptation_models",
          "goal", "admission", "spi", "assessment_suite", "type3", "evidence_refresh_period", "evidence_freshness",
          "safety_case"});
  SystemDescription s;
  s.name = r.at("name").string();
  if (auto v = r.find("plant")) s.plant = read_plant(*v);
  s.initial_configuration = read_configuration(r.at("initial_configuration"));
  if (auto v = r.find("initial_option_id")) s.initial_option_id = v->string();
  const auto ms = r.at("adaptation_models");
  for (std::size_t i = 0; i < ms.size(); ++i) s.models.push_back(read_model(ms[i]));
  s.active_model_id = r.has("active_model_id") ? r.at("active_model_id").string()
                                               : (s.models.empty() ? std::string{} : s.models.front().id);
  if (auto v = r.find("goal")) s.goal = read_goal(*v);
  if (auto v = r.find("admission")) s.admission = read_admission(*v);
  if (auto v = r.find("spi"))
    for (std::size_t i = 0; i < v->size(); ++i) s.spis.push_back(read_spi((*v)[i]));
  if (auto v = r.find("assessment_suite")) {
    v->only({"scenarios"});
    const auto sc = v->at("scenarios");
    for (std::size_t i = 0; i < sc.size(); ++i) s.suite.scenarios.push_back(read_scenario(sc[i]));
  } else {
    s.suite = default_assessment_suite();
  }
  if (auto v = r.find("type3")) {
    v->only({"max_candidates"});
    if (auto m = v->find("max_candidates")) s.max_candidates = m->unsigned_integer();
  }
  if (auto v = r.find("evidence_refresh_period")) s.evidence_refresh_period = v->number();
  if (auto v = r.find("evidence_freshness")) s.evidence_freshness = v->number();
  if (auto v = r.find("safety_case")) {
    if (v->value().is_string()) {
      const std::filesystem::path p = v->string();
      const auto full = p.is_absolute() ? p : base_dir / p;
      try {
        s.safety_case = load_case(full.string());
      } catch (const ValidationError& e) {
        throw ValidationError(e.message(), full.string() + (e.path().empty() ? "" : ": " + e.path()));
      }
    } else {
      s.safety_case = read_case(*v);
    }
  }
  s.validate();
  return s;
}

inline SystemDescription load_system(const std::string& path) {
  return read_system(Reader(load_json(path), ""), std::filesystem::path(path).parent_path());
}

}  // namespace io

}  // namespace adaptsafe
