#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adaptsafe/goal.hpp"
#include "adaptsafe/knowledge.hpp"
#include "adaptsafe/managed_loop.hpp"
#include "adaptsafe/mapek.hpp"
#include "adaptsafe/scenario.hpp"
#include "adaptsafe/system.hpp"
#include "adaptsafe/taxonomy.hpp"
#include "adaptsafe/validity.hpp"

namespace adaptsafe {

struct SpiBreach {
  double time = 0.0;
  std::string spi_id;
  double accumulated = 0.0;  // s
};

struct ConstraintChange {
  double time = 0.0;
  OperationalDomain domain;
};

/// What the managing system did during one tick.
struct MapeOutcome {
  std::optional<SystemConfiguration> new_config;
  bool fail_safe = false;
  std::vector<AdaptationDecision> decisions;
};

/// The MAPE-K loop for one run. Each tick it updates the SPI windows, then
/// monitors, analyzes, plans and executes against its knowledge repository.
class ManagingSystem {
 public:
  ManagingSystem(const SystemDescription& system, const Scenario& scenario, double tick, std::uint64_t seed)
      : sys_(&system),
        model_(&system.active_model()),
        classification_(classify(model_->descriptor)),
        triggers_(scenario.manual_triggers),
        tracker_(system.goal),
        seed_(seed),
        repo_(make_repository(system.initial_configuration, system.initial_option_id,
                              system.safety_case.value_or(SafetyCase{}), system.spis, tick)) {
    repo_.guard_enabled = scenario.guard_enabled;
    record_constraints(0.0);
  }

  const KnowledgeRepository& repo() const noexcept { return repo_; }
  const GoalTracker& goal_tracker() const noexcept { return tracker_; }
  const Classification& classification() const noexcept { return classification_; }
  const AdaptationModel& model() const noexcept { return *model_; }
  const std::vector<SpiBreach>& spi_breaches() const noexcept { return breaches_; }
  const std::vector<ConstraintChange>& constraint_history() const noexcept { return constraints_; }
  bool has_case() const noexcept { return !repo_.safety_case.nodes.empty(); }
  const std::vector<AdaptationDecision>& decisions() const noexcept { return log_; }

  /// Payload hashes of every proposed candidate that failed assessment.
  const std::set<std::string>& failed_payloads() const noexcept { return failed_payloads_; }

  /// Payload hash of every network configuration that was ever active.
  const std::set<std::string>& active_payloads() const noexcept { return active_payloads_; }

  /// Runs the SPI and MAPE stages for tick `t` of the managed system.
  MapeOutcome on_tick(const ManagedTick& t) {
    MapeOutcome out;
    const double now = t.sample.time;

    // SPI
    for (auto& w : repo_.spi_windows) w.update(t.sample);

    // Monitor
    repo_.sample_history.push_back(t.sample);
    repo_.guard_tripped = t.guard_active || t.guard_latched;
    note_active_payload();

    // Analyze
    const bool goal_violation = tracker_.observe(t.sample);
    std::vector<ManualTrigger> manual;
    while (next_trigger_ < triggers_.size() && triggers_[next_trigger_].time <= now + 1e-9)
      manual.push_back(triggers_[next_trigger_++]);

    const SpiWindow* breached = nullptr;
    for (const auto& w : repo_.spi_windows)
      if (w.breached()) {
        breached = &w;
        break;
      }
    if (breached) {
      breaches_.push_back({now, breached->id(), breached->accumulated()});
      out.decisions.push_back(run_fail_safe(*breached, now));
      out.new_config = repo_.current_config;
      out.fail_safe = true;
      auto preempted = [&](Trigger trig, std::optional<std::string> req) {
        AdaptationDecision d;
        d.time = now;
        d.trigger = trig;
        d.requested_option = std::move(req);
        d.reason = "preempted by fail-safe";
        out.decisions.push_back(std::move(d));
      };
      if (goal_violation) preempted(Trigger::goal_violation, std::nullopt);
      for (const auto& m : manual) preempted(Trigger::manual, m.option_id);
      last_refresh_ = now;
      return finish(out);
    }

    refresh_evidence(now);

    // Plan and execute
    if (goal_violation) adapt(Trigger::goal_violation, std::nullopt, now, out);
    for (const auto& m : manual) adapt(Trigger::manual, m.option_id, now, out);
    return finish(out);
  }

  /// Closes open rise-time records at the end of the horizon.
  void finish_run(double end_time) { tracker_.finish(end_time); }

  ValidityResult validity(double now) const { return evaluate_validity(repo_.safety_case, now, repo_); }

 private:
  MapeOutcome& finish(MapeOutcome& out) {
    log_.insert(log_.end(), out.decisions.begin(), out.decisions.end());
    return out;
  }

  void note_active_payload() {
    if (repo_.current_config.controller_kind == ControllerKind::parametric_net && repo_.current_config != last_noted_) {
      active_payloads_.insert(payload_hash(net_from_config(repo_.current_config)));
      last_noted_ = repo_.current_config;
    }
  }

  void record_constraints(double now) {
    if (!has_case() || constraint_contexts(repo_.safety_case).empty()) return;
    auto d = current_constraints(repo_.safety_case);
    if (constraints_.empty() || !(constraints_.back().domain == d)) constraints_.push_back({now, std::move(d)});
  }

  AdaptationDecision run_fail_safe(const SpiWindow& w, double now) {
    AdaptationDecision d;
    d.time = now;
    d.trigger = Trigger::spi_breach;
    d.chosen_option = sys_->initial_option_id;
    d.configuration = sys_->initial_configuration;
    char buf[160];
    std::snprintf(buf, sizeof buf, "fail-safe: SPI '%s' at %.1f s exceeds %.1f s", w.id().c_str(), w.accumulated(),
                  w.config().threshold);
    d.reason = buf;
    if (repo_.active_option_id == sys_->initial_option_id && repo_.current_config == sys_->initial_configuration)
      d.reason += " (baseline already active)";
    repo_ = fail_safe(repo_, sys_->initial_configuration, sys_->initial_option_id, now, ids_.next("fs"),
                      sys_->evidence_freshness);
    d.applied = true;
    return d;
  }

  /// Periodically renews the run-time evidence behind the active option.
  void refresh_evidence(double now) {
    if (now - last_refresh_ < sys_->evidence_refresh_period - 1e-9) return;
    last_refresh_ = now;
    if (!has_case() || !classification_.type) return;
    std::vector<CasePatch> patches;
    if (*classification_.type == AdaptationType::t2) {
      const auto* opt = model_->find_option(repo_.active_option_id);
      auto node = find_dynamic_node(repo_.safety_case, NodeKind::solution, "TII.B4");
      if (!opt || !node) return;
      const auto window = repo_.recent(now, sys_->admission.window);
      const auto report = admission_test(window, opt->domain.value_or(OperationalDomain{}), sys_->admission);
      if (report.outcome == AdmissionOutcome::not_ready) return;
      patches.push_back(AttachEvidence{
          *node, admission_evidence(ids_.next("adm"), opt->id, report, now, sys_->evidence_freshness)});
    } else if (*classification_.type == AdaptationType::t3) {
      if (auto node = find_dynamic_node(repo_.safety_case, NodeKind::solution, "TIII.B6")) {
        const auto spec = net_from_config(repo_.current_config);
        auto a = assess_candidate(spec, sys_->suite, sys_->plant, sys_->goal, now, ids_.next("asm"),
                                  sys_->evidence_freshness);
        patches.push_back(AttachEvidence{*node, a.evidence});
      }
      if (auto node = find_dynamic_node(repo_.safety_case, NodeKind::solution, "TIII.B7")) {
        bool ok = true;
        double worst = 0.0;
        for (const auto& w : repo_.spi_windows) {
          ok = ok && !w.breached();
          worst = std::max(worst, w.accumulated());
        }
        char payload[64];
        std::snprintf(payload, sizeof payload, "spi:max=%.1f", worst);
        patches.push_back(AttachEvidence{*node, {ids_.next("spi"), EvidenceKind::runtime_observation,
                                                 ok ? Verdict::pass : Verdict::fail, now, sys_->evidence_freshness,
                                                 payload}});
      }
    }
    if (patches.empty()) return;
    repo_.safety_case = adapt_case(repo_.safety_case, patches, now, "evidence-refresh");
  }

  void adapt(Trigger trigger, const std::optional<std::string>& requested, double now, MapeOutcome& out) {
    AdaptationPlan plan;
    if (!classification_.type) {
      plan.decision.time = now;
      plan.decision.trigger = trigger;
      plan.decision.requested_option = requested;
      plan.decision.reason = "refused: model '" + model_->id + "' is unclassifiable (unmet " +
                             classification_.unmet_criterion + ")";
      out.decisions.push_back(plan.decision);
      return;
    }
    const auto type = *classification_.type;
    switch (type) {
      case AdaptationType::t0:
      case AdaptationType::t1: plan = plan_type1(*model_, repo_.active_option_id, trigger, requested, now, type); break;
      case AdaptationType::t2: {
        const auto window = repo_.recent(now, sys_->admission.window);
        plan = plan_type2(*model_, repo_.active_option_id, window, sys_->admission, repo_.safety_case, trigger,
                          requested, now, ids_, sys_->evidence_freshness);
        break;
      }
      case AdaptationType::t3: {
        const CandidateSearch search{seed_, type3_decisions_++, sys_->max_candidates};
        plan = plan_type3(*model_, net_from_config(repo_.current_config), sys_->suite, sys_->plant, sys_->goal,
                          trigger, requested, now, search, ids_, sys_->evidence_freshness);
        for (const auto& c : plan.decision.candidates)
          if (c.verdict == Verdict::fail) failed_payloads_.insert(c.payload_ref);
        break;
      }
    }
    if (plan.action) {
      try {
        repo_ = execute_adaptation(plan, repo_, now);
        plan.decision.applied = true;
        out.new_config = repo_.current_config;
        record_constraints(now);
        note_active_payload();
      } catch (const Error& e) {
        plan.decision.applied = false;
        plan.decision.reason += std::string("; rolled back: ") + e.what();
      }
    }
    out.decisions.push_back(std::move(plan.decision));
  }

  const SystemDescription* sys_;
  const AdaptationModel* model_;
  Classification classification_;
  std::vector<ManualTrigger> triggers_;
  std::size_t next_trigger_ = 0;
  GoalTracker tracker_;
  std::uint64_t seed_;
  std::uint64_t type3_decisions_ = 0;
  double last_refresh_ = -std::numeric_limits<double>::infinity();
  EvidenceIdSource ids_{"rt"};
  KnowledgeRepository repo_;
  std::vector<AdaptationDecision> log_;
  std::vector<SpiBreach> breaches_;
  std::vector<ConstraintChange> constraints_;
  std::set<std::string> failed_payloads_;
  std::set<std::string> active_payloads_;
  SystemConfiguration last_noted_;
};

}  // namespace adaptsafe
