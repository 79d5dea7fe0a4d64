#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rrft/component_graph.hpp"
#include "rrft/datacenter.hpp"
#include "rrft/error.hpp"
#include "rrft/placement.hpp"
#include "rrft/replica_planner.hpp"
#include "rrft/rng.hpp"

namespace rrft {

// Decisive failure of one instance, `elapsed` seconds into its activation.
struct ComponentFailureEvent {
  InstanceRef instance;
  double elapsed = 0.0;
};

struct PmFailureEvent {
  int pm_id = 0;
  double time = 0.0;
};

// Pre-drawn fault plan: replaying the same script against the same inputs
// reproduces a simulation exactly.
struct FaultScript {
  std::uint64_t seed = 0;
  std::vector<ComponentFailureEvent> component_failures;  // canonical instance order
  std::vector<PmFailureEvent> pm_failures;                // time order
};

struct SimParams {
  std::pair<double, double> parallel_epsilon_range{0.0, 2.0};
  double pm_failure_horizon = 1000.0;
  std::uint64_t seed = 1;
};

struct SimulationReport {
  long long total_vms = 0;  // instances created across all plans
  long long concurrent_vm_demand = 0;
  double avg_pms_per_app = 0.0;
  std::vector<double> recovery_times;  // seconds, in occurrence order
  // One entry per PM failure: mean over so-far-affected apps of the
  // cumulative percentage of their VMs lost.
  std::vector<double> pct_resource_affected;
  double parallel_backup_success_pct = 100.0;
  double sequential_backup_success_pct = 100.0;
  long long parallel_instances = 0;
  long long sequential_instances = 0;
  long long parallel_backups_activated = 0;
  long long parallel_backups_succeeded = 0;
  long long sequential_backups_activated = 0;
  long long sequential_backups_succeeded = 0;
  long long instances_finished = 0;
  long long instances_failed = 0;
  long long instances_never_needed = 0;
  long long apps_failed = 0;
  std::vector<double> app_makespans;

  double mean_recovery_time() const {
    if (recovery_times.empty()) return 0.0;
    double s = 0.0;
    for (double t : recovery_times) s += t;
    return s / static_cast<double>(recovery_times.size());
  }
};

namespace detail {

inline std::vector<int> sample_distinct_alive_pms(const Datacenter& dc, int count, Rng& rng) {
  std::vector<int> alive;
  for (const auto& pm : dc.machines)
    if (pm.alive) alive.push_back(pm.id);
  require_input(count >= 0, "PM failure count must be >= 0");
  require_input(static_cast<std::size_t>(count) <= alive.size(),
                "cannot fail " + std::to_string(count) + " machines, only " +
                    std::to_string(alive.size()) + " alive");
  for (int i = 0; i < count; ++i) {
    const std::size_t j = i + rng.bounded(alive.size() - i);
    std::swap(alive[i], alive[j]);
  }
  alive.resize(count);
  return alive;
}

}  // namespace detail

// Draws the decisive faults for one run: each instance of each plan fails
// with its component's failure probability (offset uniform inside the active
// window), plus `num_pm_failures` machine kills spread over the horizon.
inline FaultScript make_fault_script(const std::vector<ReplicaPlan>& plans, const Datacenter& dc,
                                     int num_pm_failures, double horizon, std::uint64_t seed) {
  require_input(horizon > 0.0, "fault horizon must be positive");
  FaultScript script;
  script.seed = seed;

  Rng comp_rng(substream_seed(seed, "component_faults"));
  for (const auto& plan : plans) {
    for (const auto& comp : plan.components) {
      for (int j = 0; j < comp.replica_count; ++j) {
        if (!comp_rng.bernoulli(comp.failure_prob)) continue;
        const double elapsed = comp_rng.uniform_real(0.0, comp.active_duration);
        script.component_failures.push_back({{plan.app_id, comp.id, j}, elapsed});
      }
    }
  }

  Rng pm_rng(substream_seed(seed, "pm_faults"));
  const auto targets = detail::sample_distinct_alive_pms(dc, num_pm_failures, pm_rng);
  for (int pm : targets)
    script.pm_failures.push_back({pm, pm_rng.uniform_real(0.0, horizon)});
  std::sort(script.pm_failures.begin(), script.pm_failures.end(),
            [](const PmFailureEvent& a, const PmFailureEvent& b) {
              if (a.time != b.time) return a.time < b.time;
              return a.pm_id < b.pm_id;
            });
  return script;
}

// Executes every application against a fault script.
//
// Execution model: components run in dependency order; a component's work
// length is one uniform sample over its active window. A scripted instance
// failure cuts that instance short after its elapsed offset. Parallel chains
// promote a surviving replica at a small uniform switchover cost; sequential
// chains wait out the restart delay and re-execute from scratch, losing the
// elapsed work. PM failures are charged against the final placement for the
// blast-radius series; they do not rewrite execution history.
inline SimulationReport run_simulation(const std::vector<ComponentGraph>& apps,
                                       const std::vector<ReplicaPlan>& plans,
                                       const PlacementMap& map, Datacenter& dc,
                                       const FaultScript& script, const SimParams& params) {
  require_input(apps.size() == plans.size(), "one plan per application required");
  require_input(params.parallel_epsilon_range.first >= 0.0 &&
                    params.parallel_epsilon_range.first <= params.parallel_epsilon_range.second,
                "parallel epsilon range is invalid");

  std::map<std::string, const ReplicaPlan*> plan_of;
  for (const auto& p : plans) plan_of[p.app_id] = &p;

  std::map<InstanceRef, double> failure_offset;
  for (const auto& ev : script.component_failures) {
    const ReplicaPlan* plan = nullptr;
    if (auto it = plan_of.find(ev.instance.app_id); it != plan_of.end()) plan = it->second;
    const PlanComponent* comp = plan ? plan->find(ev.instance.component_id) : nullptr;
    require_input(comp != nullptr && ev.instance.replica_index >= 0 &&
                      ev.instance.replica_index < comp->replica_count,
                  "fault script references unknown instance " + ev.instance.str());
    failure_offset[ev.instance] = ev.elapsed;
  }

  SimulationReport report;
  report.avg_pms_per_app = average_machines_per_app(map);
  Rng sim_rng(substream_seed(params.seed, "simulation"));

  for (std::size_t a = 0; a < apps.size(); ++a) {
    const ComponentGraph& g = apps[a];
    const ReplicaPlan& plan = plans[a];
    require_input(g.app_id == plan.app_id, "plan order does not match application order");

    report.total_vms += plan.total_instances;
    report.concurrent_vm_demand += concurrent_vm_demand(plan);

    auto indeg = g.predecessor_counts();
    auto adj = g.adjacency();
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (indeg[i] == 0) ready.push_back(i);

    std::vector<double> finish(g.size(), 0.0);
    bool app_failed = false;
    double makespan = 0.0;
    std::size_t processed = 0;

    std::vector<double> start(g.size(), 0.0);
    while (!ready.empty()) {
      const std::size_t ci = ready.front();
      ready.pop_front();
      ++processed;
      const PlanComponent* comp = plan.find(g.components[ci].id);
      check_invariant(comp != nullptr, "plan is missing a component of its application");
      const int k = comp->replica_count;
      const double work = sim_rng.uniform_real(0.0, comp->active_duration);

      auto fails = [&](int j) {
        return failure_offset.count({plan.app_id, comp->id, j}) != 0;
      };
      auto offset_of = [&](int j) { return failure_offset.at({plan.app_id, comp->id, j}); };

      double elapsed_total = 0.0;  // execution time of this component
      if (comp->order == ExecutionOrder::parallel) {
        report.parallel_instances += k;
        report.parallel_backups_activated += k - 1;
        int failed = 0;
        for (int j = 0; j < k; ++j) failed += fails(j) ? 1 : 0;
        report.instances_failed += failed;
        report.instances_finished += k - failed;
        report.parallel_backups_succeeded += (k - 1) - (failed - (fails(0) ? 1 : 0));
        if (failed == k) {
          app_failed = true;
          elapsed_total = offset_of(0);
        } else if (fails(0)) {
          const double eps = sim_rng.uniform_real(params.parallel_epsilon_range.first,
                                                  params.parallel_epsilon_range.second);
          report.recovery_times.push_back(eps);
          elapsed_total = work + eps;
        } else {
          elapsed_total = work;
        }
      } else {
        report.sequential_instances += k;
        int attempts = 0;
        bool succeeded = false;
        for (int j = 0; j < k; ++j) {
          ++attempts;
          if (j > 0) ++report.sequential_backups_activated;
          if (!fails(j)) {
            succeeded = true;
            if (j > 0) ++report.sequential_backups_succeeded;
            elapsed_total += work;
            break;
          }
          ++report.instances_failed;
          elapsed_total += offset_of(j);
          if (j + 1 < k) {
            const double recovery = comp->restart_delay + offset_of(j);
            report.recovery_times.push_back(recovery);
            elapsed_total += comp->restart_delay;
          }
        }
        if (succeeded) ++report.instances_finished;
        if (!succeeded) app_failed = true;
        report.instances_never_needed += k - attempts;
      }

      for (std::size_t pred_edge = 0; pred_edge < g.edges.size(); ++pred_edge) {
        const auto& [from, to] = g.edges[pred_edge];
        if (to == ci) start[ci] = std::max(start[ci], finish[from]);
      }
      finish[ci] = start[ci] + elapsed_total;
      makespan = std::max(makespan, finish[ci]);

      for (std::size_t w : adj[ci])
        if (--indeg[w] == 0) ready.push_back(w);
    }
    check_invariant(processed == g.size(), "dependency traversal missed components");

    report.app_makespans.push_back(makespan);
    if (app_failed) ++report.apps_failed;
  }

  check_invariant(report.instances_finished + report.instances_failed +
                          report.instances_never_needed ==
                      report.total_vms,
                  "instance conservation violated");

  if (report.parallel_backups_activated > 0)
    report.parallel_backup_success_pct = 100.0 *
                                         static_cast<double>(report.parallel_backups_succeeded) /
                                         static_cast<double>(report.parallel_backups_activated);
  if (report.sequential_backups_activated > 0)
    report.sequential_backup_success_pct =
        100.0 * static_cast<double>(report.sequential_backups_succeeded) /
        static_cast<double>(report.sequential_backups_activated);

  // Blast-radius accounting for the scripted machine kills.
  std::map<std::string, long long> allocated, dead;
  for (const auto& asg : map.assignments) ++allocated[asg.instance.app_id];
  std::set<std::string> affected;
  for (const auto& ev : script.pm_failures) {
    for (const auto& victim : fail_pm(dc, ev.pm_id)) {
      if (!allocated.count(victim.app_id)) continue;
      ++dead[victim.app_id];
      affected.insert(victim.app_id);
    }
    double sum = 0.0;
    for (const auto& app : affected)
      sum += 100.0 * static_cast<double>(dead[app]) / static_cast<double>(allocated.at(app));
    report.pct_resource_affected.push_back(affected.empty() ? 0.0
                                                            : sum / static_cast<double>(affected.size()));
  }

  for (double pct : report.pct_resource_affected)
    check_invariant(pct >= 0.0 && pct <= 100.0, "affected percentage outside [0, 100]");
  return report;
}

// Kills `num_pm_failures` distinct alive machines (uniform, seeded) and
// returns the running blast-radius series: after each kill, the mean over
// affected applications of the cumulative share of their VMs lost.
inline std::vector<double> measure_blast_radius(const PlacementMap& map, Datacenter& dc,
                                                int num_pm_failures, std::uint64_t seed) {
  Rng rng(substream_seed(seed, "blast"));
  const auto kills = detail::sample_distinct_alive_pms(dc, num_pm_failures, rng);

  std::map<std::string, long long> allocated, dead;
  for (const auto& asg : map.assignments) ++allocated[asg.instance.app_id];

  std::set<std::string> affected;
  std::vector<double> series;
  series.reserve(kills.size());
  for (int pm : kills) {
    for (const auto& victim : fail_pm(dc, pm)) {
      if (!allocated.count(victim.app_id)) continue;
      ++dead[victim.app_id];
      affected.insert(victim.app_id);
    }
    double sum = 0.0;
    for (const auto& app : affected)
      sum += 100.0 * static_cast<double>(dead[app]) / static_cast<double>(allocated.at(app));
    series.push_back(affected.empty() ? 0.0 : sum / static_cast<double>(affected.size()));
  }
  for (double pct : series)
    check_invariant(pct >= 0.0 && pct <= 100.0, "affected percentage outside [0, 100]");
  return series;
}

}  // namespace rrft
