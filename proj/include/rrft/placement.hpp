#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rrft/datacenter.hpp"
#include "rrft/error.hpp"
#include "rrft/replica_planner.hpp"
#include "rrft/rng.hpp"

namespace rrft {

// strict: a machine hosts at most one instance of an application.
// relaxed: instances of different components of one application may share a
// machine; replicas of one component never do.
enum class PlacementMode { strict, relaxed };

inline const char* to_string(PlacementMode m) {
  return m == PlacementMode::strict ? "strict" : "relaxed";
}

struct Assignment {
  InstanceRef instance;
  int pm_id = 0;
  int pod_id = 0;
};

struct PlacementMap {
  PlacementMode mode = PlacementMode::strict;
  std::vector<Assignment> assignments;

  void merge_from(const PlacementMap& other) {
    assignments.insert(assignments.end(), other.assignments.begin(), other.assignments.end());
  }

  // Assignments grouped per application, in deterministic order.
  std::map<std::string, std::vector<const Assignment*>> by_app() const {
    std::map<std::string, std::vector<const Assignment*>> apps;
    for (const auto& a : assignments) apps[a.instance.app_id].push_back(&a);
    return apps;
  }
};

struct RuleViolation {
  int rule = 0;  // 1..4
  std::string detail;
};

namespace detail {

inline std::vector<const PlanComponent*> components_by_priority(const ReplicaPlan& plan) {
  std::vector<const PlanComponent*> order;
  order.reserve(plan.components.size());
  for (const auto& c : plan.components) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const PlanComponent* a, const PlanComponent* b) {
    if (a->rank != b->rank) return a->rank < b->rank;
    return a->id < b->id;
  });
  return order;
}

}  // namespace detail

// Rule-driven placement of one application. Components are handled in
// priority order; each component's family (primary first, then backups) is
// committed to a single pod and spread over distinct machines, most free
// capacity first. The seed is unused by this deterministic heuristic; it is
// part of the signature so strategies stay interchangeable.
inline PlacementMap place_application(const ReplicaPlan& plan, Datacenter& dc,
                                      PlacementMode mode, std::uint64_t /*seed*/) {
  PlacementMap map;
  map.mode = mode;
  std::unordered_set<int> app_used;  // machines already holding this app (strict)

  for (const PlanComponent* comp : detail::components_by_priority(plan)) {
    const int k = comp->replica_count;

    auto rule_eligible = [&](const PhysicalMachine& pm) {
      if (!pm.alive || pm.cpu_free < comp->cpu_demand || pm.mem_free < comp->mem_demand)
        return false;
      return mode == PlacementMode::relaxed || !app_used.count(pm.id);
    };

    // Pod feasibility first (enough rule-eligible machines for the whole
    // family), then prefer the pod with the most capacity-sufficient
    // machines, lowest pod id on ties.
    int best_pod = -1, best_score = -1;
    for (int pod = 0; pod < dc.num_pods; ++pod) {
      int eligible = 0, capacity_ok = 0;
      for (int m = pod * dc.machines_per_pod; m < (pod + 1) * dc.machines_per_pod; ++m) {
        const PhysicalMachine& pm = dc.machines[m];
        if (pm.alive && pm.cpu_free >= comp->cpu_demand && pm.mem_free >= comp->mem_demand)
          ++capacity_ok;
        if (rule_eligible(pm)) ++eligible;
      }
      if (eligible >= k && capacity_ok > best_score) {
        best_score = capacity_ok;
        best_pod = pod;
      }
    }
    if (best_pod < 0)
      throw InfeasibleError("no pod can host the " + std::to_string(k) +
                            "-instance family of component " + comp->id + " (app " +
                            plan.app_id + ") under " + to_string(mode) + " rules");

    std::vector<int> candidates;
    for (int m = best_pod * dc.machines_per_pod; m < (best_pod + 1) * dc.machines_per_pod; ++m)
      if (rule_eligible(dc.machines[m])) candidates.push_back(m);
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      const PhysicalMachine& pa = dc.machines[a];
      const PhysicalMachine& pb = dc.machines[b];
      if (pa.cpu_free != pb.cpu_free) return pa.cpu_free > pb.cpu_free;
      if (pa.mem_free != pb.mem_free) return pa.mem_free > pb.mem_free;
      return a < b;
    });

    for (int j = 0; j < k; ++j) {
      const int pm_id = candidates[static_cast<std::size_t>(j)];
      InstanceRef ref{plan.app_id, comp->id, j};
      const bool ok = allocate(dc, pm_id, ref, comp->cpu_demand, comp->mem_demand);
      check_invariant(ok, "eligible machine rejected an allocation");
      app_used.insert(pm_id);
      map.assignments.push_back({ref, pm_id, dc.machines[pm_id].pod});
    }
  }
  return map;
}

// Baseline placement: every instance lands on a uniformly random machine
// with enough residual capacity. Rules 1-4 are ignored on purpose.
inline PlacementMap place_random(const ReplicaPlan& plan, Datacenter& dc, std::uint64_t seed) {
  Rng rng(substream_seed(seed, "place_random"));
  PlacementMap map;
  map.mode = PlacementMode::relaxed;

  for (const PlanComponent* comp : detail::components_by_priority(plan)) {
    for (int j = 0; j < comp->replica_count; ++j) {
      std::vector<int> eligible;
      for (const auto& pm : dc.machines)
        if (pm.alive && pm.cpu_free >= comp->cpu_demand && pm.mem_free >= comp->mem_demand)
          eligible.push_back(pm.id);
      if (eligible.empty())
        throw InfeasibleError("datacenter capacity exhausted placing component " + comp->id +
                              " (app " + plan.app_id + ")");
      const int pm_id = eligible[rng.bounded(eligible.size())];
      InstanceRef ref{plan.app_id, comp->id, j};
      const bool ok = allocate(dc, pm_id, ref, comp->cpu_demand, comp->mem_demand);
      check_invariant(ok, "eligible machine rejected an allocation");
      map.assignments.push_back({ref, pm_id, dc.machines[pm_id].pod});
    }
  }
  return map;
}

// Exhaustive verification of the four placement rules against a map. Rule 1
// is only binding in strict mode; rules 2-4 always hold for rule-driven
// placements.
inline std::vector<RuleViolation> audit_rules(const PlacementMap& map) {
  std::vector<RuleViolation> violations;

  // family key -> replica_index -> assignment
  std::map<std::pair<std::string, std::string>, std::map<int, const Assignment*>> families;
  std::map<std::pair<std::string, int>, int> app_pm_load;
  for (const auto& a : map.assignments) {
    families[{a.instance.app_id, a.instance.component_id}][a.instance.replica_index] = &a;
    ++app_pm_load[{a.instance.app_id, a.pm_id}];
  }

  if (map.mode == PlacementMode::strict) {
    for (const auto& [key, count] : app_pm_load)
      if (count > 1)
        violations.push_back({1, "app " + key.first + " has " + std::to_string(count) +
                                     " instances on machine " + std::to_string(key.second)});
  }

  for (const auto& [family, members] : families) {
    const Assignment* primary = nullptr;
    if (auto it = members.find(0); it != members.end()) primary = it->second;
    std::map<int, std::vector<const Assignment*>> replicas_by_pm;
    std::set<int> pods;
    for (const auto& [idx, a] : members) {
      pods.insert(a->pod_id);
      if (idx > 0) replicas_by_pm[a->pm_id].push_back(a);
    }
    if (primary) {
      for (const auto& [pm, list] : replicas_by_pm)
        if (pm == primary->pm_id)
          for (const Assignment* a : list)
            violations.push_back({2, a->instance.str() + " shares machine " +
                                         std::to_string(pm) + " with its primary"});
    }
    for (const auto& [pm, list] : replicas_by_pm)
      if (list.size() > 1)
        violations.push_back({3, "family " + family.first + "/" + family.second + " has " +
                                     std::to_string(list.size()) + " replicas on machine " +
                                     std::to_string(pm)});
    if (pods.size() > 1)
      violations.push_back({4, "family " + family.first + "/" + family.second + " spans " +
                                   std::to_string(pods.size()) + " pods"});
  }
  return violations;
}

// Distinct machines hosting each application; the per-app average is the
// figure-4 style metric.
inline double average_machines_per_app(const PlacementMap& map) {
  const auto apps = map.by_app();
  if (apps.empty()) return 0.0;
  double total = 0.0;
  for (const auto& [app, list] : apps) {
    std::set<int> pms;
    for (const Assignment* a : list) pms.insert(a->pm_id);
    total += static_cast<double>(pms.size());
  }
  return total / static_cast<double>(apps.size());
}

}  // namespace rrft
