#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "rrft/component_graph.hpp"
#include "rrft/error.hpp"
#include "rrft/rank_engine.hpp"

namespace rrft {

enum class ExecutionOrder { parallel, sequential };

inline const char* to_string(ExecutionOrder o) {
  return o == ExecutionOrder::parallel ? "parallel" : "sequential";
}

// MDP state (status, exec_order, backup_count). Status codes: 1 running,
// 2 rejected, 3 finished. exec_order: -1 root primary, 0 parallel,
// 1 sequential (finished states always carry 1).
struct MdpState {
  int status = 1;
  int exec_order = 0;
  int backup_count = 0;

  bool operator==(const MdpState&) const = default;
};

inline constexpr int state_running = 1;
inline constexpr int state_rejected = 2;
inline constexpr int state_finished = 3;

enum class MdpAction { create_backup, reject, execute };  // u1, u2, u3

// Linear chain of states for one component: indices [0, k) are the running
// chain (index j has backup_count j), indices [k, 2k) their finished
// counterparts. A create_backup edge j -> j+1 carries the per-step failure
// probability; an execute edge j -> finished(j) carries the complement.
struct MdpTransition {
  std::size_t from = 0;
  MdpAction action = MdpAction::execute;
  std::size_t to = 0;
  double probability = 0.0;
};

struct MdpChain {
  std::string component_id;
  double failure_prob = 0.0;
  double success_prob = 1.0;
  ExecutionOrder order = ExecutionOrder::parallel;
  bool is_root = false;
  std::vector<MdpState> states;
  std::vector<MdpTransition> transitions;

  std::size_t replica_count() const { return states.size() / 2; }
};

// Minimum number of instances (primary included) driving the residual
// failure probability to the tolerance level: smallest k with
// failure_prob^k <= nabla, floored by min_replicas.
inline int replica_count(double failure_prob, double nabla, int min_replicas) {
  require_input(nabla > 0.0 && nabla < 1.0, "tolerance level must lie in (0, 1)");
  require_input(min_replicas >= 0, "min_replicas must be >= 0");
  require_input(failure_prob >= 0.0 && failure_prob <= 1.0,
                "failure probability must lie in [0, 1]");
  if (failure_prob == 0.0)
    throw ValidationError(
        "failure probability is exactly 0; replication adds nothing, use k = max(min_replicas, 1)");
  if (failure_prob == 1.0)
    throw ValidationError(
        "failure probability is exactly 1; no replica count can reach the tolerance level");

  double ratio = std::log(nabla) / std::log(failure_prob);
  int k = std::max(1, static_cast<int>(std::ceil(ratio)));
  // ceil() on the log ratio can land one off at representation boundaries;
  // settle minimality against pow() directly.
  while (std::pow(failure_prob, k) > nabla) ++k;
  while (k > 1 && std::pow(failure_prob, k - 1) <= nabla) --k;
  return std::max(k, std::max(min_replicas, 1));
}

namespace detail {

// Chain construction from an explicit instance count; shared by the
// tolerance-driven builder and the fixed-budget baseline policies.
inline MdpChain build_chain_with_count(const std::string& component_id, double failure_prob,
                                       ExecutionOrder order, bool has_predecessors, int k) {
  check_invariant(k >= 1, "chain needs at least the primary state");
  MdpChain chain;
  chain.component_id = component_id;
  chain.failure_prob = failure_prob;
  chain.success_prob = 1.0 - failure_prob;
  chain.order = order;
  chain.is_root = !has_predecessors;

  const int replica_flag = order == ExecutionOrder::parallel ? 0 : 1;
  for (int j = 0; j < k; ++j) {
    int exec_order = replica_flag;
    if (j == 0) exec_order = has_predecessors ? 1 : -1;
    chain.states.push_back({state_running, exec_order, j});
  }
  for (int j = 0; j < k; ++j) chain.states.push_back({state_finished, 1, j});

  for (int j = 0; j + 1 < k; ++j)
    chain.transitions.push_back({static_cast<std::size_t>(j), MdpAction::create_backup,
                                 static_cast<std::size_t>(j + 1), failure_prob});
  for (int j = 0; j < k; ++j)
    chain.transitions.push_back({static_cast<std::size_t>(j), MdpAction::execute,
                                 static_cast<std::size_t>(k + j), chain.success_prob});
  return chain;
}

}  // namespace detail

// Tolerance-driven chain: backups are created while the cumulative residual
// failure probability still exceeds the tolerance level.
inline MdpChain build_mdp_chain(const std::string& component_id, double failure_prob,
                                double nabla, int min_replicas, ExecutionOrder order,
                                bool has_predecessors) {
  const int k = replica_count(failure_prob, nabla, min_replicas);
  return detail::build_chain_with_count(component_id, failure_prob, order, has_predecessors, k);
}

// Splits rank classes into a parallel prefix and a sequential suffix: the
// smallest prefix of rank classes covering at least parallel_fraction of the
// components runs parallel. Whole classes move together, so equal rank
// always implies an identical order flag.
inline std::unordered_map<std::string, ExecutionOrder> assign_execution_order(
    const RankTable& table, double parallel_fraction) {
  require_input(parallel_fraction >= 0.0 && parallel_fraction <= 1.0,
                "parallel_fraction must lie in [0, 1]");
  std::map<int, std::vector<const RankEntry*>> classes;
  for (const auto& e : table.entries) classes[e.rank].push_back(&e);

  const double target = parallel_fraction * static_cast<double>(table.entries.size());
  std::unordered_map<std::string, ExecutionOrder> orders;
  std::size_t covered = 0;
  for (const auto& [rank, members] : classes) {
    const bool parallel = static_cast<double>(covered) < target;
    for (const RankEntry* e : members)
      orders[e->id] = parallel ? ExecutionOrder::parallel : ExecutionOrder::sequential;
    covered += members.size();
  }
  return orders;
}

struct PlanComponent {
  std::string id;
  int rank = 0;
  double failure_prob = 0.0;
  int replica_count = 1;  // instances including the primary
  ExecutionOrder order = ExecutionOrder::parallel;
  bool is_root = false;
  int cpu_demand = 1;
  int mem_demand = 1;
  double restart_delay = 0.0;
  double active_duration = 1.0;
  MdpChain chain;
  // Objective bookkeeping: what the chosen order costs and what residual
  // failure probability remains.
  double parallel_cpu_cost = 0.0;
  double parallel_mem_cost = 0.0;
  double sequential_time_cost = 0.0;
  double residual_failure_prob = 0.0;

  int backups() const { return replica_count - 1; }
};

struct ReplicaPlan {
  std::string app_id;
  double nabla = 0.0;
  int min_replicas = 0;
  double parallel_fraction = 0.0;
  std::vector<PlanComponent> components;  // in input graph order
  long long total_instances = 0;

  const PlanComponent* find(const std::string& id) const {
    for (const auto& c : components)
      if (c.id == id) return &c;
    return nullptr;
  }
};

// VMs the application occupies at any one moment: a parallel chain runs all
// instances side by side, a sequential chain reuses one VM slot.
inline long long concurrent_vm_demand(const ReplicaPlan& plan) {
  long long vms = 0;
  for (const auto& c : plan.components)
    vms += c.order == ExecutionOrder::parallel ? c.replica_count : 1;
  return vms;
}

namespace detail {

// Shared plan assembly. `count_for` decides the instance count per
// component, which is where the replication policies differ.
// `tolerance_bound_holds` gates the residual-bound invariant; fixed-budget
// baselines do not promise it.
template <typename CountFn>
inline ReplicaPlan assemble_plan(const ComponentGraph& graph,
                                 const std::vector<SignificanceRecord>& records,
                                 const RankTable& table, double nabla, int min_replicas,
                                 double parallel_fraction, CountFn&& count_for,
                                 bool tolerance_bound_holds) {
  const auto orders = assign_execution_order(table, parallel_fraction);
  const auto indeg = graph.predecessor_counts();

  std::unordered_map<std::string, int> rank_of;
  for (const auto& e : table.entries) rank_of[e.id] = e.rank;

  ReplicaPlan plan;
  plan.app_id = graph.app_id;
  plan.nabla = nabla;
  plan.min_replicas = min_replicas;
  plan.parallel_fraction = parallel_fraction;

  for (std::size_t i = 0; i < graph.size(); ++i) {
    const Component& comp = graph.components[i];
    const SignificanceRecord& rec = records[i];
    PlanComponent pc;
    pc.id = comp.id;
    pc.rank = rank_of.at(comp.id);
    pc.failure_prob = rec.failure_prob;
    pc.order = orders.at(comp.id);
    pc.is_root = indeg[i] == 0;
    pc.cpu_demand = comp.cpu_demand;
    pc.mem_demand = comp.mem_demand;
    pc.restart_delay = comp.restart_delay;
    pc.active_duration = comp.active_duration;
    try {
      pc.replica_count = count_for(pc);
    } catch (const ValidationError& e) {
      throw ValidationError("component " + comp.id + ": " + e.what());
    }
    pc.chain = build_chain_with_count(pc.id, pc.failure_prob, pc.order, !pc.is_root,
                                      pc.replica_count);
    pc.residual_failure_prob = std::pow(pc.failure_prob, pc.replica_count);
    if (pc.order == ExecutionOrder::parallel) {
      pc.parallel_cpu_cost = static_cast<double>(pc.replica_count) * pc.cpu_demand;
      pc.parallel_mem_cost = static_cast<double>(pc.replica_count) * pc.mem_demand;
    } else {
      pc.sequential_time_cost = static_cast<double>(pc.replica_count) * pc.restart_delay;
    }
    plan.total_instances += pc.replica_count;
    plan.components.push_back(std::move(pc));
  }

  // Constraint audit over the finished plan.
  int max_parallel_rank = 0, min_sequential_rank = 0;
  std::unordered_map<int, ExecutionOrder> order_of_rank;
  for (const auto& c : plan.components) {
    if (c.order == ExecutionOrder::parallel)
      max_parallel_rank = std::max(max_parallel_rank, c.rank);
    else
      min_sequential_rank =
          min_sequential_rank == 0 ? c.rank : std::min(min_sequential_rank, c.rank);
    auto [it, inserted] = order_of_rank.emplace(c.rank, c.order);
    check_invariant(it->second == c.order, "components of equal rank disagree on order");
    check_invariant(c.replica_count >= std::max(min_replicas, 1),
                    "replica count below the configured floor");
    if (tolerance_bound_holds)
      check_invariant(std::pow(c.failure_prob, c.replica_count) <= nabla,
                      "residual failure probability exceeds the tolerance level");
  }
  if (max_parallel_rank > 0 && min_sequential_rank > 0)
    check_invariant(max_parallel_rank < min_sequential_rank,
                    "parallel set is not a prefix of the priority order");
  return plan;
}

}  // namespace detail

// Full planning pass for one application: significance, merged ranking,
// tolerance-driven replica counts, order split, per-component chains.
inline ReplicaPlan build_plan(const ComponentGraph& graph, double nabla, int min_replicas,
                              double parallel_fraction) {
  const auto records = significance_values(graph);
  const auto table = rank_components(records);
  return detail::assemble_plan(
      graph, records, table, nabla, min_replicas, parallel_fraction,
      [&](const PlanComponent& pc) {
        return replica_count(pc.failure_prob, nabla, min_replicas);
      },
      /*tolerance_bound_holds=*/true);
}

}  // namespace rrft
