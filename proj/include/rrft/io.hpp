#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rrft/component_graph.hpp"
#include "rrft/error.hpp"
#include "rrft/fault_sim.hpp"
#include "rrft/placement.hpp"
#include "rrft/rank_engine.hpp"
#include "rrft/replica_planner.hpp"

namespace rrft {

using json = nlohmann::ordered_json;

// Shortest-round-trip decimal form; stable across runs, which keeps report
// files byte-identical for a fixed seed.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  check_invariant(ec == std::errc(), "double formatting failed");
  return std::string(buf, ptr);
}

// ---- component graphs -----------------------------------------------------

inline json graph_to_json(const ComponentGraph& g) {
  json j;
  j["app_id"] = g.app_id;
  j["components"] = json::array();
  for (const auto& c : g.components) {
    j["components"].push_back({{"id", c.id},
                               {"failure_rate", c.failure_rate},
                               {"active_duration", c.active_duration},
                               {"fail_count", c.fail_count},
                               {"app_fail_count", c.app_fail_count},
                               {"cpu_demand", c.cpu_demand},
                               {"mem_demand", c.mem_demand},
                               {"restart_delay", c.restart_delay}});
  }
  j["edges"] = json::array();
  for (const auto& [from, to] : g.edges)
    j["edges"].push_back({g.components[from].id, g.components[to].id});
  return j;
}

inline ComponentGraph graph_from_json(const json& j) {
  try {
    ComponentGraph g;
    g.app_id = j.value("app_id", std::string("app"));
    require_input(j.contains("components") && j["components"].is_array(),
                  "graph document needs a components array");
    for (const auto& cj : j["components"]) {
      Component c;
      c.id = cj.at("id").get<std::string>();
      c.failure_rate = cj.at("failure_rate").get<double>();
      c.active_duration = cj.at("active_duration").get<double>();
      c.fail_count = cj.value("fail_count", 0LL);
      c.app_fail_count = cj.value("app_fail_count", 0LL);
      c.cpu_demand = cj.value("cpu_demand", 1);
      c.mem_demand = cj.value("mem_demand", 1);
      c.restart_delay = cj.value("restart_delay", 0.0);
      g.components.push_back(std::move(c));
    }
    const auto index = g.index_by_id();
    for (const auto& ej : j.value("edges", json::array())) {
      require_input(ej.is_array() && ej.size() == 2, "edges must be [from, to] pairs");
      const auto from = ej[0].get<std::string>();
      const auto to = ej[1].get<std::string>();
      require_input(index.count(from), "edge references unknown component " + from);
      require_input(index.count(to), "edge references unknown component " + to);
      g.edges.emplace_back(index.at(from), index.at(to));
    }
    validate(g);
    return g;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed graph document: ") + e.what());
  }
}

// ---- rank tables ------------------------------------------------------

inline json rank_table_to_json(const RankTable& table) {
  json j;
  j["entries"] = json::array();
  for (const auto& e : table.entries)
    j["entries"].push_back({{"id", e.id},
                            {"criticality", e.criticality},
                            {"app_failure_prob", e.app_failure_prob},
                            {"rank", e.rank}});
  return j;
}

inline std::string rank_table_to_csv(const RankTable& table) {
  std::string out = "id,criticality,app_failure_prob,rank\n";
  for (const auto& e : table.entries)
    out += e.id + "," + format_double(e.criticality) + "," + format_double(e.app_failure_prob) +
           "," + std::to_string(e.rank) + "\n";
  return out;
}

// ---- replica plans ----------------------------------------------------

inline const char* to_string(MdpAction a) {
  switch (a) {
    case MdpAction::create_backup: return "create_backup";
    case MdpAction::reject: return "reject";
    case MdpAction::execute: return "execute";
  }
  return "execute";
}

inline MdpAction mdp_action_from_string(const std::string& s) {
  if (s == "create_backup") return MdpAction::create_backup;
  if (s == "reject") return MdpAction::reject;
  if (s == "execute") return MdpAction::execute;
  throw ValidationError("unknown MDP action: " + s);
}

inline ExecutionOrder order_from_string(const std::string& s) {
  if (s == "parallel") return ExecutionOrder::parallel;
  if (s == "sequential") return ExecutionOrder::sequential;
  throw ValidationError("unknown execution order: " + s);
}

inline json plan_to_json(const ReplicaPlan& plan) {
  json j;
  j["app_id"] = plan.app_id;
  j["nabla"] = plan.nabla;
  j["min_replicas"] = plan.min_replicas;
  j["parallel_fraction"] = plan.parallel_fraction;
  j["total_instances"] = plan.total_instances;
  j["components"] = json::array();
  for (const auto& c : plan.components) {
    json cj{{"id", c.id},
            {"rank", c.rank},
            {"failure_prob", c.failure_prob},
            {"replica_count", c.replica_count},
            {"backups", c.backups()},
            {"order", to_string(c.order)},
            {"is_root", c.is_root},
            {"cpu_demand", c.cpu_demand},
            {"mem_demand", c.mem_demand},
            {"restart_delay", c.restart_delay},
            {"active_duration", c.active_duration},
            {"objective",
             {{"parallel_cpu_cost", c.parallel_cpu_cost},
              {"parallel_mem_cost", c.parallel_mem_cost},
              {"sequential_time_cost", c.sequential_time_cost},
              {"residual_failure_prob", c.residual_failure_prob}}}};
    json states = json::array();
    for (const auto& s : c.chain.states)
      states.push_back(
          {{"status", s.status}, {"exec_order", s.exec_order}, {"backup_count", s.backup_count}});
    json transitions = json::array();
    for (const auto& t : c.chain.transitions)
      transitions.push_back({{"from", t.from},
                             {"action", to_string(t.action)},
                             {"to", t.to},
                             {"probability", t.probability}});
    cj["chain"] = {{"success_prob", c.chain.success_prob},
                   {"states", std::move(states)},
                   {"transitions", std::move(transitions)}};
    j["components"].push_back(std::move(cj));
  }
  return j;
}

inline ReplicaPlan plan_from_json(const json& j) {
  try {
    ReplicaPlan plan;
    plan.app_id = j.at("app_id").get<std::string>();
    plan.nabla = j.at("nabla").get<double>();
    plan.min_replicas = j.at("min_replicas").get<int>();
    plan.parallel_fraction = j.at("parallel_fraction").get<double>();
    plan.total_instances = j.at("total_instances").get<long long>();
    for (const auto& cj : j.at("components")) {
      PlanComponent c;
      c.id = cj.at("id").get<std::string>();
      c.rank = cj.at("rank").get<int>();
      c.failure_prob = cj.at("failure_prob").get<double>();
      c.replica_count = cj.at("replica_count").get<int>();
      c.order = order_from_string(cj.at("order").get<std::string>());
      c.is_root = cj.at("is_root").get<bool>();
      c.cpu_demand = cj.at("cpu_demand").get<int>();
      c.mem_demand = cj.at("mem_demand").get<int>();
      c.restart_delay = cj.at("restart_delay").get<double>();
      c.active_duration = cj.at("active_duration").get<double>();
      const auto& obj = cj.at("objective");
      c.parallel_cpu_cost = obj.at("parallel_cpu_cost").get<double>();
      c.parallel_mem_cost = obj.at("parallel_mem_cost").get<double>();
      c.sequential_time_cost = obj.at("sequential_time_cost").get<double>();
      c.residual_failure_prob = obj.at("residual_failure_prob").get<double>();
      const auto& chain = cj.at("chain");
      c.chain.component_id = c.id;
      c.chain.failure_prob = c.failure_prob;
      c.chain.success_prob = chain.at("success_prob").get<double>();
      c.chain.order = c.order;
      c.chain.is_root = c.is_root;
      for (const auto& sj : chain.at("states"))
        c.chain.states.push_back({sj.at("status").get<int>(), sj.at("exec_order").get<int>(),
                                  sj.at("backup_count").get<int>()});
      for (const auto& tj : chain.at("transitions"))
        c.chain.transitions.push_back({tj.at("from").get<std::size_t>(),
                                       mdp_action_from_string(tj.at("action").get<std::string>()),
                                       tj.at("to").get<std::size_t>(),
                                       tj.at("probability").get<double>()});
      plan.components.push_back(std::move(c));
    }
    return plan;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed plan document: ") + e.what());
  }
}

// ---- placements -------------------------------------------------------

inline json placement_to_json(const PlacementMap& map) {
  json j;
  j["mode"] = to_string(map.mode);
  j["assignments"] = json::array();
  for (const auto& a : map.assignments)
    j["assignments"].push_back({{"app_id", a.instance.app_id},
                                {"component_id", a.instance.component_id},
                                {"replica_index", a.instance.replica_index},
                                {"pm_id", a.pm_id},
                                {"pod_id", a.pod_id}});
  return j;
}

inline std::string placement_to_csv(const PlacementMap& map) {
  std::string out = "app_id,component_id,replica_index,pm_id,pod_id\n";
  for (const auto& a : map.assignments)
    out += a.instance.app_id + "," + a.instance.component_id + "," +
           std::to_string(a.instance.replica_index) + "," + std::to_string(a.pm_id) + "," +
           std::to_string(a.pod_id) + "\n";
  return out;
}

// ---- simulation reports -----------------------------------------------

inline json report_to_json(const SimulationReport& r) {
  json j;
  j["total_vms"] = r.total_vms;
  j["concurrent_vm_demand"] = r.concurrent_vm_demand;
  j["avg_pms_per_app"] = r.avg_pms_per_app;
  j["mean_recovery_time"] = r.mean_recovery_time();
  j["recovery_times"] = r.recovery_times;
  j["pct_resource_affected"] = r.pct_resource_affected;
  j["parallel_backup_success_pct"] = r.parallel_backup_success_pct;
  j["sequential_backup_success_pct"] = r.sequential_backup_success_pct;
  j["parallel_instances"] = r.parallel_instances;
  j["sequential_instances"] = r.sequential_instances;
  j["parallel_backups_activated"] = r.parallel_backups_activated;
  j["parallel_backups_succeeded"] = r.parallel_backups_succeeded;
  j["sequential_backups_activated"] = r.sequential_backups_activated;
  j["sequential_backups_succeeded"] = r.sequential_backups_succeeded;
  j["instances_finished"] = r.instances_finished;
  j["instances_failed"] = r.instances_failed;
  j["instances_never_needed"] = r.instances_never_needed;
  j["apps_failed"] = r.apps_failed;
  j["app_makespans"] = r.app_makespans;
  return j;
}

inline std::string report_to_csv(const SimulationReport& r) {
  std::string out = "metric,value\n";
  auto row = [&](const std::string& k, const std::string& v) { out += k + "," + v + "\n"; };
  row("total_vms", std::to_string(r.total_vms));
  row("concurrent_vm_demand", std::to_string(r.concurrent_vm_demand));
  row("avg_pms_per_app", format_double(r.avg_pms_per_app));
  row("mean_recovery_time", format_double(r.mean_recovery_time()));
  row("recovery_events", std::to_string(r.recovery_times.size()));
  row("pm_failures", std::to_string(r.pct_resource_affected.size()));
  row("parallel_backup_success_pct", format_double(r.parallel_backup_success_pct));
  row("sequential_backup_success_pct", format_double(r.sequential_backup_success_pct));
  row("parallel_instances", std::to_string(r.parallel_instances));
  row("sequential_instances", std::to_string(r.sequential_instances));
  row("instances_finished", std::to_string(r.instances_finished));
  row("instances_failed", std::to_string(r.instances_failed));
  row("instances_never_needed", std::to_string(r.instances_never_needed));
  row("apps_failed", std::to_string(r.apps_failed));
  return out;
}

// ---- files --------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  require_input(out.good(), "cannot open " + path + " for writing");
  out << content;
  require_input(out.good(), "failed writing " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require_input(in.good(), "cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline json load_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace rrft
