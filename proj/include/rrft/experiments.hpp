#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "rrft/fault_sim.hpp"
#include "rrft/io.hpp"
#include "rrft/pipeline.hpp"
#include "rrft/workload_gen.hpp"

namespace rrft {

// Replication strategies compared by the experiment drivers. All of them
// reuse the same placement engine, so resource comparisons isolate the
// replication policy.
enum class Strategy { rrft, rocloud_like, ftcloud_like, uniform_k };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::rrft: return "rrft";
    case Strategy::rocloud_like: return "rocloud_like";
    case Strategy::ftcloud_like: return "ftcloud_like";
    case Strategy::uniform_k: return "uniform_k";
  }
  return "rrft";
}

inline Strategy strategy_from_string(const std::string& s) {
  if (s == "rrft") return Strategy::rrft;
  if (s == "rocloud_like") return Strategy::rocloud_like;
  if (s == "ftcloud_like") return Strategy::ftcloud_like;
  if (s == "uniform_k") return Strategy::uniform_k;
  throw ValidationError("unknown strategy: " + s);
}

struct DatacenterConfig {
  int num_pods = 28;
  int machines_per_pod = 32;
  std::pair<int, int> cpu_capacity_range{16, 32};
  std::pair<int, int> mem_capacity_range{16000, 32000};
  // The configured pod count provisions this many applications; experiment
  // drivers scale the pod count linearly when a grid point asks for more.
  int apps_per_cell = 100;
};

struct PlannerConfig {
  double nabla = 0.007;
  int min_replicas = 0;
  double parallel_fraction = 0.5;
};

struct BaselineConfig {
  int uniform_k_backups = 5;  // backups per component for uniform_k
  int fixed_backups = 5;      // budget for ftcloud_like parallel components
};

struct FaultConfig {
  std::pair<double, double> parallel_epsilon_range{0.0, 2.0};
  double pm_failure_horizon = 1000.0;
  int simulate_pm_failures = 10;
};

struct FigureConfig {
  std::vector<int> app_count_grid{100, 200};
  std::vector<double> nabla_grid{0.001, 0.005, 0.01, 0.05, 0.1};
  std::vector<int> component_count_grid{100, 300, 500};
  std::vector<int> pm_failure_counts{10, 25, 50, 100};
  int blast_num_apps = 200;
  int seeds_per_point = 10;
  int fig5_apps = 100;
  int recovery_components = 500;
};

struct OutputConfig {
  std::string dir = "out";
  std::string format = "csv";  // csv | json
};

struct ExperimentConfig {
  std::uint64_t seed = 42;
  WorkloadConfig workload;
  DatacenterConfig datacenter;
  PlannerConfig planner;
  PlacementMode placement_mode = PlacementMode::strict;
  std::vector<Strategy> strategies{Strategy::rrft, Strategy::rocloud_like,
                                   Strategy::ftcloud_like, Strategy::uniform_k};
  BaselineConfig baselines;
  FaultConfig faults;
  FigureConfig figures;
  OutputConfig output;
};

// ---- config parsing -------------------------------------------------------

namespace detail {

template <typename T>
inline std::pair<T, T> pair_from(const json& j, const char* key, std::pair<T, T> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  require_input(v.is_array() && v.size() == 2,
                std::string(key) + " must be a two-element array");
  return {v[0].get<T>(), v[1].get<T>()};
}

inline PlacementMode mode_from_string(const std::string& s) {
  if (s == "strict") return PlacementMode::strict;
  if (s == "relaxed") return PlacementMode::relaxed;
  throw ValidationError("unknown placement mode: " + s);
}

}  // namespace detail

inline ExperimentConfig config_from_json(const json& j) {
  try {
    ExperimentConfig cfg;
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("workload")) {
      const auto& w = j.at("workload");
      cfg.workload.num_apps = w.value("num_apps", cfg.workload.num_apps);
      cfg.workload.components_range =
          detail::pair_from<int>(w, "components_range", cfg.workload.components_range);
      cfg.workload.edge_probability_range = detail::pair_from<double>(
          w, "edge_probability_range", cfg.workload.edge_probability_range);
      cfg.workload.cpu_demand_range =
          detail::pair_from<int>(w, "cpu_demand_range", cfg.workload.cpu_demand_range);
      cfg.workload.mem_demand_range =
          detail::pair_from<int>(w, "mem_demand_range", cfg.workload.mem_demand_range);
      cfg.workload.lambda_h_range =
          detail::pair_from<double>(w, "lambda_h_range", cfg.workload.lambda_h_range);
      cfg.workload.active_duration_range = detail::pair_from<double>(
          w, "active_duration_range", cfg.workload.active_duration_range);
      cfg.workload.fail_count_range = detail::pair_from<long long>(
          w, "fail_count_range", cfg.workload.fail_count_range);
      cfg.workload.restart_delay_range = detail::pair_from<double>(
          w, "restart_delay_range", cfg.workload.restart_delay_range);
      cfg.workload.arrival_rate = w.value("arrival_rate", cfg.workload.arrival_rate);
    }
    if (j.contains("datacenter")) {
      const auto& d = j.at("datacenter");
      cfg.datacenter.num_pods = d.value("num_pods", cfg.datacenter.num_pods);
      cfg.datacenter.machines_per_pod =
          d.value("machines_per_pod", cfg.datacenter.machines_per_pod);
      cfg.datacenter.cpu_capacity_range =
          detail::pair_from<int>(d, "cpu_capacity_range", cfg.datacenter.cpu_capacity_range);
      cfg.datacenter.mem_capacity_range =
          detail::pair_from<int>(d, "mem_capacity_range", cfg.datacenter.mem_capacity_range);
      cfg.datacenter.apps_per_cell = d.value("apps_per_cell", cfg.datacenter.apps_per_cell);
      require_input(cfg.datacenter.apps_per_cell > 0, "apps_per_cell must be positive");
    }
    if (j.contains("planner")) {
      const auto& p = j.at("planner");
      cfg.planner.nabla = p.value("nabla", cfg.planner.nabla);
      cfg.planner.min_replicas = p.value("min_replicas", cfg.planner.min_replicas);
      cfg.planner.parallel_fraction =
          p.value("parallel_fraction", cfg.planner.parallel_fraction);
    }
    cfg.placement_mode =
        detail::mode_from_string(j.value("placement_mode", std::string("strict")));
    if (j.contains("strategies")) {
      cfg.strategies.clear();
      for (const auto& s : j.at("strategies"))
        cfg.strategies.push_back(strategy_from_string(s.get<std::string>()));
      require_input(!cfg.strategies.empty(), "strategies must not be empty");
    }
    if (j.contains("baselines")) {
      const auto& b = j.at("baselines");
      cfg.baselines.uniform_k_backups =
          b.value("uniform_k_backups", cfg.baselines.uniform_k_backups);
      cfg.baselines.fixed_backups = b.value("fixed_backups", cfg.baselines.fixed_backups);
      require_input(cfg.baselines.uniform_k_backups >= 0 && cfg.baselines.fixed_backups >= 0,
                    "baseline backup budgets must be >= 0");
    }
    if (j.contains("faults")) {
      const auto& f = j.at("faults");
      cfg.faults.parallel_epsilon_range = detail::pair_from<double>(
          f, "parallel_epsilon_range", cfg.faults.parallel_epsilon_range);
      cfg.faults.pm_failure_horizon =
          f.value("pm_failure_horizon", cfg.faults.pm_failure_horizon);
      cfg.faults.simulate_pm_failures =
          f.value("simulate_pm_failures", cfg.faults.simulate_pm_failures);
    }
    if (j.contains("figures")) {
      const auto& f = j.at("figures");
      if (f.contains("app_count_grid"))
        cfg.figures.app_count_grid = f.at("app_count_grid").get<std::vector<int>>();
      if (f.contains("nabla_grid"))
        cfg.figures.nabla_grid = f.at("nabla_grid").get<std::vector<double>>();
      if (f.contains("component_count_grid"))
        cfg.figures.component_count_grid =
            f.at("component_count_grid").get<std::vector<int>>();
      if (f.contains("pm_failure_counts"))
        cfg.figures.pm_failure_counts = f.at("pm_failure_counts").get<std::vector<int>>();
      cfg.figures.blast_num_apps = f.value("blast_num_apps", cfg.figures.blast_num_apps);
      cfg.figures.seeds_per_point = f.value("seeds_per_point", cfg.figures.seeds_per_point);
      cfg.figures.fig5_apps = f.value("fig5_apps", cfg.figures.fig5_apps);
      cfg.figures.recovery_components =
          f.value("recovery_components", cfg.figures.recovery_components);
      require_input(cfg.figures.seeds_per_point > 0, "seeds_per_point must be positive");
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      cfg.output.dir = o.value("dir", cfg.output.dir);
      cfg.output.format = o.value("format", cfg.output.format);
      require_input(cfg.output.format == "csv" || cfg.output.format == "json",
                    "output format must be csv or json");
    }
    validate(cfg.workload);
    require_input(cfg.planner.nabla > 0.0 && cfg.planner.nabla < 1.0,
                  "planner nabla must lie in (0, 1)");
    return cfg;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed experiment config: ") + e.what());
  }
}

// ---- strategy planning ------------------------------------------------

// Builds one application's plan under the chosen replication strategy.
inline ReplicaPlan plan_for_strategy(const ComponentGraph& graph, Strategy strategy,
                                     const PlannerConfig& planner,
                                     const BaselineConfig& baselines) {
  const auto records = significance_values(graph);
  switch (strategy) {
    case Strategy::rrft:
      return detail::assemble_plan(
          graph, records, rank_components(records), planner.nabla, planner.min_replicas,
          planner.parallel_fraction,
          [&](const PlanComponent& pc) {
            return replica_count(pc.failure_prob, planner.nabla, planner.min_replicas);
          },
          /*tolerance_bound_holds=*/true);
    case Strategy::rocloud_like:
      // Reliability-driven counts, replication-style recovery: everything
      // runs parallel.
      return detail::assemble_plan(
          graph, records, rank_rocloud_like(records), planner.nabla, planner.min_replicas,
          1.0,
          [&](const PlanComponent& pc) {
            return replica_count(pc.failure_prob, planner.nabla, planner.min_replicas);
          },
          /*tolerance_bound_holds=*/true);
    case Strategy::ftcloud_like:
      // Structure-driven ranking with a fixed budget on the significant
      // prefix; no reliability model, so no per-component sizing.
      return detail::assemble_plan(
          graph, records, rank_ftcloud_like(graph, {}), planner.nabla, planner.min_replicas,
          planner.parallel_fraction,
          [&](const PlanComponent& pc) {
            return pc.order == ExecutionOrder::parallel
                       ? baselines.fixed_backups + 1
                       : std::max(planner.min_replicas, 1);
          },
          /*tolerance_bound_holds=*/false);
    case Strategy::uniform_k:
      return detail::assemble_plan(
          graph, records, rank_components(records), planner.nabla, planner.min_replicas, 1.0,
          [&](const PlanComponent&) {
            return std::max(baselines.uniform_k_backups + 1,
                            std::max(planner.min_replicas, 1));
          },
          /*tolerance_bound_holds=*/false);
  }
  throw ValidationError("unknown strategy");
}

// ---- shared experiment plumbing -----------------------------------------

namespace detail {

inline std::vector<ComponentGraph> make_workload(const WorkloadConfig& base, int num_apps,
                                                 std::uint64_t seed) {
  WorkloadConfig cfg = base;
  cfg.num_apps = num_apps;
  cfg.seed = seed;
  std::vector<ComponentGraph> apps;
  apps.reserve(static_cast<std::size_t>(num_apps));
  for (int i = 0; i < num_apps; ++i)
    apps.push_back(generate_application(cfg, static_cast<std::uint64_t>(i)));
  return apps;
}

inline std::vector<ReplicaPlan> plan_workload(const std::vector<ComponentGraph>& apps,
                                              Strategy strategy, const PlannerConfig& planner,
                                              const BaselineConfig& baselines) {
  std::vector<ReplicaPlan> plans;
  plans.reserve(apps.size());
  for (const auto& g : apps) plans.push_back(plan_for_strategy(g, strategy, planner, baselines));
  return plans;
}

// Datacenter provisioned for `num_apps` applications: the configured pod
// count covers one cell of apps_per_cell apps and scales linearly.
inline Datacenter provision_datacenter(const DatacenterConfig& dcc, int num_apps,
                                       std::uint64_t seed) {
  const int cells = std::max(1, (num_apps + dcc.apps_per_cell - 1) / dcc.apps_per_cell);
  return build_datacenter(dcc.num_pods * cells, dcc.machines_per_pod, dcc.cpu_capacity_range,
                          dcc.mem_capacity_range, seed);
}

inline PlacementMap place_workload(const std::vector<ReplicaPlan>& plans, Datacenter& dc,
                                   PlacementMode mode, std::uint64_t seed) {
  PlacementMap map;
  map.mode = mode;
  for (std::size_t i = 0; i < plans.size(); ++i)
    map.merge_from(place_application(plans[i], dc, mode, substream_seed(seed, "place", i)));
  return map;
}

inline PlacementMap place_workload_random(const std::vector<ReplicaPlan>& plans, Datacenter& dc,
                                          std::uint64_t seed) {
  PlacementMap map;
  map.mode = PlacementMode::relaxed;
  for (std::size_t i = 0; i < plans.size(); ++i)
    map.merge_from(place_random(plans[i], dc, substream_seed(seed, "place_random", i)));
  return map;
}

inline long long workload_concurrent_vms(const std::vector<ReplicaPlan>& plans) {
  long long vms = 0;
  for (const auto& p : plans) vms += concurrent_vm_demand(p);
  return vms;
}

inline long long workload_instances(const std::vector<ReplicaPlan>& plans) {
  long long n = 0;
  for (const auto& p : plans) n += p.total_instances;
  return n;
}

}  // namespace detail

// ---- tabular datasets -----------------------------------------------------

struct Dataset {
  std::string name;
  std::string label;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i)
      out += columns[i] + (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.size(); ++i)
        out += row[i] + (i + 1 < row.size() ? "," : "\n");
    return out;
  }

  json to_json() const {
    json j;
    j["name"] = name;
    j["label"] = label;
    j["rows"] = json::array();
    for (const auto& row : rows) {
      json r;
      for (std::size_t i = 0; i < columns.size(); ++i) r[columns[i]] = row[i];
      j["rows"].push_back(std::move(r));
    }
    return j;
  }
};

// ---- figure drivers ---------------------------------------------------

// Total VM demand per strategy over an application-count grid.
inline Dataset figure_vm_totals(const ExperimentConfig& cfg) {
  Dataset ds{"fig3", "total VM demand vs application count",
             {"strategy", "num_apps", "seed", "concurrent_vm_demand", "total_instances"}, {}};
  for (int num_apps : cfg.figures.app_count_grid) {
    for (int rep = 0; rep < cfg.figures.seeds_per_point; ++rep) {
      const auto apps = detail::make_workload(
          cfg.workload, num_apps,
          substream_seed(cfg.seed, "fig3_workload", static_cast<std::uint64_t>(num_apps) * 1000 + rep));
      for (Strategy s : cfg.strategies) {
        const auto plans = detail::plan_workload(apps, s, cfg.planner, cfg.baselines);
        ds.rows.push_back({to_string(s), std::to_string(num_apps), std::to_string(rep),
                           std::to_string(detail::workload_concurrent_vms(plans)),
                           std::to_string(detail::workload_instances(plans))});
      }
    }
  }
  return ds;
}

// Average distinct machines per application, after rule-driven placement.
inline Dataset figure_pm_usage(const ExperimentConfig& cfg) {
  Dataset ds{"fig4", "average machines per application vs application count",
             {"strategy", "num_apps", "avg_pms_per_app"}, {}};
  for (int num_apps : cfg.figures.app_count_grid) {
    const auto apps = detail::make_workload(cfg.workload, num_apps,
                                            substream_seed(cfg.seed, "fig4_workload", num_apps));
    const Datacenter proto = detail::provision_datacenter(
        cfg.datacenter, num_apps, substream_seed(cfg.seed, "fig4_dc", num_apps));
    for (Strategy s : cfg.strategies) {
      const auto plans = detail::plan_workload(apps, s, cfg.planner, cfg.baselines);
      Datacenter dc = proto;
      const auto map = detail::place_workload(plans, dc, cfg.placement_mode,
                                              substream_seed(cfg.seed, "fig4_place", num_apps));
      ds.rows.push_back({to_string(s), std::to_string(num_apps),
                         format_double(average_machines_per_app(map))});
    }
  }
  return ds;
}

// Per-application VM demand when every component carries the same backup
// budget, by execution order.
inline Dataset figure_order_vm_split(const ExperimentConfig& cfg) {
  Dataset ds{"fig5", "per-app VM demand by execution order at a uniform backup budget",
             {"app", "num_components", "vms_parallel", "vms_sequential", "vms_hybrid"}, {}};
  const auto apps = detail::make_workload(cfg.workload, cfg.figures.fig5_apps,
                                          substream_seed(cfg.seed, "fig5_workload"));
  const int k = cfg.baselines.uniform_k_backups + 1;
  for (const auto& g : apps) {
    const auto records = significance_values(g);
    const auto table = rank_components(records);
    const auto count_fixed = [&](const PlanComponent&) { return k; };
    const auto parallel = detail::assemble_plan(g, records, table, cfg.planner.nabla,
                                                cfg.planner.min_replicas, 1.0, count_fixed, false);
    const auto sequential = detail::assemble_plan(g, records, table, cfg.planner.nabla,
                                                  cfg.planner.min_replicas, 0.0, count_fixed, false);
    const auto hybrid = detail::assemble_plan(g, records, table, cfg.planner.nabla,
                                              cfg.planner.min_replicas,
                                              cfg.planner.parallel_fraction, count_fixed, false);
    ds.rows.push_back({g.app_id, std::to_string(g.size()),
                       std::to_string(concurrent_vm_demand(parallel)),
                       std::to_string(concurrent_vm_demand(sequential)),
                       std::to_string(concurrent_vm_demand(hybrid))});
  }
  return ds;
}

namespace detail {

// Recovery-oriented simulation without placement: recovery and success
// metrics only depend on plans and fault draws.
inline SimulationReport simulate_recovery(const std::vector<ComponentGraph>& apps,
                                          const std::vector<ReplicaPlan>& plans,
                                          const FaultConfig& faults, std::uint64_t seed) {
  Datacenter dc = build_datacenter(1, 1, {1, 1}, {1, 1}, substream_seed(seed, "stub_dc"));
  const auto script = make_fault_script(plans, dc, 0, faults.pm_failure_horizon,
                                        substream_seed(seed, "faults"));
  PlacementMap empty;
  SimParams params;
  params.parallel_epsilon_range = faults.parallel_epsilon_range;
  params.pm_failure_horizon = faults.pm_failure_horizon;
  params.seed = substream_seed(seed, "sim");
  return run_simulation(apps, plans, empty, dc, script, params);
}

inline int apps_for_components(const WorkloadConfig& w, int target_components) {
  const double mean = (w.components_range.first + w.components_range.second) / 2.0;
  return std::max(1, static_cast<int>(std::lround(target_components / mean)));
}

}  // namespace detail

// Mean recovery time per execution-order policy over a component-count grid.
inline Dataset figure_recovery_by_order(const ExperimentConfig& cfg) {
  Dataset ds{"fig6", "mean recovery time by execution order",
             {"order_policy", "total_components", "mean_recovery_s", "recovery_events"}, {}};
  const std::vector<std::pair<std::string, double>> policies{
      {"parallel", 1.0}, {"hybrid", cfg.planner.parallel_fraction}, {"sequential", 0.0}};
  for (int target : cfg.figures.component_count_grid) {
    const int num_apps = detail::apps_for_components(cfg.workload, target);
    for (const auto& [policy, fraction] : policies) {
      double recovery_sum = 0.0;
      long long event_count = 0;
      long long components = 0;
      for (int rep = 0; rep < cfg.figures.seeds_per_point; ++rep) {
        const auto wl_seed = substream_seed(cfg.seed, "fig6_workload",
                                            static_cast<std::uint64_t>(target) * 1000 + rep);
        const auto apps = detail::make_workload(cfg.workload, num_apps, wl_seed);
        PlannerConfig planner = cfg.planner;
        planner.parallel_fraction = fraction;
        const auto plans =
            detail::plan_workload(apps, Strategy::rrft, planner, cfg.baselines);
        const auto report = detail::simulate_recovery(
            apps, plans, cfg.faults,
            substream_seed(cfg.seed, "fig6_sim", static_cast<std::uint64_t>(target) * 1000 + rep));
        for (double t : report.recovery_times) recovery_sum += t;
        event_count += static_cast<long long>(report.recovery_times.size());
        for (const auto& g : apps) components += static_cast<long long>(g.size());
      }
      const double mean = event_count > 0 ? recovery_sum / event_count : 0.0;
      ds.rows.push_back({policy,
                         std::to_string(components / cfg.figures.seeds_per_point),
                         format_double(mean), std::to_string(event_count)});
    }
  }
  return ds;
}

// Resource demand and recovery against the tolerance-level grid.
inline std::pair<Dataset, Dataset> figure_tolerance_sweep(const ExperimentConfig& cfg) {
  Dataset vms{"fig7", "VM demand vs tolerance level",
              {"nabla", "total_instances", "concurrent_vm_demand"}, {}};
  Dataset rec{"fig8", "mean recovery time vs tolerance level",
              {"nabla", "mean_recovery_s", "recovery_events"}, {}};
  const int num_apps =
      detail::apps_for_components(cfg.workload, cfg.figures.recovery_components);
  for (double nabla : cfg.figures.nabla_grid) {
    long long instances = 0, demand = 0, events = 0;
    double recovery_sum = 0.0;
    for (int rep = 0; rep < cfg.figures.seeds_per_point; ++rep) {
      // Common random numbers across the grid: the workload and fault seeds
      // depend on the repetition only, so sweeping nabla changes nothing
      // but the plans.
      const auto apps = detail::make_workload(cfg.workload, num_apps,
                                              substream_seed(cfg.seed, "fig78_workload", rep));
      PlannerConfig planner = cfg.planner;
      planner.nabla = nabla;
      const auto plans = detail::plan_workload(apps, Strategy::rrft, planner, cfg.baselines);
      instances += detail::workload_instances(plans);
      demand += detail::workload_concurrent_vms(plans);
      const auto report = detail::simulate_recovery(
          apps, plans, cfg.faults, substream_seed(cfg.seed, "fig78_sim", rep));
      for (double t : report.recovery_times) recovery_sum += t;
      events += static_cast<long long>(report.recovery_times.size());
    }
    vms.rows.push_back({format_double(nabla),
                        std::to_string(instances / cfg.figures.seeds_per_point),
                        std::to_string(demand / cfg.figures.seeds_per_point)});
    rec.rows.push_back({format_double(nabla),
                        format_double(events > 0 ? recovery_sum / events : 0.0),
                        std::to_string(events)});
  }
  return {vms, rec};
}

// Average backup counts by execution order over the application-count grid.
inline Dataset figure_backup_split(const ExperimentConfig& cfg) {
  Dataset ds{"fig9", "average backups per application by execution order",
             {"num_apps", "avg_parallel_backups", "avg_sequential_backups"}, {}};
  for (int num_apps : cfg.figures.app_count_grid) {
    const auto apps = detail::make_workload(cfg.workload, num_apps,
                                            substream_seed(cfg.seed, "fig9_workload", num_apps));
    const auto plans = detail::plan_workload(apps, Strategy::rrft, cfg.planner, cfg.baselines);
    long long par = 0, seq = 0;
    for (const auto& p : plans)
      for (const auto& c : p.components)
        (c.order == ExecutionOrder::parallel ? par : seq) += c.backups();
    ds.rows.push_back({std::to_string(num_apps),
                       format_double(static_cast<double>(par) / num_apps),
                       format_double(static_cast<double>(seq) / num_apps)});
  }
  return ds;
}

// Blast radius: rule-driven vs random placement under the same machine-kill
// sequence (paired seeds).
inline Dataset figure_blast_radius(const ExperimentConfig& cfg) {
  Dataset ds{"fig10", "mean affected share vs machine failures, by placement policy",
             {"placement", "num_pm_failures", "seed", "avg_pct_resource_affected"}, {}};
  const int num_apps = cfg.figures.blast_num_apps;
  int max_failures = 0;
  for (int m : cfg.figures.pm_failure_counts) max_failures = std::max(max_failures, m);

  for (int rep = 0; rep < cfg.figures.seeds_per_point; ++rep) {
    const auto apps = detail::make_workload(cfg.workload, num_apps,
                                            substream_seed(cfg.seed, "fig10_workload", rep));
    const auto plans = detail::plan_workload(apps, Strategy::rrft, cfg.planner, cfg.baselines);
    const Datacenter proto = detail::provision_datacenter(
        cfg.datacenter, num_apps, substream_seed(cfg.seed, "fig10_dc", rep));
    const auto kill_seed = substream_seed(cfg.seed, "fig10_kills", rep);

    Datacenter dc_rules = proto;
    const auto map_rules = detail::place_workload(plans, dc_rules, cfg.placement_mode,
                                                  substream_seed(cfg.seed, "fig10_place", rep));
    const auto series_rules = measure_blast_radius(map_rules, dc_rules, max_failures, kill_seed);

    Datacenter dc_random = proto;
    const auto map_random = detail::place_workload_random(
        plans, dc_random, substream_seed(cfg.seed, "fig10_rand", rep));
    const auto series_random =
        measure_blast_radius(map_random, dc_random, max_failures, kill_seed);

    for (int m : cfg.figures.pm_failure_counts) {
      require_input(m >= 1 && m <= max_failures, "pm_failure_counts entries must be >= 1");
      ds.rows.push_back({"rules", std::to_string(m), std::to_string(rep),
                         format_double(series_rules[static_cast<std::size_t>(m) - 1])});
      ds.rows.push_back({"random", std::to_string(m), std::to_string(rep),
                         format_double(series_random[static_cast<std::size_t>(m) - 1])});
    }
  }
  return ds;
}

// Backup success shares over a component-count grid (hybrid plans).
inline std::pair<Dataset, Dataset> figure_success_rates(const ExperimentConfig& cfg) {
  Dataset par{"fig11", "parallel backup success share",
              {"total_components", "parallel_success_pct"}, {}};
  Dataset seq{"fig12", "sequential backup success share",
              {"total_components", "sequential_success_pct"}, {}};
  for (int target : cfg.figures.component_count_grid) {
    const int num_apps = detail::apps_for_components(cfg.workload, target);
    const auto apps = detail::make_workload(cfg.workload, num_apps,
                                            substream_seed(cfg.seed, "fig1112_workload", target));
    const auto plans = detail::plan_workload(apps, Strategy::rrft, cfg.planner, cfg.baselines);
    const auto report = detail::simulate_recovery(apps, plans, cfg.faults,
                                                  substream_seed(cfg.seed, "fig1112_sim", target));
    long long components = 0;
    for (const auto& g : apps) components += static_cast<long long>(g.size());
    par.rows.push_back({std::to_string(components),
                        format_double(report.parallel_backup_success_pct)});
    seq.rows.push_back({std::to_string(components),
                        format_double(report.sequential_backup_success_pct)});
  }
  return {par, seq};
}

// ---- entry points used by the CLI ---------------------------------------

namespace detail {

inline void write_dataset(const Dataset& ds, const OutputConfig& out, json& manifest) {
  namespace fs = std::filesystem;
  const std::string file = ds.name + "." + out.format;
  const fs::path path = fs::path(out.dir) / file;
  if (out.format == "csv")
    write_text_file(path.string(), ds.to_csv());
  else
    write_json_file(path.string(), ds.to_json());
  manifest["artifacts"].push_back({{"file", file}, {"label", ds.label}});
}

inline json new_manifest() {
  json manifest;
  manifest["label"] = "protocol-faithful, distribution-approximate";
  manifest["artifacts"] = json::array();
  return manifest;
}

inline void finish_manifest(const OutputConfig& out, json& manifest) {
  namespace fs = std::filesystem;
  write_json_file((fs::path(out.dir) / "manifest.json").string(), manifest);
}

}  // namespace detail

// Generates every figure dataset plus the manifest into the output dir.
inline std::vector<std::string> run_figures(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output.dir);
  json manifest = detail::new_manifest();
  std::vector<std::string> written;

  auto emit = [&](const Dataset& ds) {
    detail::write_dataset(ds, cfg.output, manifest);
    written.push_back(ds.name + "." + cfg.output.format);
  };

  emit(figure_vm_totals(cfg));
  emit(figure_pm_usage(cfg));
  emit(figure_order_vm_split(cfg));
  emit(figure_recovery_by_order(cfg));
  const auto [fig7, fig8] = figure_tolerance_sweep(cfg);
  emit(fig7);
  emit(fig8);
  emit(figure_backup_split(cfg));
  emit(figure_blast_radius(cfg));
  const auto [fig11, fig12] = figure_success_rates(cfg);
  emit(fig11);
  emit(fig12);

  detail::finish_manifest(cfg.output, manifest);
  written.push_back("manifest.json");
  return written;
}

// One full simulation run: workload, plans, placement, fault script, report.
inline SimulationReport run_simulate(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output.dir);
  json manifest = detail::new_manifest();

  const auto apps = detail::make_workload(cfg.workload, cfg.workload.num_apps,
                                          substream_seed(cfg.seed, "sim_workload"));
  const auto plans = detail::plan_workload(apps, Strategy::rrft, cfg.planner, cfg.baselines);
  Datacenter dc = detail::provision_datacenter(cfg.datacenter, cfg.workload.num_apps,
                                               substream_seed(cfg.seed, "sim_dc"));
  const auto map = detail::place_workload(plans, dc, cfg.placement_mode,
                                          substream_seed(cfg.seed, "sim_place"));
  const auto violations = audit_rules(map);
  check_invariant(violations.empty(), "rule-driven placement failed its own audit");

  const auto script = make_fault_script(plans, dc, cfg.faults.simulate_pm_failures,
                                        cfg.faults.pm_failure_horizon,
                                        substream_seed(cfg.seed, "sim_faults"));
  SimParams params;
  params.parallel_epsilon_range = cfg.faults.parallel_epsilon_range;
  params.pm_failure_horizon = cfg.faults.pm_failure_horizon;
  params.seed = substream_seed(cfg.seed, "sim_run");
  const auto report = run_simulation(apps, plans, map, dc, script, params);

  namespace fs = std::filesystem;
  if (cfg.output.format == "csv")
    write_text_file((fs::path(cfg.output.dir) / "report.csv").string(), report_to_csv(report));
  write_json_file((fs::path(cfg.output.dir) / "report.json").string(), report_to_json(report));
  manifest["artifacts"].push_back(
      {{"file", std::string("report.") + cfg.output.format}, {"label", "simulation report"}});
  if (cfg.output.format == "csv")
    manifest["artifacts"].push_back({{"file", "report.json"}, {"label", "simulation report"}});

  if (cfg.output.format == "csv")
    write_text_file((fs::path(cfg.output.dir) / "placement.csv").string(),
                    placement_to_csv(map));
  else
    write_json_file((fs::path(cfg.output.dir) / "placement.json").string(),
                    placement_to_json(map));
  manifest["artifacts"].push_back(
      {{"file", std::string("placement.") + cfg.output.format}, {"label", "placement map"}});

  detail::finish_manifest(cfg.output, manifest);
  return report;
}

// Strategy comparison: resource totals with percentage deltas vs rrft.
inline Dataset compare_strategies(const ExperimentConfig& cfg) {
  Dataset ds{"compare", "strategy totals (deltas vs rrft)",
             {"strategy", "concurrent_vm_demand", "total_instances", "avg_pms_per_app",
              "vm_demand_delta_pct"},
             {}};
  const auto apps = detail::make_workload(cfg.workload, cfg.workload.num_apps,
                                          substream_seed(cfg.seed, "compare_workload"));
  const Datacenter proto = detail::provision_datacenter(
      cfg.datacenter, cfg.workload.num_apps, substream_seed(cfg.seed, "compare_dc"));

  long long rrft_demand = 0;
  std::vector<std::tuple<Strategy, long long, long long, double>> totals;
  for (Strategy s : cfg.strategies) {
    const auto plans = detail::plan_workload(apps, s, cfg.planner, cfg.baselines);
    Datacenter dc = proto;
    const auto map = detail::place_workload(plans, dc, cfg.placement_mode,
                                            substream_seed(cfg.seed, "compare_place"));
    const long long demand = detail::workload_concurrent_vms(plans);
    totals.emplace_back(s, demand, detail::workload_instances(plans),
                        average_machines_per_app(map));
    if (s == Strategy::rrft) rrft_demand = demand;
  }
  for (const auto& [s, demand, instances, pms] : totals) {
    const double delta = rrft_demand > 0
                             ? 100.0 * (static_cast<double>(demand) - rrft_demand) / rrft_demand
                             : 0.0;
    ds.rows.push_back({to_string(s), std::to_string(demand), std::to_string(instances),
                       format_double(pms), format_double(delta)});
  }

  std::filesystem::create_directories(cfg.output.dir);
  json manifest = detail::new_manifest();
  detail::write_dataset(ds, cfg.output, manifest);
  detail::finish_manifest(cfg.output, manifest);
  return ds;
}

}  // namespace rrft
