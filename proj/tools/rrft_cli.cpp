// Command-line front end: rank / plan / place / simulate / figures / compare.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rrft/experiments.hpp"
#include "rrft/io.hpp"
#include "rrft/pipeline.hpp"

namespace {

struct CommonOpts {
  std::string graph_path;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 42;
};

void emit(const std::string& out, const std::string& text) {
  if (out.empty())
    std::fputs(text.c_str(), stdout);
  else
    rrft::write_text_file(out, text);
}

void emit_json(const std::string& out, const rrft::json& j) {
  if (out.empty()) {
    std::fputs(j.dump(2).c_str(), stdout);
    std::fputs("\n", stdout);
  } else {
    rrft::write_json_file(out, j);
  }
}

rrft::ComponentGraph load_graph(const std::string& path) {
  return rrft::graph_from_json(rrft::load_json_file(path));
}

rrft::ExperimentConfig load_config(const std::string& path, const CommonOpts& opts,
                                   bool seed_set, bool out_set, bool format_set) {
  rrft::ExperimentConfig cfg = path.empty()
                                   ? rrft::config_from_json(rrft::json::object())
                                   : rrft::config_from_json(rrft::load_json_file(path));
  if (seed_set) cfg.seed = opts.seed;
  if (out_set) cfg.output.dir = opts.out;
  if (format_set) cfg.output.format = opts.format;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank-based resource-aware fault tolerance toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOpts opts;
  bool seed_set = false, out_set = false, format_set = false;
  app.add_option("--seed", opts.seed, "master random seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--out", opts.out, "output file (single commands) or directory (experiments)")
      ->each([&](const std::string&) { out_set = true; });
  app.add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->each([&](const std::string&) { format_set = true; });

  double nabla = 0.007;
  int min_replicas = 0;
  double parallel_fraction = 0.5;
  auto add_planner_opts = [&](CLI::App* cmd) {
    cmd->add_option("--nabla", nabla, "tolerance level in (0,1)");
    cmd->add_option("--min-replicas", min_replicas, "lower bound on per-component instances");
    cmd->add_option("--parallel-fraction", parallel_fraction,
                    "share of components recovered in parallel");
  };

  auto* rank_cmd = app.add_subcommand("rank", "rank one application's components");
  rank_cmd->add_option("--graph", opts.graph_path, "application graph JSON")->required();

  auto* plan_cmd = app.add_subcommand("plan", "compute replica counts and execution orders");
  plan_cmd->add_option("--graph", opts.graph_path, "application graph JSON")->required();
  add_planner_opts(plan_cmd);

  std::string mode_str = "strict";
  int pods = 4, machines_per_pod = 8;
  std::vector<int> cpu_range{16, 32}, mem_range{16000, 32000};
  auto* place_cmd = app.add_subcommand("place", "plan and place one application");
  place_cmd->add_option("--graph", opts.graph_path, "application graph JSON")->required();
  add_planner_opts(place_cmd);
  place_cmd->add_option("--mode", mode_str, "placement mode")
      ->check(CLI::IsMember({"strict", "relaxed"}));
  place_cmd->add_option("--pods", pods, "number of pods");
  place_cmd->add_option("--machines-per-pod", machines_per_pod, "machines per pod");
  place_cmd->add_option("--cpu-range", cpu_range, "machine CPU capacity range")->expected(2);
  place_cmd->add_option("--mem-range", mem_range, "machine memory capacity range")->expected(2);

  std::string config_path;
  auto* sim_cmd = app.add_subcommand("simulate", "full run with fault injection");
  sim_cmd->add_option("--config", config_path, "experiment config JSON");
  auto* fig_cmd = app.add_subcommand("figures", "generate every experiment dataset");
  fig_cmd->add_option("--config", config_path, "experiment config JSON");
  auto* cmp_cmd = app.add_subcommand("compare", "strategy resource comparison");
  cmp_cmd->add_option("--config", config_path, "experiment config JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rrft::exit_ok : rrft::exit_validation;
  }

  try {
    if (rank_cmd->parsed()) {
      const auto graph = load_graph(opts.graph_path);
      const auto table = rrft::rank_components(rrft::significance_values(graph));
      if (opts.format == "csv")
        emit(opts.out, rrft::rank_table_to_csv(table));
      else
        emit_json(opts.out, rrft::rank_table_to_json(table));
    } else if (plan_cmd->parsed()) {
      const auto graph = load_graph(opts.graph_path);
      const auto plan = rrft::build_plan(graph, nabla, min_replicas, parallel_fraction);
      emit_json(opts.out, rrft::plan_to_json(plan));
    } else if (place_cmd->parsed()) {
      const auto graph = load_graph(opts.graph_path);
      rrft::PipelineParams params;
      params.nabla = nabla;
      params.min_replicas = min_replicas;
      params.parallel_fraction = parallel_fraction;
      params.mode = mode_str == "strict" ? rrft::PlacementMode::strict
                                         : rrft::PlacementMode::relaxed;
      auto dc = rrft::build_datacenter(pods, machines_per_pod,
                                       {cpu_range[0], cpu_range[1]},
                                       {mem_range[0], mem_range[1]},
                                       rrft::substream_seed(opts.seed, "datacenter"));
      const auto result = rrft::run_pipeline(graph, params, dc, opts.seed);
      if (opts.format == "csv")
        emit(opts.out, rrft::placement_to_csv(result.placement));
      else
        emit_json(opts.out, rrft::placement_to_json(result.placement));
    } else if (sim_cmd->parsed()) {
      const auto cfg = load_config(config_path, opts, seed_set, out_set, format_set);
      const auto report = rrft::run_simulate(cfg);
      std::printf("wrote simulation artifacts to %s\n", cfg.output.dir.c_str());
      std::printf("apps=%d vms=%lld mean_recovery=%s\n", cfg.workload.num_apps,
                  report.concurrent_vm_demand,
                  rrft::format_double(report.mean_recovery_time()).c_str());
    } else if (fig_cmd->parsed()) {
      const auto cfg = load_config(config_path, opts, seed_set, out_set, format_set);
      const auto files = rrft::run_figures(cfg);
      for (const auto& f : files) std::printf("wrote %s/%s\n", cfg.output.dir.c_str(), f.c_str());
    } else if (cmp_cmd->parsed()) {
      const auto cfg = load_config(config_path, opts, seed_set, out_set, format_set);
      const auto ds = rrft::compare_strategies(cfg);
      std::fputs(ds.to_csv().c_str(), stdout);
    }
  } catch (const rrft::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return rrft::exit_validation;
  } catch (const rrft::InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return rrft::exit_infeasible;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return rrft::exit_internal;
  }
  return rrft::exit_ok;
}
