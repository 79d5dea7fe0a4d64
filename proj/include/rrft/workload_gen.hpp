#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rrft/component_graph.hpp"
#include "rrft/error.hpp"
#include "rrft/rng.hpp"

namespace rrft {

// Synthetic workload parameters. failure_rate is driven indirectly: the
// product failure_rate * active_duration is drawn from lambda_h_range, which
// keeps the per-execution failure probability inside its analytic band.
struct WorkloadConfig {
  std::uint64_t seed = 1;
  int num_apps = 100;
  std::pair<int, int> components_range{4, 16};
  std::pair<double, double> edge_probability_range{0.5, 0.8};
  std::pair<int, int> cpu_demand_range{1, 4};
  std::pair<int, int> mem_demand_range{1000, 2000};
  std::pair<double, double> lambda_h_range{0.001, 2.0};
  std::pair<double, double> active_duration_range{1.0, 10.0};
  std::pair<long long, long long> fail_count_range{1, 50};
  std::pair<double, double> restart_delay_range{2.0, 6.0};
  double arrival_rate = 1.0;
};

inline void validate(const WorkloadConfig& cfg) {
  require_input(cfg.num_apps >= 0, "num_apps must be >= 0");
  require_input(cfg.components_range.first >= 2 &&
                    cfg.components_range.first <= cfg.components_range.second,
                "components_range must be an interval with minimum >= 2");
  require_input(cfg.edge_probability_range.first >= 0.0 &&
                    cfg.edge_probability_range.first <= cfg.edge_probability_range.second &&
                    cfg.edge_probability_range.second <= 1.0,
                "edge_probability_range must lie in [0, 1]");
  require_input(cfg.cpu_demand_range.first >= 1 &&
                    cfg.cpu_demand_range.first <= cfg.cpu_demand_range.second,
                "cpu_demand_range is invalid");
  require_input(cfg.mem_demand_range.first >= 1 &&
                    cfg.mem_demand_range.first <= cfg.mem_demand_range.second,
                "mem_demand_range is invalid");
  require_input(cfg.lambda_h_range.first > 0.0 &&
                    cfg.lambda_h_range.first <= cfg.lambda_h_range.second,
                "lambda_h_range must be positive");
  require_input(cfg.active_duration_range.first > 0.0 &&
                    cfg.active_duration_range.first <= cfg.active_duration_range.second,
                "active_duration_range must be positive");
  require_input(cfg.fail_count_range.first >= 0 &&
                    cfg.fail_count_range.first <= cfg.fail_count_range.second,
                "fail_count_range is invalid");
  require_input(cfg.restart_delay_range.first >= 0.0 &&
                    cfg.restart_delay_range.first <= cfg.restart_delay_range.second,
                "restart_delay_range must be non-negative");
  require_input(cfg.arrival_rate > 0.0, "arrival_rate must be positive");
}

// One random DAG application: vertices get a random topological order, every
// forward pair becomes an edge with the app's edge probability, and isolated
// vertices are repaired with one extra edge so the graph always validates.
inline ComponentGraph generate_application(const WorkloadConfig& cfg, std::uint64_t app_index) {
  validate(cfg);
  Rng rng(substream_seed(cfg.seed, "app", app_index));

  const int n = rng.uniform_int(cfg.components_range.first, cfg.components_range.second);
  ComponentGraph g;
  g.app_id = "app" + std::to_string(app_index);

  std::vector<std::size_t> position(n);  // topological position of vertex v
  for (int v = 0; v < n; ++v) position[v] = v;
  for (int i = n - 1; i > 0; --i)
    std::swap(position[i], position[rng.bounded(static_cast<std::uint64_t>(i) + 1)]);

  const double edge_prob =
      rng.uniform_real(cfg.edge_probability_range.first, cfg.edge_probability_range.second);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (!rng.bernoulli(edge_prob)) continue;
      if (position[u] < position[v])
        g.edges.emplace_back(u, v);
      else
        g.edges.emplace_back(v, u);
    }
  }

  std::vector<int> degree(n, 0);
  for (const auto& [a, b] : g.edges) {
    ++degree[a];
    ++degree[b];
  }
  for (int v = 0; v < n; ++v) {
    if (degree[v] > 0) continue;
    int u = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n) - 1));
    if (u >= v) ++u;
    if (position[u] < position[v])
      g.edges.emplace_back(u, v);
    else
      g.edges.emplace_back(v, u);
    ++degree[u];
    ++degree[v];
  }

  for (int v = 0; v < n; ++v) {
    Component c;
    c.id = "c" + std::to_string(v);
    c.active_duration =
        rng.uniform_real(cfg.active_duration_range.first, cfg.active_duration_range.second);
    const double lambda_h =
        rng.uniform_real(cfg.lambda_h_range.first, cfg.lambda_h_range.second);
    c.failure_rate = lambda_h / c.active_duration;
    c.fail_count = rng.uniform_int(static_cast<int>(cfg.fail_count_range.first),
                                   static_cast<int>(cfg.fail_count_range.second));
    c.app_fail_count = rng.uniform_int(0, static_cast<int>(c.fail_count));
    c.cpu_demand = rng.uniform_int(cfg.cpu_demand_range.first, cfg.cpu_demand_range.second);
    c.mem_demand = rng.uniform_int(cfg.mem_demand_range.first, cfg.mem_demand_range.second);
    c.restart_delay =
        rng.uniform_real(cfg.restart_delay_range.first, cfg.restart_delay_range.second);
    g.components.push_back(std::move(c));
  }

  validate(g);
  return g;
}

// Poisson arrival process: exponential inter-arrival times at arrival_rate.
inline std::vector<std::pair<std::uint64_t, double>> generate_arrivals(
    const WorkloadConfig& cfg) {
  validate(cfg);
  Rng rng(substream_seed(cfg.seed, "arrivals"));
  std::vector<std::pair<std::uint64_t, double>> arrivals;
  arrivals.reserve(static_cast<std::size_t>(cfg.num_apps));
  double t = 0.0;
  for (int i = 0; i < cfg.num_apps; ++i) {
    t += rng.exponential(cfg.arrival_rate);
    arrivals.emplace_back(static_cast<std::uint64_t>(i), t);
  }
  return arrivals;
}

}  // namespace rrft
