#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "rrft/error.hpp"

namespace rrft {

// One component of a cloud application. Demands describe the VM this
// component (and each of its replicas) runs in; failure statistics feed the
// significance math.
struct Component {
  std::string id;
  double failure_rate = 0.0;    // lambda, failures per unit time
  double active_duration = 1.0; // h, execution window in seconds
  long long fail_count = 0;     // recorded component failures
  long long app_fail_count = 0; // of those, failures that took the app down
  int cpu_demand = 1;           // vCPUs
  int mem_demand = 1;           // MB
  double restart_delay = 0.0;   // seconds before a sequential replica starts
};

// Directed acyclic invocation graph of one application. Edges point from a
// component to the components it invokes.
struct ComponentGraph {
  std::string app_id;
  std::vector<Component> components;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t size() const { return components.size(); }

  std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(components.size());
    for (const auto& [from, to] : edges) adj[from].push_back(to);
    return adj;
  }

  std::vector<std::size_t> predecessor_counts() const {
    std::vector<std::size_t> indeg(components.size(), 0);
    for (const auto& [from, to] : edges) ++indeg[to];
    return indeg;
  }

  std::unordered_map<std::string, std::size_t> index_by_id() const {
    std::unordered_map<std::string, std::size_t> m;
    for (std::size_t i = 0; i < components.size(); ++i) m[components[i].id] = i;
    return m;
  }
};

// Per-component significance record. `significance` sums the shortest-path
// distances of everything that can reach the component; `failure_impact`
// sums the significance of everything the component can reach; the two
// probability fields follow the Poisson failure model.
struct SignificanceRecord {
  std::string id;
  double significance = 0.0;       // column sum of the distance matrix
  double failure_impact = 0.0;     // sum of downstream significance
  double accumulated_impact = 0.0; // failure_rate * failure_impact
  double failure_prob = 0.0;       // lambda*h * exp(-lambda*h)
  double app_failure_rate = 0.0;   // app_fail_count / fail_count
  double app_failure_prob = 0.0;   // joint component+app failure probability
  double criticality = 0.0;        // accumulated_impact * failure_prob
  bool no_failure_history = false; // fail_count == 0, rate treated as 0
};

namespace detail {

inline void validate_fields(const ComponentGraph& g) {
  for (const auto& c : g.components) {
    require_input(!c.id.empty(), "component id must be non-empty");
    require_input(c.failure_rate >= 0.0, "component " + c.id + ": failure_rate must be >= 0");
    require_input(c.active_duration > 0.0, "component " + c.id + ": active_duration must be > 0");
    require_input(c.fail_count >= 0, "component " + c.id + ": fail_count must be >= 0");
    require_input(c.app_fail_count >= 0 && c.app_fail_count <= c.fail_count,
                  "component " + c.id + ": app_fail_count must be in [0, fail_count]");
    require_input(c.cpu_demand >= 1, "component " + c.id + ": cpu_demand must be >= 1");
    require_input(c.mem_demand > 0, "component " + c.id + ": mem_demand must be > 0");
    require_input(c.restart_delay >= 0.0, "component " + c.id + ": restart_delay must be >= 0");
  }
  std::unordered_map<std::string, int> seen;
  for (const auto& c : g.components)
    require_input(++seen[c.id] == 1, "duplicate component id: " + c.id);
}

}  // namespace detail

// Rejects malformed graphs: bad fields, dangling or self-looping edges,
// isolated vertices, cycles. Error messages name the offending components.
inline void validate(const ComponentGraph& g) {
  require_input(!g.components.empty(), "graph has no components");
  detail::validate_fields(g);

  const std::size_t n = g.size();
  for (const auto& [from, to] : g.edges) {
    require_input(from < n && to < n, "edge endpoint out of range");
    require_input(from != to, "self-loop on component " + g.components[from].id);
  }

  std::vector<int> degree(n, 0);
  for (const auto& [from, to] : g.edges) {
    ++degree[from];
    ++degree[to];
  }
  if (n > 1) {
    for (std::size_t i = 0; i < n; ++i)
      require_input(degree[i] > 0, "isolated component: " + g.components[i].id);
  }

  // Kahn's algorithm; whatever survives sits on a cycle.
  auto indeg = g.predecessor_counts();
  auto adj = g.adjacency();
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::size_t removed = 0;
  while (!ready.empty()) {
    std::size_t v = ready.front();
    ready.pop_front();
    ++removed;
    for (std::size_t w : adj[v])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  if (removed != n) {
    std::string members;
    for (std::size_t i = 0; i < n; ++i)
      if (indeg[i] > 0) members += (members.empty() ? "" : ", ") + g.components[i].id;
    throw ValidationError("graph contains a cycle through: " + members);
  }
}

// d[i][j] = minimum hop count from i to j, 0 when j is unreachable from i
// (and on the diagonal). Plain BFS from every vertex.
inline std::vector<std::vector<int>> distance_matrix(const ComponentGraph& g) {
  validate(g);
  const std::size_t n = g.size();
  auto adj = g.adjacency();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, 0));
  std::vector<int> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::deque<std::size_t> q{s};
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop_front();
      for (std::size_t w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push_back(w);
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j)
      if (j != s && dist[j] > 0) d[s][j] = dist[j];
  }
  return d;
}

// Computes the full significance record set for one application.
inline std::vector<SignificanceRecord> significance_values(const ComponentGraph& g) {
  const auto d = distance_matrix(g);
  const std::size_t n = g.size();

  std::vector<double> sig(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) sig[j] += d[i][j];

  std::vector<SignificanceRecord> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Component& c = g.components[i];
    SignificanceRecord& r = out[i];
    r.id = c.id;
    r.significance = sig[i];
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && d[i][j] > 0) r.failure_impact += sig[j];
    r.accumulated_impact = c.failure_rate * r.failure_impact;

    const double lh = c.failure_rate * c.active_duration;
    r.failure_prob = lh * std::exp(-lh);

    r.no_failure_history = (c.fail_count == 0);
    r.app_failure_rate = r.no_failure_history
                             ? 0.0
                             : static_cast<double>(c.app_fail_count) /
                                   static_cast<double>(c.fail_count);
    const double h = c.active_duration;
    r.app_failure_prob = h * h * r.app_failure_rate * c.failure_rate *
                         std::exp(-h * (c.failure_rate + r.app_failure_rate));
    r.criticality = r.accumulated_impact * r.failure_prob;

    check_invariant(r.failure_prob >= 0.0 && r.failure_prob <= 1.0 / std::exp(1.0) + 1e-12,
                    "failure probability outside [0, 1/e]");
    check_invariant(r.app_failure_prob >= 0.0 &&
                        r.app_failure_prob <= 1.0 / std::exp(2.0) + 1e-12,
                    "application failure probability outside [0, 1/e^2]");
  }
  return out;
}

}  // namespace rrft
