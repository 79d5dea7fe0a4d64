#pragma once

#include <cstdint>

#include "rrft/component_graph.hpp"
#include "rrft/datacenter.hpp"
#include "rrft/placement.hpp"
#include "rrft/rank_engine.hpp"
#include "rrft/replica_planner.hpp"

namespace rrft {

struct PipelineParams {
  double nabla = 0.007;
  int min_replicas = 0;
  double parallel_fraction = 0.5;
  PlacementMode mode = PlacementMode::strict;
};

struct PipelineResult {
  std::vector<SignificanceRecord> records;
  RankTable table;
  ReplicaPlan plan;
  PlacementMap placement;
};

// End-to-end pass for one application: significance, ranking, replica plan,
// rule-driven placement onto the given datacenter.
inline PipelineResult run_pipeline(const ComponentGraph& graph, const PipelineParams& params,
                                   Datacenter& dc, std::uint64_t seed) {
  PipelineResult result;
  result.records = significance_values(graph);
  result.table = rank_components(result.records);
  result.plan = detail::assemble_plan(
      graph, result.records, result.table, params.nabla, params.min_replicas,
      params.parallel_fraction,
      [&](const PlanComponent& pc) {
        return replica_count(pc.failure_prob, params.nabla, params.min_replicas);
      },
      /*tolerance_bound_holds=*/true);
  result.placement = place_application(result.plan, dc, params.mode, seed);
  return result;
}

}  // namespace rrft
