#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rrft/replica_planner.hpp"
#include "support/oracles.hpp"

TEST_CASE("replica_count reproduces the worked examples") {
  CHECK(rrft::replica_count(0.19, 0.007, 0) == 3);  // primary + 2 backups
  CHECK(rrft::replica_count(0.08, 0.007, 0) == 2);
  CHECK(rrft::replica_count(0.05, 0.007, 0) == 2);
  CHECK(rrft::replica_count(0.5, 0.5, 0) == 1);  // one instance meets it exactly
}

TEST_CASE("replica_count honors the floor") {
  CHECK(rrft::replica_count(0.5, 0.5, 2) == 2);
  CHECK(rrft::replica_count(0.19, 0.007, 5) == 5);
  CHECK(rrft::replica_count(0.19, 0.007, 1) == 3);
}

TEST_CASE("replica_count rejects degenerate inputs with guidance") {
  using Catch::Matchers::ContainsSubstring;
  using Catch::Matchers::MessageMatches;
  REQUIRE_THROWS_MATCHES(rrft::replica_count(0.0, 0.007, 0), rrft::ValidationError,
                         MessageMatches(ContainsSubstring("k = max(min_replicas, 1)")));
  REQUIRE_THROWS_MATCHES(rrft::replica_count(1.0, 0.007, 0), rrft::ValidationError,
                         MessageMatches(ContainsSubstring("no replica count")));
  REQUIRE_THROWS_AS(rrft::replica_count(0.19, 0.0, 0), rrft::ValidationError);
  REQUIRE_THROWS_AS(rrft::replica_count(0.19, 1.0, 0), rrft::ValidationError);
  REQUIRE_THROWS_AS(rrft::replica_count(-0.1, 0.5, 0), rrft::ValidationError);
  REQUIRE_THROWS_AS(rrft::replica_count(0.19, 0.007, -1), rrft::ValidationError);
}

TEST_CASE("replica_count is minimal on a randomized grid") {
  rrft::Rng rng(424242);
  for (int trial = 0; trial < 2000; ++trial) {
    const double p = rng.uniform_real(0.01, 0.99);
    const double nabla = rng.uniform_real(1e-4, 0.5);
    const int k = rrft::replica_count(p, nabla, 0);
    REQUIRE(k >= 1);
    REQUIRE(std::pow(p, k) <= nabla);
    if (k > 1) REQUIRE(std::pow(p, k - 1) > nabla);
  }
}

TEST_CASE("chain for the worked parallel root component") {
  const auto chain =
      rrft::build_mdp_chain("c1", 0.19, 0.007, 0, rrft::ExecutionOrder::parallel, false);
  REQUIRE(chain.replica_count() == 3);
  REQUIRE(chain.states.size() == 6);  // running chain plus finished counterparts

  CHECK(chain.states[0] == rrft::MdpState{1, -1, 0});
  CHECK(chain.states[1] == rrft::MdpState{1, 0, 1});
  CHECK(chain.states[2] == rrft::MdpState{1, 0, 2});
  for (std::size_t j = 3; j < 6; ++j) {
    CHECK(chain.states[j].status == rrft::state_finished);
    CHECK(chain.states[j].exec_order == 1);
    CHECK(chain.states[j].backup_count == static_cast<int>(j) - 3);
  }

  // First create-backup transition carries the failure probability itself.
  REQUIRE(chain.transitions[0].action == rrft::MdpAction::create_backup);
  REQUIRE(chain.transitions[0].from == 0);
  REQUIRE(chain.transitions[0].to == 1);
  REQUIRE(chain.transitions[0].probability == 0.19);

  // Every running state also has an execute edge to its finished twin.
  int executes = 0;
  for (const auto& t : chain.transitions)
    if (t.action == rrft::MdpAction::execute) {
      ++executes;
      CHECK(t.probability == 1.0 - 0.19);
      CHECK(t.to == t.from + 3);
    }
  CHECK(executes == 3);
}

TEST_CASE("chain for the worked sequential non-root component") {
  const auto chain =
      rrft::build_mdp_chain("c2", 0.08, 0.007, 0, rrft::ExecutionOrder::sequential, true);
  REQUIRE(chain.replica_count() == 2);
  CHECK(chain.states[0] == rrft::MdpState{1, 1, 0});  // non-root primary
  CHECK(chain.states[1] == rrft::MdpState{1, 1, 1});
  CHECK_FALSE(chain.is_root);
}

TEST_CASE("component already within tolerance gets a single-state chain") {
  const auto chain =
      rrft::build_mdp_chain("c", 0.005, 0.007, 0, rrft::ExecutionOrder::parallel, false);
  REQUIRE(chain.replica_count() == 1);
  REQUIRE(chain.states.size() == 2);
  CHECK(chain.states[0] == rrft::MdpState{1, -1, 0});
  REQUIRE(chain.transitions.size() == 1);
  CHECK(chain.transitions[0].action == rrft::MdpAction::execute);
}

TEST_CASE("create-backup probabilities telescope to failure_prob^(k-1)") {
  rrft::Rng rng(5150);
  for (int trial = 0; trial < 500; ++trial) {
    const double p = rng.uniform_real(0.01, 0.99);
    const double nabla = rng.uniform_real(1e-4, 0.5);
    const auto chain =
        rrft::build_mdp_chain("c", p, nabla, 0, rrft::ExecutionOrder::parallel, false);
    double product = 1.0;
    for (const auto& t : chain.transitions)
      if (t.action == rrft::MdpAction::create_backup) product *= t.probability;
    const double expected = std::pow(p, static_cast<double>(chain.replica_count()) - 1.0);
    REQUIRE_THAT(product, Catch::Matchers::WithinRel(expected, 1e-12));
  }
}

TEST_CASE("execution order split follows the rank-class prefix rule") {
  rrft::RankTable table;
  table.entries = {{"a", 0, 0, 1}, {"b", 0, 0, 1}, {"c", 0, 0, 2}, {"d", 0, 0, 3}};

  SECTION("fraction 0.5 takes only the first class") {
    const auto orders = rrft::assign_execution_order(table, 0.5);
    CHECK(orders.at("a") == rrft::ExecutionOrder::parallel);
    CHECK(orders.at("b") == rrft::ExecutionOrder::parallel);
    CHECK(orders.at("c") == rrft::ExecutionOrder::sequential);
    CHECK(orders.at("d") == rrft::ExecutionOrder::sequential);
  }
  SECTION("fraction 1 is all parallel") {
    for (const auto& [id, o] : rrft::assign_execution_order(table, 1.0))
      CHECK(o == rrft::ExecutionOrder::parallel);
  }
  SECTION("fraction 0 is all sequential") {
    for (const auto& [id, o] : rrft::assign_execution_order(table, 0.0))
      CHECK(o == rrft::ExecutionOrder::sequential);
  }
  SECTION("classes move atomically") {
    // Target 3 of 4 components: class {a,b} covers 2 < 3, so class {c} joins.
    const auto orders = rrft::assign_execution_order(table, 0.75);
    CHECK(orders.at("c") == rrft::ExecutionOrder::parallel);
    CHECK(orders.at("d") == rrft::ExecutionOrder::sequential);
  }
  SECTION("out-of-range fraction is rejected") {
    REQUIRE_THROWS_AS(rrft::assign_execution_order(table, 1.5), rrft::ValidationError);
  }
}

namespace {

// Chain of three components with failure probabilities hit exactly by
// inverting lambda*h*exp(-lambda*h).
rrft::ComponentGraph worked_three_chain() {
  auto g = oracles::make_chain(3);
  const double targets[3] = {0.19, 0.08, 0.05};
  for (int i = 0; i < 3; ++i) {
    const double lh = oracles::invert_failure_prob(targets[i]);
    g.components[static_cast<std::size_t>(i)].active_duration = 2.0;
    g.components[static_cast<std::size_t>(i)].failure_rate = lh / 2.0;
  }
  return g;
}

}  // namespace

TEST_CASE("plan for the worked three-component example totals seven instances") {
  const auto plan = rrft::build_plan(worked_three_chain(), 0.007, 0, 0.5);
  REQUIRE(plan.components.size() == 3);
  CHECK(plan.find("c0")->replica_count == 3);
  CHECK(plan.find("c1")->replica_count == 2);
  CHECK(plan.find("c2")->replica_count == 2);
  CHECK(plan.total_instances == 7);
}

TEST_CASE("plan collapses to primaries when nothing exceeds tolerance") {
  auto g = oracles::make_chain(4);
  for (auto& c : g.components) {
    c.failure_rate = 0.001;
    c.active_duration = 1.0;
  }
  const auto plan = rrft::build_plan(g, 0.01, 0, 0.5);
  CHECK(plan.total_instances == 4);
}

TEST_CASE("floor overrides a k=1 component") {
  auto g = oracles::make_chain(2);
  for (auto& c : g.components) {
    c.failure_rate = 0.001;
    c.active_duration = 1.0;
  }
  const auto plan = rrft::build_plan(g, 0.01, 2, 0.5);
  for (const auto& c : plan.components) CHECK(c.replica_count == 2);
}

TEST_CASE("plan constraints hold over random graphs and settings") {
  rrft::Rng rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = oracles::random_small_dag(rng, 12);
    const double nabla = rng.uniform_real(1e-4, 0.5);
    const int mu = rng.uniform_int(0, 3);
    const double fraction = rng.uniform_real(0.0, 1.0);
    const auto plan = rrft::build_plan(g, nabla, mu, fraction);

    long long total = 0;
    int max_parallel_rank = 0, min_sequential_rank = 0;
    for (const auto& c : plan.components) {
      total += c.replica_count;
      REQUIRE(c.replica_count >= std::max(mu, 1));
      REQUIRE(std::pow(c.failure_prob, c.replica_count) <= nabla);
      REQUIRE(c.chain.replica_count() == static_cast<std::size_t>(c.replica_count));
      if (c.order == rrft::ExecutionOrder::parallel)
        max_parallel_rank = std::max(max_parallel_rank, c.rank);
      else
        min_sequential_rank =
            min_sequential_rank == 0 ? c.rank : std::min(min_sequential_rank, c.rank);
    }
    REQUIRE(plan.total_instances == total);
    if (max_parallel_rank > 0 && min_sequential_rank > 0)
      REQUIRE(max_parallel_rank < min_sequential_rank);
  }
}

TEST_CASE("concurrent demand counts parallel chains fully, sequential chains once") {
  const auto plan = rrft::build_plan(worked_three_chain(), 0.007, 0, 0.4);
  // Ranks split c0 parallel (k=3); c1, c2 sequential.
  long long expected = 0;
  for (const auto& c : plan.components)
    expected += c.order == rrft::ExecutionOrder::parallel ? c.replica_count : 1;
  CHECK(rrft::concurrent_vm_demand(plan) == expected);
  CHECK(rrft::concurrent_vm_demand(plan) < plan.total_instances);
}

TEST_CASE("objective costs reflect the execution order") {
  const auto plan = rrft::build_plan(worked_three_chain(), 0.007, 0, 1.0);
  for (const auto& c : plan.components) {
    CHECK(c.parallel_cpu_cost == c.replica_count * c.cpu_demand);
    CHECK(c.parallel_mem_cost == c.replica_count * c.mem_demand);
    CHECK(c.sequential_time_cost == 0.0);
    CHECK_THAT(c.residual_failure_prob,
               Catch::Matchers::WithinRel(std::pow(c.failure_prob, c.replica_count), 1e-12));
  }
}
