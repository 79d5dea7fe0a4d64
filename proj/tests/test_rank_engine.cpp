#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "rrft/rank_engine.hpp"
#include "support/oracles.hpp"

namespace {

std::map<std::string, int> ranks_of(const rrft::RankTable& t) {
  std::map<std::string, int> m;
  for (const auto& e : t.entries) m[e.id] = e.rank;
  return m;
}

// The published four-component example: criticality column and
// application-failure column with their known merged ranks.
std::vector<rrft::RankEntry> published_example() {
  return {
      {"c1", 0.023, 0.455, 0},
      {"c2", 0.115, 0.617, 0},
      {"c3", 0.008, 0.922, 0},
      {"c4", 0.0674, 0.514, 0},
  };
}

}  // namespace

TEST_CASE("published four-component example merges to the known ranks") {
  const auto table = rrft::detail::merge_ranked_lists(published_example(), false);
  const auto r = ranks_of(table);
  CHECK(r.at("c2") == 1);
  CHECK(r.at("c3") == 1);
  CHECK(r.at("c4") == 2);
  CHECK(r.at("c1") == 3);
  CHECK(table.max_rank() == 3);
}

TEST_CASE("merge result does not depend on which list is examined first") {
  SECTION("published example") {
    const auto a = rrft::detail::merge_ranked_lists(published_example(), false);
    const auto b = rrft::detail::merge_ranked_lists(published_example(), true);
    REQUIRE(ranks_of(a) == ranks_of(b));
  }
  SECTION("random score tables") {
    rrft::Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<rrft::RankEntry> entries;
      const int n = rng.uniform_int(1, 12);
      for (int i = 0; i < n; ++i)
        entries.push_back({"c" + std::to_string(i), rng.uniform_real(0.0, 1.0),
                           rng.uniform_real(0.0, 1.0), 0});
      const auto a = rrft::detail::merge_ranked_lists(entries, false);
      const auto b = rrft::detail::merge_ranked_lists(entries, true);
      REQUIRE(ranks_of(a) == ranks_of(b));
    }
  }
}

TEST_CASE("merged ranks are dense and start at 1") {
  rrft::Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<rrft::RankEntry> entries;
    const int n = rng.uniform_int(1, 10);
    for (int i = 0; i < n; ++i)
      entries.push_back({"c" + std::to_string(i), rng.uniform_real(0.0, 1.0),
                         rng.uniform_real(0.0, 1.0), 0});
    const auto table = rrft::detail::merge_ranked_lists(entries, false);
    std::vector<bool> seen(static_cast<std::size_t>(table.max_rank()) + 1, false);
    for (const auto& e : table.entries) {
      REQUIRE(e.rank >= 1);
      REQUIRE(e.rank <= table.max_rank());
      seen[static_cast<std::size_t>(e.rank)] = true;
    }
    for (int r = 1; r <= table.max_rank(); ++r) REQUIRE(seen[static_cast<std::size_t>(r)]);
  }
}

TEST_CASE("a component leading both lists is ranked once, in round one") {
  std::vector<rrft::RankEntry> entries{
      {"top", 0.9, 0.9, 0}, {"mid", 0.5, 0.5, 0}, {"low", 0.1, 0.1, 0}};
  const auto r = ranks_of(rrft::detail::merge_ranked_lists(entries, false));
  CHECK(r.at("top") == 1);
  CHECK(r.at("mid") == 2);
  CHECK(r.at("low") == 3);
}

TEST_CASE("rank_components wires significance records into the merge") {
  auto g = oracles::make_chain(3);
  g.components[0].failure_rate = 0.4;
  g.components[1].failure_rate = 0.9;
  g.components[2].failure_rate = 0.2;
  const auto table = rrft::rank_components(rrft::significance_values(g));
  REQUIRE(table.entries.size() == 3);
  // Canonical order: rank ascending, id ascending within rank.
  for (std::size_t i = 1; i < table.entries.size(); ++i) {
    const auto& prev = table.entries[i - 1];
    const auto& cur = table.entries[i];
    REQUIRE((prev.rank < cur.rank || (prev.rank == cur.rank && prev.id < cur.id)));
  }
}

TEST_CASE("structure-only baseline ranks by reachability") {
  // Diamond: a -> b, a -> c, b -> d, c -> d. Reach counts: a=0, b=c=1, d=3.
  auto g = oracles::make_graph(
      {oracles::make_component("a"), oracles::make_component("b"), oracles::make_component("c"),
       oracles::make_component("d")},
      {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  const auto r = ranks_of(rrft::rank_ftcloud_like(g, {}));
  CHECK(r.at("d") == 1);
  CHECK(r.at("b") == 2);
  CHECK(r.at("c") == 2);
  CHECK(r.at("a") == 3);
}

TEST_CASE("structure-only baseline promotes designated critical components") {
  auto g = oracles::make_chain(4);
  const auto r = ranks_of(rrft::rank_ftcloud_like(g, {"c0"}));
  CHECK(r.at("c0") == 1);  // promoted above every reachability score
  CHECK(r.at("c3") == 2);
}

TEST_CASE("reliability baseline ranks by accumulated impact") {
  auto g = oracles::make_chain(3);
  g.components[0].failure_rate = 0.05;  // low rate, big downstream impact
  g.components[1].failure_rate = 2.0;   // high rate, smaller impact
  const auto recs = rrft::significance_values(g);
  const auto r = ranks_of(rrft::rank_rocloud_like(recs));
  // accumulated impact: c0 = 0.05*4 = 0.2, c1 = 2.0*3 = 6, c2 = 0.
  CHECK(r.at("c1") == 1);
  CHECK(r.at("c0") == 2);
  CHECK(r.at("c2") == 3);
}

TEST_CASE("equal scores collapse into one dense rank") {
  std::vector<rrft::RankEntry> entries{
      {"a", 0.5, 0.0, 0}, {"b", 0.5, 0.0, 0}, {"c", 0.1, 0.0, 0}};
  const auto r = ranks_of(rrft::detail::dense_rank(entries));
  CHECK(r.at("a") == 1);
  CHECK(r.at("b") == 1);
  CHECK(r.at("c") == 2);
}
