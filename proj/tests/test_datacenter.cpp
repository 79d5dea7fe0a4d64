#include <catch2/catch_amalgamated.hpp>

#include "rrft/datacenter.hpp"

TEST_CASE("datacenter dimensions and capacity ranges") {
  const auto dc = rrft::build_datacenter(4, 10, {16, 32}, {16000, 32000}, 7);
  REQUIRE(dc.size() == 40);
  REQUIRE(dc.num_pods == 4);
  REQUIRE(dc.alive_count() == 40);
  for (const auto& pm : dc.machines) {
    CHECK(pm.pod == pm.id / 10);
    CHECK(pm.cpu_capacity >= 16);
    CHECK(pm.cpu_capacity <= 32);
    CHECK(pm.mem_capacity >= 16000);
    CHECK(pm.mem_capacity <= 32000);
    CHECK(pm.cpu_free == pm.cpu_capacity);
    CHECK(pm.mem_free == pm.mem_capacity);
    CHECK(pm.alive);
  }
}

TEST_CASE("datacenter build is deterministic per seed") {
  const auto a = rrft::build_datacenter(2, 5, {16, 32}, {16000, 32000}, 11);
  const auto b = rrft::build_datacenter(2, 5, {16, 32}, {16000, 32000}, 11);
  const auto c = rrft::build_datacenter(2, 5, {16, 32}, {16000, 32000}, 12);
  for (int m = 0; m < a.size(); ++m) {
    CHECK(a.machines[m].cpu_capacity == b.machines[m].cpu_capacity);
    CHECK(a.machines[m].mem_capacity == b.machines[m].mem_capacity);
  }
  bool any_diff = false;
  for (int m = 0; m < a.size(); ++m)
    any_diff = any_diff || a.machines[m].cpu_capacity != c.machines[m].cpu_capacity ||
               a.machines[m].mem_capacity != c.machines[m].mem_capacity;
  CHECK(any_diff);
}

TEST_CASE("build rejects bad dimensions") {
  REQUIRE_THROWS_AS(rrft::build_datacenter(0, 10, {16, 32}, {16000, 32000}, 1),
                    rrft::ValidationError);
  REQUIRE_THROWS_AS(rrft::build_datacenter(4, 0, {16, 32}, {16000, 32000}, 1),
                    rrft::ValidationError);
  REQUIRE_THROWS_AS(rrft::build_datacenter(4, 10, {32, 16}, {16000, 32000}, 1),
                    rrft::ValidationError);
  REQUIRE_THROWS_AS(rrft::build_datacenter(4, 10, {16, 32}, {0, 32000}, 1),
                    rrft::ValidationError);
}

TEST_CASE("allocation tracks residuals and refuses overcommit") {
  auto dc = rrft::build_datacenter(1, 2, {4, 4}, {1000, 1000}, 3);
  const rrft::InstanceRef ref{"app", "c1", 0};

  REQUIRE(rrft::allocate(dc, 0, ref, 3, 600));
  CHECK(dc.machine(0).cpu_free == 1);
  CHECK(dc.machine(0).mem_free == 400);
  REQUIRE(dc.machine(0).hosted.size() == 1);
  CHECK(dc.machine(0).hosted[0].ref == ref);

  SECTION("cpu exhausted") {
    CHECK_FALSE(rrft::allocate(dc, 0, {"app", "c2", 0}, 2, 100));
    CHECK(dc.machine(0).cpu_free == 1);  // unchanged on refusal
    CHECK(dc.machine(0).hosted.size() == 1);
  }
  SECTION("mem exhausted") {
    CHECK_FALSE(rrft::allocate(dc, 0, {"app", "c2", 0}, 1, 500));
  }
  SECTION("fits exactly") {
    CHECK(rrft::allocate(dc, 0, {"app", "c2", 0}, 1, 400));
    CHECK(dc.machine(0).cpu_free == 0);
    CHECK(dc.machine(0).mem_free == 0);
  }
  SECTION("audit is clean either way") { CHECK(rrft::audit_capacity(dc).empty()); }
}

TEST_CASE("allocate validates its inputs") {
  auto dc = rrft::build_datacenter(1, 1, {4, 4}, {1000, 1000}, 3);
  REQUIRE_THROWS_AS(rrft::allocate(dc, 5, {"a", "c", 0}, 1, 1), rrft::ValidationError);
  REQUIRE_THROWS_AS(rrft::allocate(dc, 0, {"a", "c", 0}, 0, 1), rrft::ValidationError);
  REQUIRE_THROWS_AS(rrft::allocate(dc, 0, {"a", "c", 0}, 1, 0), rrft::ValidationError);
  rrft::fail_pm(dc, 0);
  REQUIRE_THROWS_AS(rrft::allocate(dc, 0, {"a", "c", 0}, 1, 1), rrft::ValidationError);
}

TEST_CASE("machine failure reports sorted victims exactly once") {
  auto dc = rrft::build_datacenter(1, 1, {16, 16}, {4000, 4000}, 3);
  REQUIRE(rrft::allocate(dc, 0, {"b_app", "c9", 1}, 1, 100));
  REQUIRE(rrft::allocate(dc, 0, {"a_app", "c1", 0}, 1, 100));
  REQUIRE(rrft::allocate(dc, 0, {"a_app", "c1", 2}, 1, 100));

  const auto victims = rrft::fail_pm(dc, 0);
  REQUIRE(victims.size() == 3);
  CHECK(victims[0] == rrft::InstanceRef{"a_app", "c1", 0});
  CHECK(victims[1] == rrft::InstanceRef{"a_app", "c1", 2});
  CHECK(victims[2] == rrft::InstanceRef{"b_app", "c9", 1});
  CHECK(dc.alive_count() == 0);
  REQUIRE_THROWS_AS(rrft::fail_pm(dc, 0), rrft::ValidationError);
  REQUIRE_THROWS_AS(rrft::fail_pm(dc, 9), rrft::ValidationError);
}

TEST_CASE("instance reference formatting") {
  CHECK(rrft::InstanceRef{"shop", "cart", 2}.str() == "shop/cart#2");
}
