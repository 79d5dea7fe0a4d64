#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <vector>

#include "rrft/error.hpp"
#include "rrft/rng.hpp"

namespace rrft {

// Identifies one VM instance: replica_index 0 is the primary, 1..k-1 the
// backups.
struct InstanceRef {
  std::string app_id;
  std::string component_id;
  int replica_index = 0;

  auto operator<=>(const InstanceRef&) const = default;

  std::string str() const {
    return app_id + "/" + component_id + "#" + std::to_string(replica_index);
  }
};

struct HostedInstance {
  InstanceRef ref;
  int cpu = 0;
  int mem = 0;
};

struct PhysicalMachine {
  int id = 0;
  int pod = 0;
  int cpu_capacity = 0;
  int mem_capacity = 0;
  int cpu_free = 0;
  int mem_free = 0;
  bool alive = true;
  std::vector<HostedInstance> hosted;
};

// Pod-structured datacenter. Machine ids are dense: machine m sits in pod
// m / machines_per_pod.
struct Datacenter {
  int num_pods = 0;
  int machines_per_pod = 0;
  std::vector<PhysicalMachine> machines;

  int size() const { return static_cast<int>(machines.size()); }

  int alive_count() const {
    int n = 0;
    for (const auto& pm : machines) n += pm.alive ? 1 : 0;
    return n;
  }

  PhysicalMachine& machine(int pm_id) {
    require_input(pm_id >= 0 && pm_id < size(), "unknown machine id " + std::to_string(pm_id));
    return machines[pm_id];
  }
  const PhysicalMachine& machine(int pm_id) const {
    require_input(pm_id >= 0 && pm_id < size(), "unknown machine id " + std::to_string(pm_id));
    return machines[pm_id];
  }
};

// Capacities drawn uniformly per machine from the given inclusive ranges.
inline Datacenter build_datacenter(int num_pods, int machines_per_pod,
                                   std::pair<int, int> cpu_capacity_range,
                                   std::pair<int, int> mem_capacity_range,
                                   std::uint64_t seed) {
  require_input(num_pods > 0, "datacenter needs at least one pod");
  require_input(machines_per_pod > 0, "pods need at least one machine");
  require_input(cpu_capacity_range.first >= 1 &&
                    cpu_capacity_range.first <= cpu_capacity_range.second,
                "cpu capacity range is invalid");
  require_input(mem_capacity_range.first >= 1 &&
                    mem_capacity_range.first <= mem_capacity_range.second,
                "mem capacity range is invalid");

  Rng rng(substream_seed(seed, "datacenter"));
  Datacenter dc;
  dc.num_pods = num_pods;
  dc.machines_per_pod = machines_per_pod;
  dc.machines.resize(static_cast<std::size_t>(num_pods) * machines_per_pod);
  for (int m = 0; m < dc.size(); ++m) {
    PhysicalMachine& pm = dc.machines[m];
    pm.id = m;
    pm.pod = m / machines_per_pod;
    pm.cpu_capacity = rng.uniform_int(cpu_capacity_range.first, cpu_capacity_range.second);
    pm.mem_capacity = rng.uniform_int(mem_capacity_range.first, mem_capacity_range.second);
    pm.cpu_free = pm.cpu_capacity;
    pm.mem_free = pm.mem_capacity;
  }
  return dc;
}

// Tries to host one instance; false means insufficient residual capacity.
inline bool allocate(Datacenter& dc, int pm_id, const InstanceRef& instance, int cpu_demand,
                     int mem_demand) {
  PhysicalMachine& pm = dc.machine(pm_id);
  require_input(pm.alive, "machine " + std::to_string(pm_id) + " is dead");
  require_input(cpu_demand >= 1 && mem_demand >= 1, "instance demands must be positive");
  if (pm.cpu_free < cpu_demand || pm.mem_free < mem_demand) return false;
  pm.cpu_free -= cpu_demand;
  pm.mem_free -= mem_demand;
  pm.hosted.push_back({instance, cpu_demand, mem_demand});
  return true;
}

// Kills a machine and reports what it was hosting. Residuals stay frozen;
// a machine cannot fail twice.
inline std::vector<InstanceRef> fail_pm(Datacenter& dc, int pm_id) {
  PhysicalMachine& pm = dc.machine(pm_id);
  require_input(pm.alive, "machine " + std::to_string(pm_id) + " already failed");
  pm.alive = false;
  std::vector<InstanceRef> victims;
  victims.reserve(pm.hosted.size());
  for (const auto& h : pm.hosted) victims.push_back(h.ref);
  std::sort(victims.begin(), victims.end());
  return victims;
}

// Accounting audit: every machine's residuals must equal capacity minus the
// demands it hosts, within bounds. Returns the list of discrepancies.
inline std::vector<std::string> audit_capacity(const Datacenter& dc) {
  std::vector<std::string> problems;
  for (const auto& pm : dc.machines) {
    int cpu_used = 0, mem_used = 0;
    for (const auto& h : pm.hosted) {
      cpu_used += h.cpu;
      mem_used += h.mem;
    }
    if (pm.cpu_free != pm.cpu_capacity - cpu_used || pm.mem_free != pm.mem_capacity - mem_used)
      problems.push_back("machine " + std::to_string(pm.id) + ": residual mismatch");
    if (pm.cpu_free < 0 || pm.cpu_free > pm.cpu_capacity || pm.mem_free < 0 ||
        pm.mem_free > pm.mem_capacity)
      problems.push_back("machine " + std::to_string(pm.id) + ": residual out of bounds");
  }
  return problems;
}

}  // namespace rrft
