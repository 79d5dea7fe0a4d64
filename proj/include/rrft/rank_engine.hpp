#pragma once

#include <algorithm>
#include <string>
#include <unordered_set>
#include <vector>

#include "rrft/component_graph.hpp"
#include "rrft/error.hpp"

namespace rrft {

// Priority table produced by a ranking policy. Rank 1 is the highest
// priority; ranks are dense. For the merged policy `criticality` and
// `app_failure_prob` are the two sort keys; the baseline policies store
// their single score in `criticality` and leave `app_failure_prob` at 0.
struct RankEntry {
  std::string id;
  double criticality = 0.0;
  double app_failure_prob = 0.0;
  int rank = 0;
};

struct RankTable {
  std::vector<RankEntry> entries;  // sorted by (rank, id)

  int max_rank() const {
    int r = 0;
    for (const auto& e : entries) r = std::max(r, e.rank);
    return r;
  }
};

namespace detail {

inline void sort_canonical(std::vector<RankEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.id < b.id;
  });
}

// Round-robin merge of two descending priority lists. Each round picks the
// best component of either list not ranked in an earlier round; both picks
// receive the round number as their rank (once, when they coincide). Picks
// inside a round are simultaneous, so which list is examined first cannot
// change the result; the flag exists so a test can assert exactly that.
inline RankTable merge_ranked_lists(std::vector<RankEntry> entries, bool process_l2_first) {
  const std::size_t n = entries.size();
  std::vector<std::size_t> by_crit(n), by_afp(n);
  for (std::size_t i = 0; i < n; ++i) by_crit[i] = by_afp[i] = i;
  std::sort(by_crit.begin(), by_crit.end(), [&](std::size_t a, std::size_t b) {
    if (entries[a].criticality != entries[b].criticality)
      return entries[a].criticality > entries[b].criticality;
    return entries[a].id < entries[b].id;
  });
  std::sort(by_afp.begin(), by_afp.end(), [&](std::size_t a, std::size_t b) {
    if (entries[a].app_failure_prob != entries[b].app_failure_prob)
      return entries[a].app_failure_prob > entries[b].app_failure_prob;
    return entries[a].id < entries[b].id;
  });

  std::vector<bool> ranked(n, false);
  std::size_t i1 = 0, i2 = 0, done = 0;
  int round = 0;
  while (done < n) {
    ++round;
    while (i1 < n && ranked[by_crit[i1]]) ++i1;
    while (i2 < n && ranked[by_afp[i2]]) ++i2;
    const std::size_t first = process_l2_first ? by_afp[i2] : by_crit[i1];
    const std::size_t second = process_l2_first ? by_crit[i1] : by_afp[i2];
    entries[first].rank = round;
    ranked[first] = true;
    ++done;
    if (!ranked[second]) {
      entries[second].rank = round;
      ranked[second] = true;
      ++done;
    }
  }

  RankTable table{std::move(entries)};
  sort_canonical(table.entries);
  return table;
}

// Dense descending rank over a single score: equal score, equal rank.
inline RankTable dense_rank(std::vector<RankEntry> entries) {
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (entries[a].criticality != entries[b].criticality)
      return entries[a].criticality > entries[b].criticality;
    return entries[a].id < entries[b].id;
  });
  int rank = 0;
  double prev = 0.0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (pos == 0 || entries[order[pos]].criticality != prev) ++rank;
    prev = entries[order[pos]].criticality;
    entries[order[pos]].rank = rank;
  }
  RankTable table{std::move(entries)};
  sort_canonical(table.entries);
  return table;
}

}  // namespace detail

// Merged ranking: one list ordered by descending criticality, one by
// descending application failure probability, combined round-robin.
inline RankTable rank_components(const std::vector<SignificanceRecord>& records) {
  std::vector<RankEntry> entries;
  entries.reserve(records.size());
  for (const auto& r : records)
    entries.push_back({r.id, r.criticality, r.app_failure_prob, 0});
  return detail::merge_ranked_lists(std::move(entries), /*process_l2_first=*/false);
}

// Structure-only baseline: score one component by how many others can reach
// it; components named in `critical_ids` outrank everything else.
inline RankTable rank_ftcloud_like(const ComponentGraph& g,
                                   const std::vector<std::string>& critical_ids) {
  const auto d = distance_matrix(g);
  const std::size_t n = g.size();
  std::unordered_set<std::string> critical(critical_ids.begin(), critical_ids.end());

  std::vector<RankEntry> entries(n);
  double max_score = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    int reach = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != j && d[i][j] > 0) ++reach;
    entries[j] = {g.components[j].id, static_cast<double>(reach), 0.0, 0};
    max_score = std::max(max_score, entries[j].criticality);
  }
  // Promotion: lift critical components above the best non-critical score
  // while keeping their relative order.
  for (auto& e : entries)
    if (critical.count(e.id)) e.criticality += max_score + 1.0;
  return detail::dense_rank(std::move(entries));
}

// Reliability-aware baseline: rank by accumulated failure impact alone.
inline RankTable rank_rocloud_like(const std::vector<SignificanceRecord>& records) {
  std::vector<RankEntry> entries;
  entries.reserve(records.size());
  for (const auto& r : records) entries.push_back({r.id, r.accumulated_impact, 0.0, 0});
  return detail::dense_rank(std::move(entries));
}

}  // namespace rrft
