#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "metacd/graph.hpp"
#include "metacd/modularity.hpp"

namespace metacd {

struct CommunityBreakdown {
  std::uint32_t size = 0;
  std::uint32_t humans = 0;
  std::uint32_t ais = 0;
  double w = 0.0;
};

struct MetricReport {
  double q = 0.0;
  double hq = 0.0;
  double hmr = 0.0;
  double adm = 0.0;
  bool adm_infinite = false;  // migrations happened with zero retained AIs
  bool has_migration = false; // hmr/adm were computed against a reference
  std::uint32_t k_communities = 0;
  std::uint32_t retained_ai = 0;
  std::vector<CommunityBreakdown> per_community;
};

/// Greedy maximum-overlap matching between the candidate's and the
/// reference's communities, counted over the human nodes both partitions
/// cover. Pairs are matched largest overlap first (ties by smallest candidate
/// then reference index); candidate communities left over map to "new" (-1).
inline std::vector<std::int64_t> align_partitions(const Partition& reference,
                                                  const Partition& candidate,
                                                  const HasnGraph& g) {
  std::uint32_t ref_slots = 0;
  std::uint32_t cand_slots = 0;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> overlap;
  for (NodeId v = 0; v < g.capacity(); ++v) {
    if (!g.contains(v) || g.kind(v) != NodeKind::Human) continue;
    const std::uint32_t rc = reference.community_of(v);
    const std::uint32_t cc = candidate.community_of(v);
    if (rc == Partition::kNone || cc == Partition::kNone) continue;
    ref_slots = std::max(ref_slots, rc + 1);
    cand_slots = std::max(cand_slots, cc + 1);
    ++overlap[{cc, rc}];
  }
  struct Cell {
    std::uint64_t count;
    std::uint32_t cand;
    std::uint32_t ref;
  };
  std::vector<Cell> cells;
  cells.reserve(overlap.size());
  for (const auto& [key, count] : overlap) cells.push_back({count, key.first, key.second});
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.cand != b.cand) return a.cand < b.cand;
    return a.ref < b.ref;
  });
  std::vector<std::int64_t> mapping(std::max(cand_slots, candidate.slot_count()), -1);
  std::vector<bool> ref_taken(ref_slots, false);
  std::vector<bool> cand_taken(mapping.size(), false);
  for (const Cell& c : cells) {
    if (cand_taken[c.cand] || ref_taken[c.ref]) continue;
    cand_taken[c.cand] = true;
    ref_taken[c.ref] = true;
    mapping[c.cand] = c.ref;
  }
  return mapping;
}

/// Humans whose aligned candidate community differs from their reference
/// community (or whose community matched nothing) count as migrated.
inline std::uint64_t migration_count(const HasnGraph& g, const Partition& reference,
                                     const Partition& candidate) {
  const std::vector<std::int64_t> mapping = align_partitions(reference, candidate, g);
  std::uint64_t migrations = 0;
  for (NodeId v = 0; v < g.capacity(); ++v) {
    if (!g.contains(v) || g.kind(v) != NodeKind::Human) continue;
    const std::uint32_t rc = reference.community_of(v);
    const std::uint32_t cc = candidate.community_of(v);
    if (rc == Partition::kNone || cc == Partition::kNone) continue;
    if (mapping[cc] != static_cast<std::int64_t>(rc)) ++migrations;
  }
  return migrations;
}

/// Human migration ratio: migrated humans / all humans.
inline double hmr(const HasnGraph& g, const Partition& reference, const Partition& candidate) {
  if (g.human_count() == 0) throw std::invalid_argument("hmr: no human nodes");
  return static_cast<double>(migration_count(g, reference, candidate)) /
         static_cast<double>(g.human_count());
}

/// Average AI-driven migration: migrations / retained AI nodes. Zero over
/// zero is 0; positive migrations over zero retained AIs yields +infinity,
/// which the report flags rather than throwing.
inline double adm(std::uint64_t migrations, std::uint32_t retained_ai_count) {
  if (retained_ai_count == 0) {
    return migrations == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(migrations) / static_cast<double>(retained_ai_count);
}

/// Q, HQ and per-community composition of a partition; HMR/ADM when an
/// AI-free reference partition is supplied.
inline MetricReport build_report(const HasnGraph& g, const Partition& p,
                                 const ObjectiveKind& obj, std::uint32_t retained_ai_count,
                                 const Partition* reference = nullptr) {
  MetricReport report;
  report.q = modularity_q(g, p);
  report.hq = human_modularity_hq(g, p, obj);
  report.retained_ai = retained_ai_count;
  Partition fresh = Partition::from_assignment(g, p.assignment());
  fresh.normalize();
  report.k_communities = fresh.slot_count();
  for (std::uint32_t c = 0; c < fresh.slot_count(); ++c) {
    const CommunityAggregate& stats = fresh.stats(c);
    report.per_community.push_back(
        {stats.size(), stats.humans, stats.ais,
         reward_penalty_w(stats.humans, stats.ais, obj.beta, obj.gamma)});
  }
  if (reference != nullptr) {
    const std::uint64_t migrations = migration_count(g, *reference, p);
    report.hmr = hmr(g, *reference, p);
    report.adm = adm(migrations, retained_ai_count);
    report.adm_infinite = std::isinf(report.adm);
    report.has_migration = true;
  }
  return report;
}

}  // namespace metacd
