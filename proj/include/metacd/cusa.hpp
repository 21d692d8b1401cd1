#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "metacd/graph.hpp"
#include "metacd/louvain.hpp"
#include "metacd/modularity.hpp"
#include "metacd/rng.hpp"
#include "metacd/scoring.hpp"

namespace metacd {

enum class CoolingPolicy : std::uint8_t {
  EveryIteration,      // T <- c * T after every proposal; bounded iteration count
  OnImprovementOnly,   // the literal pseudocode: cool only when the best improves
};

struct AnnealConfig {
  double t_initial = 1.0;
  double t_min = 1e-3;
  double cooling_factor = 0.98;
  CoolingPolicy cooling_policy = CoolingPolicy::EveryIteration;
  ScoringMode scoring_mode = ScoringMode::All;
  EdgeWeightPolicy weight_policy{};
  ObjectiveKind objective = ObjectiveKind::hq();
  std::uint64_t seed = 0;
  std::uint64_t max_iterations = 0;  // 0 = derived from the schedule

  void validate() const {
    if (!(t_initial > 0.0) || !(t_min > 0.0)) {
      throw std::invalid_argument("anneal: temperatures must be positive");
    }
    if (!(cooling_factor > 0.0 && cooling_factor < 1.0)) {
      throw std::invalid_argument("anneal: cooling factor must be in (0, 1)");
    }
    weight_policy.validate();
  }

  /// Number of proposals a full cooling sweep allows: T_initial * c^k > T_min.
  std::uint64_t cooling_step_limit() const {
    if (t_min >= t_initial) return 0;
    return static_cast<std::uint64_t>(
        std::ceil(std::log(t_min / t_initial) / std::log(cooling_factor)));
  }
};

struct TraceRow {
  std::uint32_t iteration = 0;
  NodeId proposed = 0;
  double de = 0.0;           // HQ(P_new) - HQ(P)
  double temperature = 0.0;  // temperature the accept decision was made at
  bool accepted = false;
  double hq_current = 0.0;   // HQ of the pre-removal clustering this iteration
  double hq_best = 0.0;      // best HQ seen so far (after this iteration's update)
};

struct CusaResult {
  Partition partition;               // best partition found
  HasnGraph graph;                   // graph snapshot the partition refers to
  double hq = 0.0;                   // HQ of `partition` on `graph`
  std::vector<NodeId> removed_ais;   // accepted removals reflected in `partition`
  std::vector<NodeId> removed_ais_full;  // every accepted removal over the run
  std::vector<TraceRow> trace;
};

/// Metropolis escape rule: improvements always pass, a worse proposal passes
/// when exp(de / t) beats the uniform draw u.
inline bool accept_rule(double de, double t, double u) {
  if (de > 0.0) return true;
  return std::exp(de / t) > u;
}

/// AI nodes of the input graph minus the removals the trace accepted.
inline std::vector<NodeId> retained_ai_set(const HasnGraph& input,
                                           const std::vector<TraceRow>& trace) {
  std::vector<NodeId> retained = input.ai_nodes();
  for (const TraceRow& row : trace) {
    if (!row.accepted) continue;
    retained.erase(std::find(retained.begin(), retained.end(), row.proposed));
  }
  return retained;
}

/// The CUSA driver. Each iteration re-scores the remaining AI nodes on the
/// reweighted graph, proposes removing the lowest-humanoid one, reclusters
/// the reduced graph with AI-aware Louvain and accepts or rejects the removal
/// by the Metropolis rule on the HQ change. The clustering of the unchanged
/// graph is carried over from the previous iteration rather than recomputed.
/// The best pre-removal clustering seen (the initial one included) is
/// returned together with the removals it reflects and the full trace.
inline CusaResult cusa_run(const HasnGraph& g, const AnnealConfig& cfg) {
  cfg.validate();
  const std::uint64_t louvain_root = derive_substream(cfg.seed, "cusa/louvain");
  Rng uniform_stream(derive_substream(cfg.seed, "cusa/anneal"));
  std::uint64_t louvain_call = 0;
  const auto cluster = [&](const HasnGraph& graph) {
    return louvain(graph, cfg.objective, splitmix64(louvain_root + louvain_call++));
  };

  CusaResult result;
  HasnGraph current = g;
  Partition partition = cluster(current);
  double hq_current = g.edge_count() == 0 ? 0.0 : human_modularity_hq(current, partition, cfg.objective);

  result.graph = current;
  result.partition = partition;
  result.hq = hq_current;

  std::uint64_t iteration_cap = cfg.max_iterations;
  if (iteration_cap == 0) {
    const std::uint64_t steps = cfg.cooling_step_limit();
    iteration_cap = cfg.cooling_policy == CoolingPolicy::EveryIteration
                        ? steps
                        : 100 * (steps + g.ai_count() + 1);
  }

  double temperature = cfg.t_initial;
  std::uint32_t iteration = 0;
  while (temperature > cfg.t_min && current.ai_count() > 0 &&
         static_cast<std::uint64_t>(iteration) < iteration_cap) {
    const std::vector<HumanoidScore> scores =
        humanoid_scores(current, cfg.scoring_mode, cfg.weight_policy);
    const NodeId victim = lowest_humanoid_ai(scores);
    const HasnGraph reduced = current.removed(victim);
    const Partition reduced_partition = cluster(reduced);
    const double hq_new = reduced.edge_count() == 0
                              ? 0.0
                              : human_modularity_hq(reduced, reduced_partition, cfg.objective);
    const double de = hq_new - hq_current;
    const double u = de > 0.0 ? 0.0 : uniform_stream.uniform01();
    const bool accepted = accept_rule(de, temperature, u);

    const bool improved = hq_current >= result.hq;
    if (improved) {
      result.hq = hq_current;
      result.partition = partition;
      result.graph = current;
      result.removed_ais = result.removed_ais_full;
    }
    TraceRow row;
    row.iteration = iteration;
    row.proposed = victim;
    row.de = de;
    row.temperature = temperature;
    row.accepted = accepted;
    row.hq_current = hq_current;
    row.hq_best = result.hq;
    result.trace.push_back(row);

    if (accepted) {
      current = reduced;
      partition = reduced_partition;
      hq_current = hq_new;
      result.removed_ais_full.push_back(victim);
    }
    if (cfg.cooling_policy == CoolingPolicy::EveryIteration || improved) {
      temperature *= cfg.cooling_factor;
    }
    ++iteration;
  }
  // The partition of the last accepted graph competes for best like any other
  // pre-removal clustering would have on the next iteration.
  if (hq_current >= result.hq) {
    result.hq = hq_current;
    result.partition = partition;
    result.graph = current;
    result.removed_ais = result.removed_ais_full;
  }
  return result;
}

}  // namespace metacd
