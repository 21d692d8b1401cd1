#pragma once

#include <numeric>
#include <vector>

#include "metacd/graph.hpp"
#include "metacd/modularity.hpp"
#include "metacd/rng.hpp"

namespace metacd {

struct MoveGain {
  NodeId node = 0;
  std::uint32_t target_community = 0;
  double gain = 0.0;
};

namespace detail {

/// Objective contribution of one community. Empty aggregates contribute
/// nothing (their W is undefined, their structural term is zero).
inline double objective_term(const CommunityAggregate& c, double total_weight,
                             const ObjectiveKind& obj) {
  if (!obj.is_hq()) return community_q_term(c, total_weight);
  if (c.empty()) return 0.0;
  return obj.alpha * reward_penalty_w(c.humans, c.ais, obj.beta, obj.gamma) *
         community_q_term(c, total_weight);
}

}  // namespace detail

/// Exact objective gain of merging a lone community `mover` into `target`,
/// where k_i_in is the weight between the mover and target members. Both the
/// target's term, the merged term and the mover's own term are accounted for,
/// so the result equals objective(after) - objective(before) to rounding.
inline double delta_objective(const CommunityAggregate& target, const CommunityAggregate& mover,
                              double k_i_in, double total_weight, const ObjectiveKind& obj) {
  CommunityAggregate merged;
  merged.internal_weight = target.internal_weight + mover.internal_weight + k_i_in;
  merged.incident_weight = target.incident_weight + mover.incident_weight;
  merged.humans = target.humans + mover.humans;
  merged.ais = target.ais + mover.ais;
  return detail::objective_term(merged, total_weight, obj) -
         detail::objective_term(target, total_weight, obj) -
         detail::objective_term(mover, total_weight, obj);
}

/// Modularity gain of moving a node with incident weight k_i into a community
/// with the given stats; k_i_in is the node's weight into that community.
inline double delta_q(const CommunityAggregate& stats, double k_i, double k_i_in,
                      double total_weight) {
  CommunityAggregate mover;
  mover.incident_weight = k_i;
  return delta_objective(stats, mover, k_i_in, total_weight, ObjectiveKind::q());
}

/// Human-centric gain. `stats_before` describes the target community without
/// the mover; `mover` carries the moving node's (or super-node's) incident
/// weight, self-loop weight and member composition, which the merged W
/// includes.
inline double delta_hq(const CommunityAggregate& stats_before, const CommunityAggregate& mover,
                       double k_i_in, double total_weight, const ObjectiveKind& obj) {
  return delta_objective(stats_before, mover, k_i_in, total_weight, obj);
}

namespace detail {

struct LocalMoveOutcome {
  std::vector<std::uint32_t> comm;
  bool any_move = false;
};

inline double objective_of(const std::vector<CommunityAggregate>& cs, double total_weight,
                           const ObjectiveKind& obj) {
  double sum = 0.0;
  for (const CommunityAggregate& c : cs) {
    if (!c.empty()) sum += objective_term(c, total_weight, obj);
  }
  return sum;
}

constexpr double kGainThreshold = 1e-10;

/// One Louvain level: sweeps nodes in seeded-random order and greedily moves
/// each to the neighboring community with the largest positive net gain
/// (ties: lowest community index), until a full sweep moves nothing.
inline LocalMoveOutcome local_move_phase(const HasnGraph& g, const ObjectiveKind& obj, Rng& rng,
                                         std::vector<double>* objective_trace) {
  const std::uint32_t n = g.capacity();
  const double m2 = g.total_weight();
  LocalMoveOutcome out;
  out.comm.resize(n);
  std::vector<CommunityAggregate> cs(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    out.comm[v] = v;
    cs[v] = CommunityAggregate{g.self_loop(v), g.degree(v), g.member_humans(v),
                               g.member_ais(v)};
  }
  std::vector<double> weight_to(n, 0.0);
  std::vector<std::uint32_t> candidates;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);

  for (;;) {
    rng.shuffle(order);
    std::uint32_t moves = 0;
    for (std::uint32_t v : order) {
      const std::uint32_t home = out.comm[v];
      candidates.clear();
      for (const Neighbor& e : g.neighbors(v)) {
        if (e.to == v) continue;
        const std::uint32_t c = out.comm[e.to];
        if (weight_to[c] == 0.0) candidates.push_back(c);
        weight_to[c] += e.weight;
      }
      const CommunityAggregate mover{g.self_loop(v), g.degree(v), g.member_humans(v),
                                     g.member_ais(v)};
      CommunityAggregate rest = cs[home];
      rest.internal_weight -= weight_to[home] + mover.internal_weight;
      rest.incident_weight -= mover.incident_weight;
      rest.humans -= mover.humans;
      rest.ais -= mover.ais;
      const double removal_gain = -delta_objective(rest, mover, weight_to[home], m2, obj);

      std::sort(candidates.begin(), candidates.end());
      MoveGain best{v, home, kGainThreshold};
      for (std::uint32_t c : candidates) {
        if (c == home) continue;
        const double gain = removal_gain + delta_objective(cs[c], mover, weight_to[c], m2, obj);
        if (gain > best.gain) {
          best.gain = gain;
          best.target_community = c;
        }
      }
      if (best.target_community != home) {
        cs[home] = rest;
        CommunityAggregate& t = cs[best.target_community];
        t.internal_weight += weight_to[best.target_community] + mover.internal_weight;
        t.incident_weight += mover.incident_weight;
        t.humans += mover.humans;
        t.ais += mover.ais;
        out.comm[v] = best.target_community;
        ++moves;
      }
      for (std::uint32_t c : candidates) weight_to[c] = 0.0;
      weight_to[home] = 0.0;
    }
    if (objective_trace) objective_trace->push_back(objective_of(cs, m2, obj));
    out.any_move |= moves > 0;
    if (moves == 0) break;
  }
  return out;
}

}  // namespace detail

/// Louvain clustering of the present nodes of g under the given objective.
/// Alternates local moves with super-node aggregation until no move clears
/// the gain threshold; returns a flat partition of the original nodes with
/// contiguous community indices. Edgeless graphs come back as singletons.
///
/// Output depends on the seeded node scan order; fixed seed, fixed result.
/// If objective_trace is given, the objective after every local-move sweep is
/// appended (non-decreasing across sweeps and levels).
inline Partition louvain(const HasnGraph& g, const ObjectiveKind& obj, std::uint64_t seed,
                         std::vector<double>* objective_trace = nullptr) {
  Partition base = Partition::singletons(g);
  if (g.node_count() == 0 || g.edge_count() == 0) return base;

  Rng rng(derive_substream(seed, "louvain"));
  std::vector<std::uint32_t> label = base.assignment();
  HasnGraph level = g.aggregated(base);

  for (;;) {
    detail::LocalMoveOutcome outcome =
        detail::local_move_phase(level, obj, rng, objective_trace);
    if (!outcome.any_move) break;
    Partition level_partition = Partition::from_assignment(level, std::move(outcome.comm));
    level_partition.normalize();
    for (std::uint32_t& l : label) {
      if (l != Partition::kNone) l = level_partition.community_of(l);
    }
    const std::uint32_t k = level_partition.slot_count();
    if (k == level.capacity()) break;
    level = level.aggregated(level_partition);
  }

  Partition out = Partition::from_assignment(g, std::move(label));
  out.normalize();
  return out;
}

}  // namespace metacd
