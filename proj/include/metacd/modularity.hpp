#pragma once

#include <stdexcept>

#include "metacd/graph.hpp"

namespace metacd {

/// Clustering objective: plain modularity Q, or the human-centric variant HQ
/// that scales each community's modularity term by alpha * W(community),
/// where W rewards human members (beta) and penalizes AI members (gamma).
struct ObjectiveKind {
  enum class Kind : std::uint8_t { Q, HQ };

  Kind kind = Kind::Q;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;

  static ObjectiveKind q() { return ObjectiveKind{}; }
  static ObjectiveKind hq(double alpha = 1.0, double beta = 1.0, double gamma = 1.0) {
    return ObjectiveKind{Kind::HQ, alpha, beta, gamma};
  }

  bool is_hq() const { return kind == Kind::HQ; }
};

/// Reward-penalty weight of a community: beta * humans/size - gamma * ais/size.
/// Negative for AI-majority communities (with beta == gamma); never clamped.
inline double reward_penalty_w(std::uint32_t humans, std::uint32_t ais, double beta,
                               double gamma) {
  const double size = static_cast<double>(humans) + static_cast<double>(ais);
  if (size == 0.0) throw std::invalid_argument("reward_penalty_w: empty community");
  return beta * (static_cast<double>(humans) / size) - gamma * (static_cast<double>(ais) / size);
}

/// One community's modularity contribution, 2*Sin/m2 - (Stot/m2)^2, where m2
/// is the graph's total weight. Sin counts intra edges once, so the doubling
/// here matches the double sum over ordered member pairs.
inline double community_q_term(const CommunityAggregate& c, double total_weight) {
  const double m2 = total_weight;
  const double tot = c.incident_weight / m2;
  return 2.0 * c.internal_weight / m2 - tot * tot;
}

namespace detail {

template <typename PerCommunity>
double sum_objective(const HasnGraph& g, const Partition& p, PerCommunity&& term) {
  if (g.edge_count() == 0) {
    throw std::invalid_argument("modularity is undefined on a graph with no edges");
  }
  // Stats are re-accumulated from the graph so the value never depends on how
  // the partition was produced.
  Partition fresh = Partition::from_assignment(g, p.assignment());
  double sum = 0.0;
  for (std::uint32_t c = 0; c < fresh.slot_count(); ++c) {
    const CommunityAggregate& stats = fresh.stats(c);
    if (stats.empty()) continue;
    sum += term(stats);
  }
  return sum;
}

}  // namespace detail

/// Newman modularity of a partition, diagonal terms included.
inline double modularity_q(const HasnGraph& g, const Partition& p) {
  const double m2 = g.total_weight();
  return detail::sum_objective(
      g, p, [m2](const CommunityAggregate& c) { return community_q_term(c, m2); });
}

/// Human-centric modularity: each community term is scaled by
/// alpha * W(community). With obj.kind == Q this is plain modularity.
inline double human_modularity_hq(const HasnGraph& g, const Partition& p,
                                  const ObjectiveKind& obj) {
  const double m2 = g.total_weight();
  if (!obj.is_hq()) return modularity_q(g, p);
  return detail::sum_objective(g, p, [&](const CommunityAggregate& c) {
    return obj.alpha * reward_penalty_w(c.humans, c.ais, obj.beta, obj.gamma) *
           community_q_term(c, m2);
  });
}

}  // namespace metacd
