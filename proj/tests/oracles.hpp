// Test-only reference implementations, kept deliberately independent of the
// library's production code paths: modularity by the literal double sum,
// betweenness by exhaustive path enumeration, eigenvectors by dense Jacobi
// rotation, and exhaustive partition search via restricted growth strings.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "metacd/graph.hpp"
#include "metacd/modularity.hpp"
#include "metacd/rng.hpp"

namespace oracles {

using metacd::CommunityAggregate;
using metacd::HasnGraph;
using metacd::NodeId;
using metacd::ObjectiveKind;
using metacd::Partition;

/// Dense symmetric adjacency with A[v][v] = 2 * self_loop(v).
inline std::vector<std::vector<double>> adjacency_matrix(const HasnGraph& g) {
  const std::size_t n = g.capacity();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  g.for_each_edge([&](NodeId u, NodeId v, double w) {
    if (u == v) {
      a[u][u] += 2.0 * w;
    } else {
      a[u][v] += w;
      a[v][u] += w;
    }
  });
  return a;
}

/// Literal modularity double sum over ordered member pairs, diagonal included.
inline double q_double_sum(const HasnGraph& g, const Partition& p) {
  const auto a = adjacency_matrix(g);
  const double m2 = g.total_weight();
  const std::vector<NodeId> nodes = g.node_ids();
  double q = 0.0;
  for (NodeId u : nodes) {
    for (NodeId v : nodes) {
      if (p.community_of(u) != p.community_of(v)) continue;
      q += a[u][v] - g.degree(u) * g.degree(v) / m2;
    }
  }
  return q / m2;
}

/// Literal human-centric modularity: per community, alpha * W(C) times the
/// community's double sum.
inline double hq_double_sum(const HasnGraph& g, const Partition& p, const ObjectiveKind& obj) {
  const auto a = adjacency_matrix(g);
  const double m2 = g.total_weight();
  const std::vector<NodeId> nodes = g.node_ids();
  std::uint32_t slots = 0;
  for (NodeId v : nodes) slots = std::max(slots, p.community_of(v) + 1);
  double hq = 0.0;
  for (std::uint32_t c = 0; c < slots; ++c) {
    double inner = 0.0;
    std::uint32_t humans = 0;
    std::uint32_t ais = 0;
    bool any = false;
    for (NodeId u : nodes) {
      if (p.community_of(u) != c) continue;
      any = true;
      humans += g.member_humans(u);
      ais += g.member_ais(u);
      for (NodeId v : nodes) {
        if (p.community_of(v) != c) continue;
        inner += a[u][v] - g.degree(u) * g.degree(v) / m2;
      }
    }
    if (!any) continue;
    const double w = obj.is_hq()
                         ? metacd::reward_penalty_w(humans, ais, obj.beta, obj.gamma)
                         : 1.0;
    const double alpha = obj.is_hq() ? obj.alpha : 1.0;
    hq += alpha * w * inner;
  }
  return hq / m2;
}

/// Betweenness by exhaustive simple-path enumeration. Path lengths accumulate
/// source-outward (as Dijkstra's do), shortest paths are those whose length
/// compares exactly equal to the minimum, and every unordered pair counts
/// once.
inline std::vector<double> brute_force_bc(const HasnGraph& g) {
  const std::vector<NodeId> nodes = g.node_ids();
  std::vector<double> bc(g.capacity(), 0.0);
  std::vector<std::uint8_t> visited(g.capacity(), 0);
  std::vector<NodeId> path;
  for (std::size_t si = 0; si < nodes.size(); ++si) {
    for (std::size_t ti = si + 1; ti < nodes.size(); ++ti) {
      const NodeId s = nodes[si];
      const NodeId t = nodes[ti];
      double best = std::numeric_limits<double>::infinity();
      double sigma = 0.0;
      std::vector<double> through(g.capacity(), 0.0);
      const std::function<void(NodeId, double)> dfs = [&](NodeId v, double len) {
        if (len > best) return;
        if (v == t) {
          if (len < best) {
            best = len;
            sigma = 0.0;
            std::fill(through.begin(), through.end(), 0.0);
          }
          if (len == best) {
            sigma += 1.0;
            for (std::size_t i = 1; i + 1 < path.size(); ++i) through[path[i]] += 1.0;
          }
          return;
        }
        if (len == best) return;  // any extension exceeds the minimum
        for (const metacd::Neighbor& e : g.neighbors(v)) {
          if (e.to == v || visited[e.to]) continue;
          visited[e.to] = 1;
          path.push_back(e.to);
          dfs(e.to, len + 1.0 / e.weight);
          path.pop_back();
          visited[e.to] = 0;
        }
      };
      visited[s] = 1;
      path = {s};
      dfs(s, 0.0);
      visited[s] = 0;
      if (sigma > 0.0) {
        for (NodeId v : nodes) bc[v] += through[v] / sigma;
      }
    }
  }
  return bc;
}

/// Dominant eigenvector of the weighted adjacency via cyclic Jacobi rotation,
/// oriented non-negative and L2-normalized.
inline std::vector<double> dominant_eigenvector(const HasnGraph& g) {
  auto a = adjacency_matrix(g);
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-18) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::size_t arg = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (a[i][i] > a[arg][arg]) arg = i;
  }
  std::vector<double> vec(n);
  double norm = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    vec[i] = v[i][arg];
    norm += vec[i] * vec[i];
    sum += vec[i];
  }
  norm = std::sqrt(norm);
  for (double& x : vec) x = (sum < 0 ? -x : x) / norm;
  return vec;
}

/// Invokes f with every partition of {0..n-1} (restricted growth strings).
inline void for_each_partition(std::uint32_t n,
                               const std::function<void(const std::vector<std::uint32_t>&)>& f) {
  std::vector<std::uint32_t> rgs(n, 0);
  std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t i,
                                                              std::uint32_t max_used) {
    if (i == n) {
      f(rgs);
      return;
    }
    for (std::uint32_t c = 0; c <= max_used + 1 && c < n; ++c) {
      rgs[i] = c;
      rec(i + 1, std::max(max_used, c));
    }
  };
  if (n == 0) return;
  rgs[0] = 0;
  rec(1, 0);
}

/// Best objective value over every partition of the present nodes.
inline double exhaustive_best_objective(const HasnGraph& g, const ObjectiveKind& obj) {
  const std::vector<NodeId> nodes = g.node_ids();
  double best = -std::numeric_limits<double>::infinity();
  for_each_partition(static_cast<std::uint32_t>(nodes.size()),
                     [&](const std::vector<std::uint32_t>& rgs) {
                       std::vector<std::uint32_t> assignment(g.capacity(), Partition::kNone);
                       for (std::size_t i = 0; i < nodes.size(); ++i) {
                         assignment[nodes[i]] = rgs[i];
                       }
                       const Partition p = Partition::from_assignment(g, assignment);
                       best = std::max(best, metacd::human_modularity_hq(g, p, obj));
                     });
  return best;
}

// ---------------------------------------------------------------------------
// Random fixtures

/// Connected random graph: random spanning tree plus extra random edges.
inline HasnGraph random_connected_graph(std::uint32_t n, std::uint32_t extra_edges,
                                        metacd::Rng& rng, bool integer_weights,
                                        double ai_fraction = 0.0) {
  std::vector<metacd::NodeKind> kinds(n, metacd::NodeKind::Human);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (rng.uniform01() < ai_fraction) kinds[v] = metacd::NodeKind::AI;
  }
  const auto draw_weight = [&]() {
    return integer_weights ? 1.0 + static_cast<double>(rng.uniform_below(3))
                           : 0.25 + rng.uniform01();
  };
  std::vector<metacd::EdgeSpec> edges;
  for (std::uint32_t v = 1; v < n; ++v) {
    edges.push_back({static_cast<NodeId>(rng.uniform_below(v)), v, draw_weight()});
  }
  HasnGraph g = HasnGraph::build(kinds, edges);
  for (std::uint32_t i = 0; i < extra_edges; ++i) {
    const NodeId u = static_cast<NodeId>(rng.uniform_below(n));
    const NodeId v = static_cast<NodeId>(rng.uniform_below(n));
    if (u == v || g.has_edge(u, v)) continue;
    g.add_edge(u, v, draw_weight());
  }
  return g;
}

inline Partition random_partition(const HasnGraph& g, std::uint32_t k, metacd::Rng& rng) {
  std::vector<std::uint32_t> assignment(g.capacity(), Partition::kNone);
  for (NodeId v : g.node_ids()) {
    assignment[v] = static_cast<std::uint32_t>(rng.uniform_below(k));
  }
  return Partition::from_assignment(g, assignment);
}

}  // namespace oracles
