#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "metacd/graph.hpp"

namespace metacd {

/// Edge weights by endpoint kinds: human-human, human-AI, AI-AI.
/// hh > ha > aa is the recommended ordering but any positive values go.
struct EdgeWeightPolicy {
  double hh = 3.0;
  double ha = 2.0;
  double aa = 1.0;

  void validate() const {
    if (hh <= 0.0 || ha <= 0.0 || aa <= 0.0) {
      throw std::invalid_argument("edge weight policy: weights must be positive");
    }
  }
};

enum class ScoringMode : std::uint8_t { EC, BC, CC, EC_BC, EC_CC, BC_CC, All };

inline bool scoring_uses_ec(ScoringMode m) {
  return m == ScoringMode::EC || m == ScoringMode::EC_BC || m == ScoringMode::EC_CC ||
         m == ScoringMode::All;
}
inline bool scoring_uses_bc(ScoringMode m) {
  return m == ScoringMode::BC || m == ScoringMode::EC_BC || m == ScoringMode::BC_CC ||
         m == ScoringMode::All;
}
inline bool scoring_uses_cc(ScoringMode m) {
  return m == ScoringMode::CC || m == ScoringMode::EC_CC || m == ScoringMode::BC_CC ||
         m == ScoringMode::All;
}

struct HumanoidScore {
  NodeId node = 0;
  double ec = 0.0;  // raw values; only the measures selected by the mode are filled
  double bc = 0.0;
  double cc = 0.0;
  double combined = 0.0;
};

/// Every edge weight replaced according to endpoint kinds. Topology unchanged.
inline HasnGraph reweight_edges(const HasnGraph& g, const EdgeWeightPolicy& policy) {
  policy.validate();
  return g.reweighted([&](NodeId u, NodeId v, double) {
    const int ai_ends = (g.kind(u) == NodeKind::AI ? 1 : 0) + (g.kind(v) == NodeKind::AI ? 1 : 0);
    return ai_ends == 0 ? policy.hh : ai_ends == 1 ? policy.ha : policy.aa;
  });
}

/// Eigenvector centrality by power iteration on the weighted adjacency,
/// L2-normalized, stopping when the largest component change drops below 1e-8
/// (or after 1000 rounds). The iteration applies A + I; the identity shift
/// leaves the dominant eigenvector unchanged and keeps bipartite graphs from
/// oscillating between the two alternating limits.
inline std::vector<double> eigenvector_centrality(const HasnGraph& g) {
  if (g.node_count() == 0) {
    throw std::invalid_argument("eigenvector_centrality: empty graph");
  }
  const std::uint32_t cap = g.capacity();
  std::vector<double> x(cap, 0.0);
  const double init = 1.0 / std::sqrt(static_cast<double>(g.node_count()));
  for (NodeId v = 0; v < cap; ++v) {
    if (g.contains(v)) x[v] = init;
  }
  std::vector<double> y(cap, 0.0);
  for (int iter = 0; iter < 1000; ++iter) {
    double norm_sq = 0.0;
    for (NodeId v = 0; v < cap; ++v) {
      if (!g.contains(v)) continue;
      double acc = x[v];
      for (const Neighbor& n : g.neighbors(v)) {
        acc += (n.to == v ? 2.0 : 1.0) * n.weight * x[n.to];
      }
      y[v] = acc;
      norm_sq += acc * acc;
    }
    const double norm = std::sqrt(norm_sq);
    double max_change = 0.0;
    for (NodeId v = 0; v < cap; ++v) {
      if (!g.contains(v)) continue;
      y[v] /= norm;
      max_change = std::max(max_change, std::abs(y[v] - x[v]));
    }
    x.swap(y);
    if (max_change < 1e-8) break;
  }
  return x;
}

namespace detail {

/// Compact view of the present nodes for the shortest-path kernels.
struct Csr {
  std::vector<NodeId> to_orig;
  std::vector<std::uint32_t> offset;
  std::vector<std::uint32_t> nbr;
  std::vector<double> weight;
  std::vector<double> dist;  // edge distance = 1 / weight

  explicit Csr(const HasnGraph& g) {
    std::vector<std::uint32_t> work_of(g.capacity(), 0);
    for (NodeId v = 0; v < g.capacity(); ++v) {
      if (!g.contains(v)) continue;
      work_of[v] = static_cast<std::uint32_t>(to_orig.size());
      to_orig.push_back(v);
    }
    const std::uint32_t n = static_cast<std::uint32_t>(to_orig.size());
    offset.assign(n + 1, 0);
    for (std::uint32_t w = 0; w < n; ++w) {
      offset[w + 1] = offset[w] + g.neighbor_count(to_orig[w]);
    }
    nbr.resize(offset[n]);
    weight.resize(offset[n]);
    dist.resize(offset[n]);
    std::vector<std::uint32_t> cursor(offset.begin(), offset.end() - 1);
    for (std::uint32_t w = 0; w < n; ++w) {
      for (const Neighbor& e : g.neighbors(to_orig[w])) {
        if (e.to == to_orig[w]) continue;  // loops never lie on shortest paths here
        if (e.weight <= 0.0) {
          throw std::invalid_argument("betweenness_centrality: non-positive edge weight");
        }
        nbr[cursor[w]] = work_of[e.to];
        weight[cursor[w]] = e.weight;
        dist[cursor[w]] = 1.0 / e.weight;
        ++cursor[w];
      }
    }
  }

  std::uint32_t size() const { return static_cast<std::uint32_t>(to_orig.size()); }
};

/// If every edge weight is a small positive integer, shortest-path arithmetic
/// can run on exact integer distances scaled by lcm(weights). This removes
/// floating-point ties entirely and is considerably faster than a heap.
inline std::uint64_t integer_distance_scale(const HasnGraph& g, std::uint64_t lcm_cap = 64) {
  std::uint64_t lcm = 1;
  bool ok = true;
  g.for_each_edge([&](NodeId, NodeId, double w) {
    if (!ok) return;
    const double r = std::round(w);
    if (w != r || r < 1.0 || r > static_cast<double>(lcm_cap)) {
      ok = false;
      return;
    }
    const std::uint64_t iw = static_cast<std::uint64_t>(r);
    lcm = std::lcm(lcm, iw);
    if (lcm > lcm_cap) ok = false;
  });
  return ok ? lcm : 0;
}

struct BrandesBuffers {
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<std::vector<std::uint32_t>> preds;
  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> touched;
};

inline void accumulate_dependencies(BrandesBuffers& buf, std::uint32_t source,
                                    std::vector<double>& bc) {
  for (auto it = buf.order.rbegin(); it != buf.order.rend(); ++it) {
    const std::uint32_t v = *it;
    for (std::uint32_t p : buf.preds[v]) {
      buf.delta[p] += buf.sigma[p] / buf.sigma[v] * (1.0 + buf.delta[v]);
    }
    if (v != source) bc[v] += buf.delta[v];
  }
}

}  // namespace detail

/// Brandes betweenness centrality with edge distance 1/weight (stronger ties
/// are shorter). Unnormalized, each unordered pair counted once. Requires all
/// weights positive. Deterministic; integer-representable weights take an
/// exact bucket-queue path, everything else an ordinary Dijkstra where path
/// lengths are accumulated source-outward so equal-length detection matches a
/// path-order oracle bit for bit.
inline std::vector<double> betweenness_centrality(const HasnGraph& g) {
  detail::Csr csr(g);
  const std::uint32_t n = csr.size();
  std::vector<double> bc_work(n, 0.0);
  detail::BrandesBuffers buf;
  buf.sigma.assign(n, 0.0);
  buf.delta.assign(n, 0.0);
  buf.preds.assign(n, {});
  buf.order.reserve(n);
  buf.touched.reserve(n);

  const std::uint64_t scale = detail::integer_distance_scale(g);
  if (scale > 0) {
    // Integer path: edge length = scale / weight, Dial's bucket queue.
    std::vector<std::uint64_t> ilen(csr.weight.size());
    for (std::size_t i = 0; i < csr.weight.size(); ++i) {
      ilen[i] = scale / static_cast<std::uint64_t>(std::round(csr.weight[i]));
    }
    constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> dist(n, kInf);
    std::vector<std::vector<std::uint32_t>> buckets;
    for (std::uint32_t s = 0; s < n; ++s) {
      std::uint64_t max_bucket = 0;
      dist[s] = 0;
      buf.sigma[s] = 1.0;
      buf.touched.push_back(s);
      if (buckets.empty()) buckets.resize(1);
      buckets[0].push_back(s);
      for (std::uint64_t cur = 0; cur <= max_bucket; ++cur) {
        for (std::size_t i = 0; i < buckets[cur].size(); ++i) {
          const std::uint32_t v = buckets[cur][i];
          if (dist[v] != cur) continue;
          buf.order.push_back(v);
          for (std::uint32_t e = csr.offset[v]; e < csr.offset[v + 1]; ++e) {
            const std::uint32_t to = csr.nbr[e];
            const std::uint64_t nd = cur + ilen[e];
            if (nd < dist[to]) {
              if (dist[to] == kInf) buf.touched.push_back(to);
              dist[to] = nd;
              buf.sigma[to] = buf.sigma[v];
              buf.preds[to].clear();
              buf.preds[to].push_back(v);
              if (nd >= buckets.size()) buckets.resize(nd + 1);
              buckets[nd].push_back(to);
              max_bucket = std::max(max_bucket, nd);
            } else if (nd == dist[to]) {
              buf.sigma[to] += buf.sigma[v];
              buf.preds[to].push_back(v);
            }
          }
        }
      }
      detail::accumulate_dependencies(buf, s, bc_work);
      for (std::uint64_t b = 0; b <= max_bucket; ++b) buckets[b].clear();
      for (std::uint32_t v : buf.touched) {
        dist[v] = kInf;
        buf.sigma[v] = 0.0;
        buf.delta[v] = 0.0;
        buf.preds[v].clear();
      }
      buf.touched.clear();
      buf.order.clear();
    }
  } else {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    using Entry = std::pair<double, std::uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    for (std::uint32_t s = 0; s < n; ++s) {
      dist[s] = 0.0;
      buf.sigma[s] = 1.0;
      buf.touched.push_back(s);
      heap.push({0.0, s});
      while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        buf.order.push_back(v);
        for (std::uint32_t e = csr.offset[v]; e < csr.offset[v + 1]; ++e) {
          const std::uint32_t to = csr.nbr[e];
          const double nd = d + csr.dist[e];
          if (nd < dist[to]) {
            if (dist[to] == kInf) buf.touched.push_back(to);
            dist[to] = nd;
            buf.sigma[to] = buf.sigma[v];
            buf.preds[to].clear();
            buf.preds[to].push_back(v);
            heap.push({nd, to});
          } else if (nd == dist[to]) {
            buf.sigma[to] += buf.sigma[v];
            buf.preds[to].push_back(v);
          }
        }
      }
      detail::accumulate_dependencies(buf, s, bc_work);
      for (std::uint32_t v : buf.touched) {
        dist[v] = kInf;
        buf.sigma[v] = 0.0;
        buf.delta[v] = 0.0;
        buf.preds[v].clear();
      }
      buf.touched.clear();
      buf.order.clear();
    }
  }

  std::vector<double> out(g.capacity(), 0.0);
  for (std::uint32_t w = 0; w < n; ++w) out[csr.to_orig[w]] = bc_work[w] / 2.0;
  return out;
}

/// Watts-Strogatz local clustering coefficient, unweighted:
/// 2 * links_among_neighbors / (d * (d - 1)); nodes with fewer than two
/// neighbors score 0.
inline std::vector<double> clustering_coefficient(const HasnGraph& g) {
  std::vector<double> out(g.capacity(), 0.0);
  std::vector<std::uint8_t> mark(g.capacity(), 0);
  for (NodeId v = 0; v < g.capacity(); ++v) {
    if (!g.contains(v)) continue;
    const std::uint32_t d = g.neighbor_count(v);
    if (d < 2) continue;
    for (const Neighbor& n : g.neighbors(v)) {
      if (n.to != v) mark[n.to] = 1;
    }
    std::uint64_t links_twice = 0;
    for (const Neighbor& n : g.neighbors(v)) {
      if (n.to == v) continue;
      for (const Neighbor& m : g.neighbors(n.to)) {
        if (m.to != n.to && mark[m.to]) ++links_twice;
      }
    }
    out[v] = static_cast<double>(links_twice) /
             (static_cast<double>(d) * static_cast<double>(d - 1));
    for (const Neighbor& n : g.neighbors(v)) {
      if (n.to != v) mark[n.to] = 0;
    }
  }
  return out;
}

namespace detail {

/// Min-max over the AI nodes only; with fewer than two distinct values every
/// AI maps to 0.5 so the combination stays total and tie-breaking stays
/// deterministic.
inline std::vector<double> minmax_over(const std::vector<NodeId>& nodes,
                                       const std::vector<double>& raw) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (NodeId v : nodes) {
    lo = std::min(lo, raw[v]);
    hi = std::max(hi, raw[v]);
  }
  std::vector<double> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out[i] = hi > lo ? (raw[nodes[i]] - lo) / (hi - lo) : 0.5;
  }
  return out;
}

}  // namespace detail

/// Humanoid score of every AI node: the graph is reweighted by the policy,
/// the selected measures are computed over the whole graph, each measure is
/// min-max normalized across the AI nodes, and the normalized terms are
/// summed with equal weight. The clustering-coefficient term enters inverted
/// (1 - norm) since low-CC AI nodes are the valuable bridges.
inline std::vector<HumanoidScore> humanoid_scores(const HasnGraph& g, ScoringMode mode,
                                                  const EdgeWeightPolicy& policy) {
  if (g.ai_count() == 0) {
    throw std::invalid_argument("humanoid_scores: graph has no AI nodes");
  }
  const HasnGraph weighted = reweight_edges(g, policy);
  const std::vector<NodeId> ais = g.ai_nodes();

  std::vector<double> ec, bc, cc;
  if (scoring_uses_ec(mode)) ec = eigenvector_centrality(weighted);
  if (scoring_uses_bc(mode)) bc = betweenness_centrality(weighted);
  if (scoring_uses_cc(mode)) cc = clustering_coefficient(weighted);

  std::vector<HumanoidScore> scores(ais.size());
  for (std::size_t i = 0; i < ais.size(); ++i) {
    scores[i].node = ais[i];
    if (!ec.empty()) scores[i].ec = ec[ais[i]];
    if (!bc.empty()) scores[i].bc = bc[ais[i]];
    if (!cc.empty()) scores[i].cc = cc[ais[i]];
  }
  if (!ec.empty()) {
    const std::vector<double> norm = detail::minmax_over(ais, ec);
    for (std::size_t i = 0; i < ais.size(); ++i) scores[i].combined += norm[i];
  }
  if (!bc.empty()) {
    const std::vector<double> norm = detail::minmax_over(ais, bc);
    for (std::size_t i = 0; i < ais.size(); ++i) scores[i].combined += norm[i];
  }
  if (!cc.empty()) {
    const std::vector<double> norm = detail::minmax_over(ais, cc);
    for (std::size_t i = 0; i < ais.size(); ++i) scores[i].combined += 1.0 - norm[i];
  }
  return scores;
}

/// AI node with the minimal combined score; ties go to the smallest id.
inline NodeId lowest_humanoid_ai(const std::vector<HumanoidScore>& scores) {
  if (scores.empty()) throw std::invalid_argument("lowest_humanoid_ai: no scores");
  const HumanoidScore* best = &scores.front();
  for (const HumanoidScore& s : scores) {
    if (s.combined < best->combined || (s.combined == best->combined && s.node < best->node)) {
      best = &s;
    }
  }
  return best->node;
}

}  // namespace metacd
