#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace metacd {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { Human, AI };

struct Neighbor {
  NodeId to;
  double weight;
};

struct EdgeSpec {
  NodeId u;
  NodeId v;
  double weight;
};

class Partition;

/// Undirected weighted graph whose nodes are tagged Human or AI.
///
/// Node ids are dense on construction and stay stable under removal: removing
/// a node leaves a hole in the id space instead of renumbering, so partitions,
/// traces and removal lists keep referring to the same nodes. Input graphs are
/// simple (no self-loops, no parallel edges); self-loops appear only in graphs
/// produced by aggregated(), where each super-node also carries the
/// human/AI member counts of the community it condenses.
///
/// Weight conventions: degree(v) sums incident weights with a self-loop of
/// weight w contributing 2w, and total_weight() == sum of all degrees, the
/// weighted analogue of 2|E|. These choices keep modularity identical across
/// aggregation levels.
class HasnGraph {
 public:
  HasnGraph() = default;

  static HasnGraph build(const std::vector<NodeKind>& kinds, const std::vector<EdgeSpec>& edges) {
    HasnGraph g;
    g.nodes_.reserve(kinds.size());
    for (NodeKind k : kinds) g.add_node(k);
    for (const EdgeSpec& e : edges) g.add_edge(e.u, e.v, e.weight);
    return g;
  }

  NodeId add_node(NodeKind kind) {
    const NodeId id = static_cast<NodeId>(nodes_.size());
    NodeRec rec;
    rec.kind = kind;
    rec.member_humans = kind == NodeKind::Human ? 1 : 0;
    rec.member_ais = kind == NodeKind::AI ? 1 : 0;
    nodes_.push_back(rec);
    adj_.emplace_back();
    if (kind == NodeKind::Human) {
      ++humans_;
    } else {
      ++ais_;
    }
    ++present_;
    return id;
  }

  /// Adds an undirected edge. Rejects absent endpoints, self-loops,
  /// non-positive weights and duplicates.
  void add_edge(NodeId u, NodeId v, double weight) {
    require_present(u);
    require_present(v);
    if (u == v) throw std::invalid_argument("add_edge: self-loop at node " + std::to_string(u));
    if (weight <= 0.0) {
      throw std::invalid_argument("add_edge: non-positive weight on edge (" + std::to_string(u) +
                                  ", " + std::to_string(v) + ")");
    }
    if (has_edge(u, v)) {
      throw std::invalid_argument("add_edge: duplicate edge (" + std::to_string(u) + ", " +
                                  std::to_string(v) + ")");
    }
    adj_[u].push_back({v, weight});
    adj_[v].push_back({u, weight});
    nodes_[u].degree += weight;
    nodes_[v].degree += weight;
    total_weight_ += 2.0 * weight;
    ++edge_count_;
  }

  bool has_edge(NodeId u, NodeId v) const {
    require_present(u);
    require_present(v);
    const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    const NodeId other = adj_[u].size() <= adj_[v].size() ? v : u;
    for (const Neighbor& n : a) {
      if (n.to == other) return true;
    }
    return false;
  }

  /// Copy of the graph without node v and its incident edges. Ids of the
  /// remaining nodes are unchanged.
  HasnGraph removed(NodeId v) const {
    require_present(v);
    HasnGraph g = *this;
    for (const Neighbor& n : g.adj_[v]) {
      if (n.to == v) continue;
      auto& back = g.adj_[n.to];
      back.erase(std::find_if(back.begin(), back.end(),
                              [v](const Neighbor& x) { return x.to == v; }));
      g.nodes_[n.to].degree -= n.weight;
      g.total_weight_ -= 2.0 * n.weight;
      --g.edge_count_;
    }
    if (g.nodes_[v].self_loop > 0.0) {
      g.total_weight_ -= 2.0 * g.nodes_[v].self_loop;
      --g.edge_count_;
    }
    g.adj_[v].clear();
    g.adj_[v].shrink_to_fit();
    const NodeRec& rec = g.nodes_[v];
    g.humans_ -= rec.kind == NodeKind::Human ? 1 : 0;
    g.ais_ -= rec.kind == NodeKind::AI ? 1 : 0;
    --g.present_;
    g.nodes_[v].present = false;
    g.nodes_[v].degree = 0.0;
    g.nodes_[v].self_loop = 0.0;
    return g;
  }

  /// One super-node per community of p; defined after Partition below.
  inline HasnGraph aggregated(const Partition& p) const;

  /// Copy with every edge weight replaced by f(u, v, current_weight).
  template <typename F>
  HasnGraph reweighted(F&& f) const {
    HasnGraph g = *this;
    g.total_weight_ = 0.0;
    for (NodeId u = 0; u < g.capacity(); ++u) {
      if (!g.nodes_[u].present) continue;
      double degree = 0.0;
      for (Neighbor& n : g.adj_[u]) {
        const double w = n.to == u ? n.weight : f(u, n.to, n.weight);
        if (w <= 0.0) throw std::invalid_argument("reweighted: non-positive weight");
        n.weight = w;
        degree += n.to == u ? 2.0 * w : w;
      }
      g.nodes_[u].degree = degree;
      g.total_weight_ += degree;
    }
    return g;
  }

  std::uint32_t capacity() const { return static_cast<std::uint32_t>(nodes_.size()); }
  std::uint32_t node_count() const { return present_; }
  std::uint32_t human_count() const { return humans_; }
  std::uint32_t ai_count() const { return ais_; }
  std::uint64_t edge_count() const { return edge_count_; }
  double total_weight() const { return total_weight_; }

  bool contains(NodeId v) const { return v < nodes_.size() && nodes_[v].present; }

  NodeKind kind(NodeId v) const {
    require_present(v);
    return nodes_[v].kind;
  }

  /// Weighted degree; a self-loop of weight w counts as 2w.
  double degree(NodeId v) const {
    require_present(v);
    return nodes_[v].degree;
  }

  double self_loop(NodeId v) const {
    require_present(v);
    return nodes_[v].self_loop;
  }

  /// Number of distinct neighbors, self excluded (the unweighted degree).
  std::uint32_t neighbor_count(NodeId v) const {
    require_present(v);
    const auto& a = adj_[v];
    return static_cast<std::uint32_t>(a.size()) - (nodes_[v].self_loop > 0.0 ? 1u : 0u);
  }

  const std::vector<Neighbor>& neighbors(NodeId v) const {
    require_present(v);
    return adj_[v];
  }

  std::uint32_t member_humans(NodeId v) const {
    require_present(v);
    return nodes_[v].member_humans;
  }

  std::uint32_t member_ais(NodeId v) const {
    require_present(v);
    return nodes_[v].member_ais;
  }

  std::vector<NodeId> node_ids() const {
    std::vector<NodeId> out;
    out.reserve(present_);
    for (NodeId v = 0; v < capacity(); ++v) {
      if (nodes_[v].present) out.push_back(v);
    }
    return out;
  }

  std::vector<NodeId> ai_nodes() const {
    std::vector<NodeId> out;
    out.reserve(ais_);
    for (NodeId v = 0; v < capacity(); ++v) {
      if (nodes_[v].present && nodes_[v].kind == NodeKind::AI) out.push_back(v);
    }
    return out;
  }

  /// Visits every undirected edge once as (u, v, w) with u <= v; self-loops
  /// come as (v, v, w).
  template <typename F>
  void for_each_edge(F&& f) const {
    for (NodeId u = 0; u < capacity(); ++u) {
      if (!nodes_[u].present) continue;
      for (const Neighbor& n : adj_[u]) {
        if (n.to >= u) f(u, n.to, n.weight);
      }
    }
  }

  bool structurally_equal(const HasnGraph& other) const {
    if (capacity() != other.capacity() || edge_count_ != other.edge_count_) return false;
    for (NodeId v = 0; v < capacity(); ++v) {
      if (nodes_[v].present != other.nodes_[v].present) return false;
      if (!nodes_[v].present) continue;
      if (nodes_[v].kind != other.nodes_[v].kind) return false;
      auto a = adj_[v];
      auto b = other.adj_[v];
      auto by_id = [](const Neighbor& x, const Neighbor& y) { return x.to < y.to; };
      std::sort(a.begin(), a.end(), by_id);
      std::sort(b.begin(), b.end(), by_id);
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].to != b[i].to || a[i].weight != b[i].weight) return false;
      }
    }
    return true;
  }

 private:
  struct NodeRec {
    bool present = true;
    NodeKind kind = NodeKind::Human;
    double degree = 0.0;
    double self_loop = 0.0;
    std::uint32_t member_humans = 0;
    std::uint32_t member_ais = 0;
  };

  void require_present(NodeId v) const {
    if (!contains(v)) {
      throw std::invalid_argument("node " + std::to_string(v) + " is not in the graph");
    }
  }

  // Only aggregation introduces self-loops and multi-member payloads.
  NodeId add_super_node(std::uint32_t member_humans, std::uint32_t member_ais) {
    const NodeKind majority = member_ais > member_humans ? NodeKind::AI : NodeKind::Human;
    const NodeId id = add_node(majority);
    nodes_[id].member_humans = member_humans;
    nodes_[id].member_ais = member_ais;
    if (majority == NodeKind::Human) {
      --humans_;
    } else {
      --ais_;
    }
    humans_ += member_humans;
    ais_ += member_ais;
    return id;
  }

  void add_self_loop(NodeId v, double weight) {
    adj_[v].push_back({v, weight});
    nodes_[v].self_loop += weight;
    nodes_[v].degree += 2.0 * weight;
    total_weight_ += 2.0 * weight;
    ++edge_count_;
  }

  std::vector<NodeRec> nodes_;
  std::vector<std::vector<Neighbor>> adj_;
  std::uint64_t edge_count_ = 0;
  double total_weight_ = 0.0;
  std::uint32_t humans_ = 0;
  std::uint32_t ais_ = 0;
  std::uint32_t present_ = 0;
};

/// Per-community bookkeeping used by modularity math and Louvain moves.
///
/// internal_weight is the single-counted sum of intra-community edge weights
/// (a self-loop contributes its weight once); incident_weight is the sum of
/// member degrees. humans/ais count original members, so they survive
/// aggregation via super-node payloads.
struct CommunityAggregate {
  double internal_weight = 0.0;
  double incident_weight = 0.0;
  std::uint32_t humans = 0;
  std::uint32_t ais = 0;

  std::uint32_t size() const { return humans + ais; }
  bool empty() const { return size() == 0; }
};

/// Assignment of the present nodes of a graph to disjoint communities,
/// with incrementally maintained per-community stats.
class Partition {
 public:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  Partition() = default;

  /// Every present node in its own community, numbered by ascending node id.
  static Partition singletons(const HasnGraph& g) {
    std::vector<std::uint32_t> assignment(g.capacity(), kNone);
    std::uint32_t next = 0;
    for (NodeId v = 0; v < g.capacity(); ++v) {
      if (g.contains(v)) assignment[v] = next++;
    }
    return from_assignment(g, assignment);
  }

  static Partition all_in_one(const HasnGraph& g) {
    std::vector<std::uint32_t> assignment(g.capacity(), kNone);
    for (NodeId v = 0; v < g.capacity(); ++v) {
      if (g.contains(v)) assignment[v] = 0;
    }
    return from_assignment(g, assignment);
  }

  /// Builds a partition from a per-node community index (kNone for absent
  /// nodes) and computes all community stats from scratch.
  static Partition from_assignment(const HasnGraph& g, std::vector<std::uint32_t> assignment) {
    if (assignment.size() != g.capacity()) {
      throw std::invalid_argument("partition: assignment size does not match the graph");
    }
    std::uint32_t max_comm = 0;
    for (NodeId v = 0; v < g.capacity(); ++v) {
      const bool assigned = assignment[v] != kNone;
      if (assigned != g.contains(v)) {
        throw std::invalid_argument("partition: does not cover exactly the present nodes");
      }
      if (assigned) max_comm = std::max(max_comm, assignment[v]);
    }
    Partition p;
    p.assignment_ = std::move(assignment);
    p.stats_.assign(g.node_count() == 0 ? 0 : max_comm + 1, CommunityAggregate{});
    for (NodeId v = 0; v < g.capacity(); ++v) {
      if (!g.contains(v)) continue;
      CommunityAggregate& c = p.stats_[p.assignment_[v]];
      c.incident_weight += g.degree(v);
      c.humans += g.member_humans(v);
      c.ais += g.member_ais(v);
    }
    g.for_each_edge([&](NodeId u, NodeId v, double w) {
      if (p.assignment_[u] == p.assignment_[v]) p.stats_[p.assignment_[u]].internal_weight += w;
    });
    return p;
  }

  std::uint32_t community_of(NodeId v) const {
    return v < assignment_.size() ? assignment_[v] : kNone;
  }

  const std::vector<std::uint32_t>& assignment() const { return assignment_; }

  /// Number of stat slots, including any emptied by moves. Equals the number
  /// of communities after normalize().
  std::uint32_t slot_count() const { return static_cast<std::uint32_t>(stats_.size()); }

  std::uint32_t community_count() const {
    std::uint32_t k = 0;
    for (const CommunityAggregate& c : stats_) {
      if (!c.empty()) ++k;
    }
    return k;
  }

  const CommunityAggregate& stats(std::uint32_t community) const { return stats_.at(community); }

  /// Moves one node to another community, updating both communities' stats
  /// in O(deg v).
  void move_node(const HasnGraph& g, NodeId v, std::uint32_t target) {
    const std::uint32_t from = community_of(v);
    if (from == kNone) throw std::invalid_argument("move_node: node not covered");
    if (target >= stats_.size()) stats_.resize(target + 1);
    if (from == target) return;
    double to_from = 0.0;
    double to_target = 0.0;
    for (const Neighbor& n : g.neighbors(v)) {
      if (n.to == v) continue;
      const std::uint32_t c = assignment_[n.to];
      if (c == from) to_from += n.weight;
      if (c == target) to_target += n.weight;
    }
    const double loop = g.self_loop(v);
    CommunityAggregate& a = stats_[from];
    a.internal_weight -= to_from + loop;
    a.incident_weight -= g.degree(v);
    a.humans -= g.member_humans(v);
    a.ais -= g.member_ais(v);
    CommunityAggregate& b = stats_[target];
    b.internal_weight += to_target + loop;
    b.incident_weight += g.degree(v);
    b.humans += g.member_humans(v);
    b.ais += g.member_ais(v);
    assignment_[v] = target;
  }

  /// Renumbers communities contiguously from 0 in order of first appearance
  /// over ascending node id, dropping empty slots.
  void normalize() {
    std::vector<std::uint32_t> remap(stats_.size(), kNone);
    std::vector<CommunityAggregate> packed;
    for (std::uint32_t& c : assignment_) {
      if (c == kNone) continue;
      if (remap[c] == kNone) {
        remap[c] = static_cast<std::uint32_t>(packed.size());
        packed.push_back(stats_[c]);
      }
      c = remap[c];
    }
    stats_ = std::move(packed);
  }

  bool same_clustering(const Partition& other) const {
    if (assignment_.size() != other.assignment_.size()) return false;
    Partition a = *this;
    Partition b = other;
    a.normalize();
    b.normalize();
    return a.assignment_ == b.assignment_;
  }

 private:
  std::vector<std::uint32_t> assignment_;
  std::vector<CommunityAggregate> stats_;
};

inline HasnGraph HasnGraph::aggregated(const Partition& p) const {
  std::vector<CommunityAggregate> agg;
  for (NodeId v = 0; v < capacity(); ++v) {
    if (!nodes_[v].present) continue;
    const std::uint32_t c = p.community_of(v);
    if (c == Partition::kNone) throw std::invalid_argument("aggregated: partition does not cover the graph");
    if (c >= agg.size()) agg.resize(c + 1);
    agg[c].humans += nodes_[v].member_humans;
    agg[c].ais += nodes_[v].member_ais;
  }
  // Super-nodes are numbered by first appearance over ascending node id.
  std::vector<std::uint32_t> super_id(agg.size(), Partition::kNone);
  HasnGraph g;
  {
    std::vector<std::uint32_t> seen_order;
    std::vector<bool> seen(agg.size(), false);
    for (NodeId v = 0; v < capacity(); ++v) {
      if (!nodes_[v].present) continue;
      const std::uint32_t c = p.community_of(v);
      if (!seen[c]) {
        seen[c] = true;
        seen_order.push_back(c);
      }
    }
    for (std::uint32_t c : seen_order) {
      super_id[c] = g.add_super_node(agg[c].humans, agg[c].ais);
    }
  }
  // Sum parallel edges between community pairs; intra weight becomes a loop.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> cross(g.capacity());
  std::vector<double> loops(g.capacity(), 0.0);
  for_each_edge([&](NodeId u, NodeId v, double w) {
    const std::uint32_t a = super_id[p.community_of(u)];
    const std::uint32_t b = super_id[p.community_of(v)];
    if (a == b) {
      loops[a] += w;
    } else {
      cross[std::min(a, b)].push_back({std::max(a, b), w});
    }
  });
  for (std::uint32_t a = 0; a < g.capacity(); ++a) {
    auto& out = cross[a];
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < out.size();) {
      double w = out[i].second;
      std::size_t j = i + 1;
      while (j < out.size() && out[j].first == out[i].first) {
        w += out[j].second;
        ++j;
      }
      g.add_edge(a, out[i].first, w);
      i = j;
    }
    if (loops[a] > 0.0) g.add_self_loop(a, loops[a]);
  }
  return g;
}

}  // namespace metacd
