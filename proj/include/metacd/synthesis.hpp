#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "metacd/graph.hpp"
#include "metacd/rng.hpp"

namespace metacd {

enum class GenStrategy : std::uint8_t {
  RandomInsertion = 1,
  InverseDegree = 2,
  IntroExtro = 3,
  DualPersonality = 4,
};

/// Parameters of the four HASN generation strategies. ai_ratio is the AI
/// fraction of the original node count; lambda drives RandomInsertion's
/// per-AI degree, (a, r) the InverseDegree decay, (x, y) the intra/inter
/// group link probabilities of IntroExtro and DualPersonality.
struct GenStrategyConfig {
  GenStrategy strategy = GenStrategy::RandomInsertion;
  double ai_ratio = 0.10;
  double lambda = 0.7;
  double a = 0.001;
  double r = 0.5;
  double x = 0.012;
  double y = 0.0002;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(ai_ratio > 0.0 && ai_ratio <= 1.0)) {
      throw std::invalid_argument("synthesis: ai_ratio must be in (0, 1]");
    }
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("synthesis: a must be in (0, 1]");
    if (!(r > 0.0)) throw std::invalid_argument("synthesis: r must be positive");
    if (!(y >= 0.0 && y < x && x <= 1.0)) {
      throw std::invalid_argument("synthesis: need 0 <= y < x <= 1");
    }
  }
};

struct EvolutionConfig {
  std::uint32_t pairs_per_round = 40;
  std::uint32_t rounds = 10;
};

/// Group membership of the human nodes, either from ground-truth labels or
/// from a Louvain pass over the human graph.
struct GroupAssignment {
  enum class Source : std::uint8_t { GroundTruthLabels, LouvainOnHumanGraph };
  static constexpr std::uint32_t kNoGroup = 0xffffffffu;

  std::vector<std::uint32_t> group_of;  // indexed by node id; kNoGroup where N/A
  std::uint32_t group_count = 0;
  Source source = Source::GroundTruthLabels;
};

namespace detail {

inline std::uint32_t ai_nodes_to_insert(const HasnGraph& g, double ratio) {
  const double amount = ratio * static_cast<double>(g.node_count());
  if (amount < 1.0) {
    throw std::invalid_argument("synthesis: ai_ratio * |V| < 1, no AI node to insert");
  }
  return static_cast<std::uint32_t>(std::ceil(amount));
}

inline void connect_unique(HasnGraph& g, NodeId ai, NodeId target) {
  if (ai != target && !g.has_edge(ai, target)) g.add_edge(ai, target, 1.0);
}

/// Collects group member lists over the human nodes; every human must be
/// covered.
inline std::vector<std::vector<NodeId>> group_members(const HasnGraph& g,
                                                      const GroupAssignment& groups) {
  std::vector<std::vector<NodeId>> members;
  for (NodeId v = 0; v < g.capacity(); ++v) {
    if (!g.contains(v) || g.kind(v) != NodeKind::Human) continue;
    if (v >= groups.group_of.size() || groups.group_of[v] == GroupAssignment::kNoGroup) {
      throw std::invalid_argument("synthesis: human node " + std::to_string(v) +
                                  " has no group");
    }
    const std::uint32_t grp = groups.group_of[v];
    if (grp >= members.size()) members.resize(grp + 1);
    members[grp].push_back(v);
  }
  std::erase_if(members, [](const std::vector<NodeId>& m) { return m.empty(); });
  if (members.empty()) throw std::invalid_argument("synthesis: empty group set");
  return members;
}

}  // namespace detail

/// Strategy 1: each new AI node connects to max(1, Poisson(lambda)) targets
/// drawn uniformly from the nodes existing at its insertion time.
inline HasnGraph insert_ai_random(const HasnGraph& g, const GenStrategyConfig& cfg) {
  cfg.validate();
  const std::uint32_t count = detail::ai_nodes_to_insert(g, cfg.ai_ratio);
  HasnGraph out = g;
  Rng rng(derive_substream(cfg.seed, "synthesis"));
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::vector<NodeId> existing = out.node_ids();
    const NodeId ai = out.add_node(NodeKind::AI);
    const std::uint64_t wanted =
        std::min<std::uint64_t>(std::max<std::uint32_t>(1, rng.poisson(cfg.lambda)),
                                existing.size());
    for (std::uint64_t pick : rng.sample_without_replacement(existing.size(), wanted)) {
      out.add_edge(ai, existing[pick], 1.0);
    }
  }
  return out;
}

/// Strategy 2: each new AI links every existing node v independently with
/// probability a * exp(-r * (deg(v) - 1)); an AI that ends up with no link
/// gets one uniformly random link so no AI is born isolated.
inline HasnGraph insert_ai_inverse_degree(const HasnGraph& g, const GenStrategyConfig& cfg) {
  cfg.validate();
  const std::uint32_t count = detail::ai_nodes_to_insert(g, cfg.ai_ratio);
  HasnGraph out = g;
  Rng rng(derive_substream(cfg.seed, "synthesis"));
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::vector<NodeId> existing = out.node_ids();
    const NodeId ai = out.add_node(NodeKind::AI);
    bool linked = false;
    for (NodeId v : existing) {
      const double p = cfg.a * std::exp(-cfg.r * (out.degree(v) - 1.0));
      if (rng.bernoulli(p)) {
        out.add_edge(ai, v, 1.0);
        linked = true;
      }
    }
    if (!linked) out.add_edge(ai, existing[rng.uniform_below(existing.size())], 1.0);
  }
  return out;
}

/// Strategy 3: half of the AIs (rounded down) are introverted and link each
/// member of a random home group with probability x; the rest are extroverted
/// and link each human outside the home group with probability y. Zero-link
/// AIs get one forced link inside (introvert) or outside (extrovert) the home
/// group.
inline HasnGraph insert_ai_intro_extro(const HasnGraph& g, const GenStrategyConfig& cfg,
                                       const GroupAssignment& groups) {
  cfg.validate();
  const std::uint32_t count = detail::ai_nodes_to_insert(g, cfg.ai_ratio);
  const std::vector<std::vector<NodeId>> members = detail::group_members(g, groups);
  HasnGraph out = g;
  Rng rng(derive_substream(cfg.seed, "synthesis"));
  const std::uint32_t introverts = count / 2;
  std::vector<NodeId> outside;
  for (std::uint32_t i = 0; i < count; ++i) {
    const NodeId ai = out.add_node(NodeKind::AI);
    const std::size_t home = rng.uniform_below(members.size());
    const bool introvert = i < introverts;
    bool linked = false;
    if (introvert) {
      for (NodeId v : members[home]) {
        if (rng.bernoulli(cfg.x)) {
          out.add_edge(ai, v, 1.0);
          linked = true;
        }
      }
      if (!linked) {
        out.add_edge(ai, members[home][rng.uniform_below(members[home].size())], 1.0);
      }
    } else {
      outside.clear();
      for (std::size_t grp = 0; grp < members.size(); ++grp) {
        if (grp == home) continue;
        outside.insert(outside.end(), members[grp].begin(), members[grp].end());
      }
      for (NodeId v : outside) {
        if (rng.bernoulli(cfg.y)) {
          out.add_edge(ai, v, 1.0);
          linked = true;
        }
      }
      if (!linked) {
        // A single group leaves an extrovert nowhere to go; fall back to home.
        const std::vector<NodeId>& pool = outside.empty() ? members[home] : outside;
        out.add_edge(ai, pool[rng.uniform_below(pool.size())], 1.0);
      }
    }
  }
  return out;
}

/// Strategy 4: every AI links its random home group's members with
/// probability x and all other humans with probability y. A zero-link AI gets
/// one uniformly random human link.
inline HasnGraph insert_ai_dual(const HasnGraph& g, const GenStrategyConfig& cfg,
                                const GroupAssignment& groups) {
  cfg.validate();
  const std::uint32_t count = detail::ai_nodes_to_insert(g, cfg.ai_ratio);
  const std::vector<std::vector<NodeId>> members = detail::group_members(g, groups);
  std::vector<NodeId> humans;
  for (const auto& m : members) humans.insert(humans.end(), m.begin(), m.end());
  std::sort(humans.begin(), humans.end());
  HasnGraph out = g;
  Rng rng(derive_substream(cfg.seed, "synthesis"));
  for (std::uint32_t i = 0; i < count; ++i) {
    const NodeId ai = out.add_node(NodeKind::AI);
    const std::size_t home = rng.uniform_below(members.size());
    bool linked = false;
    for (std::size_t grp = 0; grp < members.size(); ++grp) {
      const double p = grp == home ? cfg.x : cfg.y;
      for (NodeId v : members[grp]) {
        if (rng.bernoulli(p)) {
          out.add_edge(ai, v, 1.0);
          linked = true;
        }
      }
    }
    if (!linked) out.add_edge(ai, humans[rng.uniform_below(humans.size())], 1.0);
  }
  return out;
}

inline HasnGraph insert_ai(const HasnGraph& g, const GenStrategyConfig& cfg,
                           const GroupAssignment* groups = nullptr) {
  switch (cfg.strategy) {
    case GenStrategy::RandomInsertion:
      return insert_ai_random(g, cfg);
    case GenStrategy::InverseDegree:
      return insert_ai_inverse_degree(g, cfg);
    case GenStrategy::IntroExtro:
    case GenStrategy::DualPersonality:
      if (groups == nullptr) {
        throw std::invalid_argument("synthesis: strategy needs a group assignment");
      }
      return cfg.strategy == GenStrategy::IntroExtro ? insert_ai_intro_extro(g, cfg, *groups)
                                                     : insert_ai_dual(g, cfg, *groups);
  }
  throw std::invalid_argument("synthesis: unknown strategy");
}

/// Jaccard-similarity link prediction: per round, scores every non-adjacent
/// pair with at least one common neighbor by |N(a) & N(b)| / |N(a) | N(b)|
/// and adds unit-weight edges for the top `pairs_per_round` pairs (ties by
/// ascending id pair). Deterministic; no RNG involved.
inline HasnGraph evolve_jaccard(const HasnGraph& g, const EvolutionConfig& cfg) {
  HasnGraph out = g;
  for (std::uint32_t round = 0; round < cfg.rounds; ++round) {
    if (cfg.pairs_per_round == 0) break;
    std::unordered_map<std::uint64_t, std::uint32_t> common;
    common.reserve(out.edge_count() * 4);
    for (NodeId u = 0; u < out.capacity(); ++u) {
      if (!out.contains(u)) continue;
      const auto& nbrs = out.neighbors(u);
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
          NodeId a = nbrs[i].to;
          NodeId b = nbrs[j].to;
          if (a == u || b == u || a == b) continue;
          if (a > b) std::swap(a, b);
          ++common[(static_cast<std::uint64_t>(a) << 32) | b];
        }
      }
    }
    struct Candidate {
      double sim;
      NodeId a;
      NodeId b;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(common.size());
    for (const auto& [key, cnt] : common) {
      const NodeId a = static_cast<NodeId>(key >> 32);
      const NodeId b = static_cast<NodeId>(key & 0xffffffffu);
      if (out.has_edge(a, b)) continue;
      const double uni = static_cast<double>(out.neighbor_count(a)) +
                         static_cast<double>(out.neighbor_count(b)) - static_cast<double>(cnt);
      candidates.push_back({static_cast<double>(cnt) / uni, a, b});
    }
    const std::size_t take = std::min<std::size_t>(cfg.pairs_per_round, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end(),
                      [](const Candidate& l, const Candidate& r) {
                        if (l.sim != r.sim) return l.sim > r.sim;
                        if (l.a != r.a) return l.a < r.a;
                        return l.b < r.b;
                      });
    for (std::size_t i = 0; i < take; ++i) {
      out.add_edge(candidates[i].a, candidates[i].b, 1.0);
    }
    if (take == 0) break;  // candidates exhausted, later rounds change nothing
  }
  return out;
}

/// Uniform random simple graph with exactly n all-human nodes and m edges.
inline HasnGraph gen_er_graph(std::uint32_t n, std::uint64_t m, std::uint64_t seed) {
  const std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (m > max_edges) {
    throw std::invalid_argument("gen_er_graph: more edges requested than pairs exist");
  }
  HasnGraph g;
  for (std::uint32_t i = 0; i < n; ++i) g.add_node(NodeKind::Human);
  Rng rng(derive_substream(seed, "synthesis/er"));
  std::unordered_set<std::uint64_t> used;
  used.reserve(m * 2);
  while (g.edge_count() < m) {
    NodeId u = static_cast<NodeId>(rng.uniform_below(n));
    NodeId v = static_cast<NodeId>(rng.uniform_below(n));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (used.insert(key).second) g.add_edge(u, v, 1.0);
  }
  return g;
}

/// Random graph with k planted groups of near-equal size: a fraction
/// intra_fraction of the m edges falls inside groups (spread proportionally
/// to the number of member pairs), the rest across groups. Used for the
/// bundled benchmark network and the scaling benchmark.
inline std::pair<HasnGraph, GroupAssignment> gen_planted_graph(std::uint32_t n, std::uint64_t m,
                                                               std::uint32_t k,
                                                               double intra_fraction,
                                                               std::uint64_t seed) {
  if (k == 0 || k > n) throw std::invalid_argument("gen_planted_graph: bad group count");
  if (!(intra_fraction >= 0.0 && intra_fraction <= 1.0)) {
    throw std::invalid_argument("gen_planted_graph: intra_fraction must be in [0, 1]");
  }
  GroupAssignment groups;
  groups.group_of.assign(n, GroupAssignment::kNoGroup);
  groups.group_count = k;
  groups.source = GroupAssignment::Source::GroundTruthLabels;
  std::vector<std::vector<NodeId>> members(k);
  {
    const std::uint32_t base = n / k;
    const std::uint32_t extra = n % k;
    NodeId next = 0;
    for (std::uint32_t grp = 0; grp < k; ++grp) {
      const std::uint32_t size = base + (grp < extra ? 1 : 0);
      for (std::uint32_t i = 0; i < size; ++i) {
        members[grp].push_back(next);
        groups.group_of[next] = grp;
        ++next;
      }
    }
  }
  std::vector<std::uint64_t> pair_capacity(k);
  std::uint64_t total_capacity = 0;
  for (std::uint32_t grp = 0; grp < k; ++grp) {
    const std::uint64_t s = members[grp].size();
    pair_capacity[grp] = s * (s - 1) / 2;
    total_capacity += pair_capacity[grp];
  }
  std::uint64_t m_intra = static_cast<std::uint64_t>(std::llround(
      intra_fraction * static_cast<double>(m)));
  m_intra = std::min(m_intra, total_capacity);
  if (k == 1) m_intra = m;
  const std::uint64_t total_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (m > total_pairs) {
    throw std::invalid_argument("gen_planted_graph: more edges requested than pairs exist");
  }
  if (m_intra > total_capacity || m - m_intra > total_pairs - total_capacity) {
    throw std::invalid_argument("gen_planted_graph: edge split exceeds pair capacity");
  }

  if (m_intra + k < n) {
    throw std::invalid_argument("gen_planted_graph: too few intra edges to avoid isolated nodes");
  }

  HasnGraph g;
  for (std::uint32_t i = 0; i < n; ++i) g.add_node(NodeKind::Human);
  Rng rng(derive_substream(seed, "synthesis/planted"));
  std::unordered_set<std::uint64_t> used;
  used.reserve(m * 2);
  std::vector<std::uint64_t> cumulative(k);
  std::partial_sum(pair_capacity.begin(), pair_capacity.end(), cumulative.begin());

  // Random recursive tree inside each group so no node is born isolated.
  std::uint64_t placed = 0;
  for (std::uint32_t grp = 0; grp < k; ++grp) {
    std::vector<NodeId> order = members[grp];
    rng.shuffle(order);
    for (std::size_t i = 1; i < order.size(); ++i) {
      NodeId u = order[i];
      NodeId v = order[rng.uniform_below(i)];
      if (u > v) std::swap(u, v);
      used.insert((static_cast<std::uint64_t>(u) << 32) | v);
      g.add_edge(u, v, 1.0);
      ++placed;
    }
  }
  while (placed < m_intra) {
    const std::uint64_t ticket = rng.uniform_below(total_capacity);
    const std::uint32_t grp = static_cast<std::uint32_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), ticket) - cumulative.begin());
    const auto& mem = members[grp];
    NodeId u = mem[rng.uniform_below(mem.size())];
    NodeId v = mem[rng.uniform_below(mem.size())];
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (!used.insert(key).second) continue;
    g.add_edge(u, v, 1.0);
    ++placed;
  }
  while (placed < m) {
    NodeId u = static_cast<NodeId>(rng.uniform_below(n));
    NodeId v = static_cast<NodeId>(rng.uniform_below(n));
    if (u == v || groups.group_of[u] == groups.group_of[v]) continue;
    if (u > v) std::swap(u, v);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (!used.insert(key).second) continue;
    g.add_edge(u, v, 1.0);
    ++placed;
  }
  return {std::move(g), std::move(groups)};
}

/// Groups over the human nodes taken from an existing partition of g.
inline GroupAssignment group_assignment_from_partition(const HasnGraph& g, const Partition& p) {
  GroupAssignment out;
  out.source = GroupAssignment::Source::LouvainOnHumanGraph;
  out.group_of.assign(g.capacity(), GroupAssignment::kNoGroup);
  std::uint32_t max_group = 0;
  for (NodeId v = 0; v < g.capacity(); ++v) {
    if (!g.contains(v) || g.kind(v) != NodeKind::Human) continue;
    const std::uint32_t c = p.community_of(v);
    if (c == Partition::kNone) {
      throw std::invalid_argument("group assignment: partition does not cover node " +
                                  std::to_string(v));
    }
    out.group_of[v] = c;
    max_group = std::max(max_group, c);
  }
  out.group_count = g.human_count() > 0 ? max_group + 1 : 0;
  return out;
}

}  // namespace metacd
