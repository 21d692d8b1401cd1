#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "metacd/cusa.hpp"
#include "metacd/graph.hpp"
#include "metacd/metrics.hpp"
#include "metacd/rng.hpp"
#include "metacd/synthesis.hpp"

namespace metacd {

inline constexpr const char* kToolVersion = "1.0.0";

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string digest_file(const std::string& path) {
  const std::uint64_t h = fnv1a64(read_file(path));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// Edge-list ingestion

struct LoadedNetwork {
  HasnGraph graph;
  std::vector<std::string> node_names;  // dense id -> token from the file
  GroupAssignment groups;               // from the labels file when present
  bool has_labels = false;
  std::uint32_t dropped_duplicates = 0;
  std::uint32_t dropped_self_loops = 0;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline bool skippable(const std::string& line) {
  for (char c : line) {
    if (c == '#' || c == '%') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;  // blank
}

}  // namespace detail

/// Loads a whitespace-separated `u v` edge list as an undirected simple
/// graph of human nodes with unit weights. Node tokens are mapped to dense
/// ids in order of first appearance; duplicate edges and self-loops are
/// dropped and counted. The optional labels file holds `node class` lines and
/// becomes the ground-truth group assignment.
inline LoadedNetwork load_edge_list(const std::string& path, const std::string& labels_path = "") {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  LoadedNetwork net;
  std::unordered_map<std::string, NodeId> id_of;
  std::vector<EdgeSpec> edges;
  std::unordered_map<std::uint64_t, bool> seen;
  const auto intern = [&](const std::string& tok) {
    auto [it, inserted] = id_of.try_emplace(tok, static_cast<NodeId>(net.node_names.size()));
    if (inserted) net.node_names.push_back(tok);
    return it->second;
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skippable(line)) continue;
    const std::vector<std::string> toks = detail::split_ws(line);
    if (toks.size() != 2) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected two whitespace-separated node tokens");
    }
    NodeId u = intern(toks[0]);
    NodeId v = intern(toks[1]);
    if (u == v) {
      ++net.dropped_self_loops;
      continue;
    }
    if (u > v) std::swap(u, v);
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (seen.count(key)) {
      ++net.dropped_duplicates;
      continue;
    }
    seen[key] = true;
    edges.push_back({u, v, 1.0});
  }
  if (net.node_names.empty()) throw std::runtime_error(path + ": no nodes found");
  net.graph =
      HasnGraph::build(std::vector<NodeKind>(net.node_names.size(), NodeKind::Human), edges);

  if (!labels_path.empty()) {
    std::ifstream lin(labels_path);
    if (!lin) throw std::runtime_error("cannot open file: " + labels_path);
    net.groups.group_of.assign(net.graph.capacity(), GroupAssignment::kNoGroup);
    net.groups.source = GroupAssignment::Source::GroundTruthLabels;
    std::unordered_map<std::string, std::uint32_t> class_of;
    std::size_t lno = 0;
    while (std::getline(lin, line)) {
      ++lno;
      if (detail::skippable(line)) continue;
      const std::vector<std::string> toks = detail::split_ws(line);
      if (toks.size() != 2) {
        throw std::runtime_error(labels_path + ":" + std::to_string(lno) +
                                 ": expected `node class`");
      }
      const auto node_it = id_of.find(toks[0]);
      if (node_it == id_of.end()) continue;  // labels may cover more nodes than the graph
      const auto [cls_it, fresh] =
          class_of.try_emplace(toks[1], static_cast<std::uint32_t>(class_of.size()));
      net.groups.group_of[node_it->second] = cls_it->second;
    }
    net.groups.group_count = static_cast<std::uint32_t>(class_of.size());
    net.has_labels = true;
  }
  return net;
}

// ---------------------------------------------------------------------------
// HASN serialization (v1): header, node lines, edge lines with u < v.

inline void save_hasn(const HasnGraph& g, const std::string& path) {
  std::ostringstream out;
  out << "#hasn v1\n";
  for (NodeId v = 0; v < g.capacity(); ++v) {
    if (!g.contains(v)) {
      throw std::invalid_argument("save_hasn: graphs with removed nodes are not serializable");
    }
    if (g.self_loop(v) > 0.0) {
      throw std::invalid_argument("save_hasn: aggregated graphs are not serializable");
    }
    out << "N " << v << ' ' << (g.kind(v) == NodeKind::Human ? 'H' : 'A') << '\n';
  }
  std::vector<EdgeSpec> edges;
  edges.reserve(g.edge_count());
  g.for_each_edge([&](NodeId u, NodeId v, double w) { edges.push_back({u, v, w}); });
  std::sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (const EdgeSpec& e : edges) {
    out << "E " << e.u << ' ' << e.v << ' ' << format_double(e.weight) << '\n';
  }
  write_file(path, out.str());
}

inline HasnGraph load_hasn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "#hasn v1") {
    throw std::runtime_error(path + ": missing or unsupported #hasn header");
  }
  std::vector<NodeKind> kinds;
  std::vector<EdgeSpec> edges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skippable(line)) continue;
    const std::vector<std::string> toks = detail::split_ws(line);
    const auto fail = [&](const std::string& why) -> std::runtime_error {
      return std::runtime_error(path + ":" + std::to_string(line_no) + ": " + why);
    };
    if (toks[0] == "N" && toks.size() == 3) {
      const unsigned long id = std::stoul(toks[1]);
      if (id != kinds.size()) throw fail("node ids must be dense and ascending");
      if (toks[2] != "H" && toks[2] != "A") throw fail("node kind must be H or A");
      kinds.push_back(toks[2] == "H" ? NodeKind::Human : NodeKind::AI);
    } else if (toks[0] == "E" && toks.size() == 4) {
      const unsigned long u = std::stoul(toks[1]);
      const unsigned long v = std::stoul(toks[2]);
      if (u >= v) throw fail("edges must satisfy u < v");
      edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), std::stod(toks[3])});
    } else {
      throw fail("expected an N or E record");
    }
  }
  if (kinds.empty()) throw std::runtime_error(path + ": no nodes found");
  return HasnGraph::build(kinds, edges);
}

// ---------------------------------------------------------------------------
// Partition files

struct PartitionFile {
  std::string method;
  std::uint64_t seed = 0;
  std::uint32_t community_count = 0;
  std::vector<std::int64_t> communities;  // per dense node id; -1 where not covered
  std::vector<NodeId> removed_ai;
  std::vector<NodeId> retained_ai;

  /// Reconstructs a Partition against the graph the communities refer to
  /// (the input HASN minus removed_ai).
  Partition to_partition(const HasnGraph& g) const {
    if (communities.size() != g.capacity()) {
      throw std::invalid_argument("partition file does not match the graph's node count");
    }
    std::vector<std::uint32_t> assignment(communities.size(), Partition::kNone);
    for (std::size_t v = 0; v < communities.size(); ++v) {
      if (communities[v] >= 0) assignment[v] = static_cast<std::uint32_t>(communities[v]);
    }
    return Partition::from_assignment(g, assignment);
  }
};

inline PartitionFile make_partition_file(const HasnGraph& graph, const Partition& p,
                                         std::string method, std::uint64_t seed,
                                         std::vector<NodeId> removed,
                                         std::vector<NodeId> retained) {
  PartitionFile f;
  f.method = std::move(method);
  f.seed = seed;
  Partition norm = Partition::from_assignment(graph, p.assignment());
  norm.normalize();
  f.community_count = norm.slot_count();
  f.communities.assign(graph.capacity(), -1);
  for (NodeId v = 0; v < graph.capacity(); ++v) {
    if (norm.community_of(v) != Partition::kNone) f.communities[v] = norm.community_of(v);
  }
  f.removed_ai = std::move(removed);
  f.retained_ai = std::move(retained);
  return f;
}

inline void save_partition(const PartitionFile& f, const std::string& path) {
  nlohmann::json j;
  j["format"] = "metacd-partition-v1";
  j["method"] = f.method;
  j["seed"] = f.seed;
  j["community_count"] = f.community_count;
  j["communities"] = f.communities;
  j["removed_ai"] = f.removed_ai;
  j["retained_ai"] = f.retained_ai;
  write_file(path, j.dump(2) + "\n");
}

inline PartitionFile load_partition(const std::string& path) {
  const nlohmann::json j = nlohmann::json::parse(read_file(path));
  if (!j.contains("format") || j["format"] != "metacd-partition-v1") {
    throw std::runtime_error(path + ": not a metacd partition file");
  }
  PartitionFile f;
  f.method = j.value("method", "");
  f.seed = j.value("seed", 0ull);
  f.community_count = j.at("community_count").get<std::uint32_t>();
  f.communities = j.at("communities").get<std::vector<std::int64_t>>();
  f.removed_ai = j.at("removed_ai").get<std::vector<NodeId>>();
  f.retained_ai = j.at("retained_ai").get<std::vector<NodeId>>();
  return f;
}

// ---------------------------------------------------------------------------
// Reports and traces

inline nlohmann::json report_to_json(const MetricReport& r) {
  nlohmann::json j;
  j["q"] = r.q;
  j["hq"] = r.hq;
  if (r.has_migration) {
    j["hmr"] = r.hmr;
    if (r.adm_infinite) {
      j["adm"] = nullptr;
      j["adm_infinite"] = true;
    } else {
      j["adm"] = r.adm;
      j["adm_infinite"] = false;
    }
  } else {
    j["hmr"] = nullptr;
    j["adm"] = nullptr;
  }
  j["k_communities"] = r.k_communities;
  j["retained_ai"] = r.retained_ai;
  nlohmann::json per = nlohmann::json::array();
  for (const CommunityBreakdown& c : r.per_community) {
    per.push_back({{"size", c.size}, {"humans", c.humans}, {"ais", c.ais}, {"w", c.w}});
  }
  j["per_community"] = per;
  return j;
}

/// One CSV row in the paper's table column order.
inline std::string report_to_csv(const MetricReport& r) {
  std::ostringstream out;
  out << "q,hq,hmr,adm\n";
  out << format_double(r.q) << ',' << format_double(r.hq) << ',';
  if (r.has_migration) {
    out << format_double(r.hmr) << ',' << (r.adm_infinite ? "inf" : format_double(r.adm));
  } else {
    out << ',';
  }
  out << '\n';
  return out.str();
}

inline void save_trace_csv(const std::vector<TraceRow>& trace, const std::string& path) {
  std::ostringstream out;
  out << "iteration,rnode,de,temperature,accepted,hq_current,hq_best\n";
  for (const TraceRow& row : trace) {
    out << row.iteration << ',' << row.proposed << ',' << format_double(row.de) << ','
        << format_double(row.temperature) << ',' << (row.accepted ? 1 : 0) << ','
        << format_double(row.hq_current) << ',' << format_double(row.hq_best) << '\n';
  }
  write_file(path, out.str());
}

// ---------------------------------------------------------------------------
// Run manifests

/// Snapshot of everything a run depends on. Re-running a subcommand with an
/// identical manifest (same config, seed and input digests) reproduces
/// byte-identical partition/trace outputs; the timestamp is informational.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;

  nlohmann::json to_json(bool with_timestamp = true) const {
    nlohmann::json j;
    j["tool"] = "metacd";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    j["inputs"] = input_digests;
    if (with_timestamp) {
      std::time_t now = std::time(nullptr);
      char buf[32];
      std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      j["created"] = buf;
    }
    return j;
  }

  void save(const std::string& path) const { write_file(path, to_json().dump(2) + "\n"); }
};

}  // namespace metacd
