// Regenerates the bundled benchmark network under data/: a planted-partition
// graph matching the node/edge counts of the Cora citation network (2708
// nodes, 5429 edges) plus a ground-truth labels file. Deterministic; the
// committed files come from running this with no arguments.

#include <iostream>
#include <sstream>

#include "metacd/io.hpp"
#include "metacd/synthesis.hpp"

int main(int argc, char** argv) {
  using namespace metacd;
  const std::string dir = argc > 1 ? argv[1] : "data";
  constexpr std::uint32_t kNodes = 2708;
  constexpr std::uint64_t kEdges = 5429;
  constexpr std::uint32_t kGroups = 28;
  constexpr double kIntraFraction = 0.88;
  constexpr std::uint64_t kSeed = 20240501;

  auto [graph, groups] = gen_planted_graph(kNodes, kEdges, kGroups, kIntraFraction, kSeed);

  std::ostringstream edges;
  graph.for_each_edge([&](NodeId u, NodeId v, double) {
    edges << u << ' ' << v << '\n';
  });
  write_file(dir + "/benchmark_2708.edges", edges.str());

  std::ostringstream labels;
  for (NodeId v = 0; v < graph.capacity(); ++v) {
    labels << v << ' ' << groups.group_of[v] << '\n';
  }
  write_file(dir + "/benchmark_2708.labels", labels.str());

  std::cout << "wrote " << dir << "/benchmark_2708.{edges,labels}: " << graph.node_count()
            << " nodes, " << graph.edge_count() << " edges, " << kGroups << " groups\n";
  return 0;
}
