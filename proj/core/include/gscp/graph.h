#ifndef GSCP_GRAPH_H_
#define GSCP_GRAPH_H_

#include <span>
#include <utility>
#include <vector>

#include "gscp/instance.h"

namespace gscp {

enum class Layer { kUniverse, kElement, kColumn };

// Directed graph with per-node layer tags. Out- and in-adjacency follow
// edge insertion order; the undirected view merges both, deduplicated,
// keeping first occurrence order.
class ScpGraph {
 public:
  ScpGraph() = default;
  // General constructor used for hand-built graphs in tests and tools.
  ScpGraph(std::vector<Layer> layers, std::span<const std::pair<int, int>> edges);

  int node_count() const { return static_cast<int>(layers_.size()); }
  long long edge_count() const { return edge_count_; }
  Layer layer(int v) const { return layers_[v]; }
  const std::vector<Layer>& layers() const { return layers_; }

  std::span<const int> out_neighbors(int v) const { return slice(out_, v); }
  std::span<const int> in_neighbors(int v) const { return slice(in_, v); }
  std::span<const int> neighbors(int v) const { return slice(undirected_, v); }

  // Index of the first node tagged kColumn, and the count of such nodes.
  // Column nodes are contiguous for graphs built from an instance.
  int first_column() const { return first_column_; }
  int column_count() const { return column_count_; }

 private:
  struct Csr {
    std::vector<int> offsets;
    std::vector<int> targets;
  };
  static std::span<const int> slice(const Csr& csr, int v) {
    return {csr.targets.data() + csr.offsets[v],
            static_cast<std::size_t>(csr.offsets[v + 1] - csr.offsets[v])};
  }

  std::vector<Layer> layers_;
  Csr out_;
  Csr in_;
  Csr undirected_;
  long long edge_count_ = 0;
  int first_column_ = 0;
  int column_count_ = 0;
};

// Node 0 is the Universe, nodes 1..m the elements by row index and
// nodes m+1..m+n the columns by column index. Edges: Universe -> element
// for every row, element i -> column j whenever j covers i.
ScpGraph build_tripartite(const ScpInstance& inst);

inline int element_node(int row) { return 1 + row; }
inline int column_node(const ScpInstance& inst, int col) {
  return 1 + inst.num_rows() + col;
}

inline constexpr double kDefaultRestartProbability = 0.45;

// Stationary distribution of the walk that, from any node, jumps back to
// node 0 with probability restart_p and otherwise follows a uniformly
// random out-edge. Sinks jump to node 0 with probability 1. Power
// iteration to 1e-10 in L1; throws Error(kNonConvergence) after 10,000
// sweeps and Error(kInvalidConfig) for restart_p outside (0, 1].
std::vector<double> rwr_scores(const ScpGraph& graph,
                               double restart_p = kDefaultRestartProbability);

struct DegreeFeatures {
  std::vector<double> degree;
  std::vector<double> avg_neighbor_degree;
};

// Degrees on the undirected view; isolated nodes get an average of 0.
DegreeFeatures degree_features(const ScpGraph& graph);

}  // namespace gscp

#endif  // GSCP_GRAPH_H_
