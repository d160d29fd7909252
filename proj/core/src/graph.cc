#include "gscp/graph.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "gscp/error.h"

namespace gscp {

namespace {

constexpr int kMaxRwrSweeps = 10'000;
constexpr double kRwrTolerance = 1e-10;

}  // namespace

ScpGraph::ScpGraph(std::vector<Layer> layers,
                   std::span<const std::pair<int, int>> edges)
    : layers_(std::move(layers)), edge_count_(static_cast<long long>(edges.size())) {
  const int n = node_count();
  for (const auto& [from, to] : edges) {
    if (from < 0 || from >= n || to < 0 || to >= n) {
      throw Error(ErrorCode::kIndexOutOfRange, "edge endpoint outside graph");
    }
  }
  auto build = [&](Csr& csr, bool forward, bool backward) {
    csr.offsets.assign(n + 1, 0);
    for (const auto& [from, to] : edges) {
      if (forward) ++csr.offsets[from + 1];
      if (backward) ++csr.offsets[to + 1];
    }
    for (int v = 0; v < n; ++v) csr.offsets[v + 1] += csr.offsets[v];
    csr.targets.assign(csr.offsets[n], 0);
    std::vector<int> fill(csr.offsets.begin(), csr.offsets.end() - 1);
    for (const auto& [from, to] : edges) {
      if (forward) csr.targets[fill[from]++] = to;
      if (backward) csr.targets[fill[to]++] = from;
    }
  };
  build(out_, true, false);
  build(in_, false, true);

  // Undirected view: out-neighbors then in-neighbors, first occurrence wins.
  undirected_.offsets.assign(n + 1, 0);
  std::vector<int> stamp(n, -1);
  for (int v = 0; v < n; ++v) {
    for (auto list : {out_neighbors(v), in_neighbors(v)}) {
      for (int u : list) {
        if (stamp[u] != v) {
          stamp[u] = v;
          undirected_.targets.push_back(u);
        }
      }
    }
    undirected_.offsets[v + 1] = static_cast<int>(undirected_.targets.size());
  }

  first_column_ = n;
  for (int v = 0; v < n; ++v) {
    if (layers_[v] == Layer::kColumn) {
      first_column_ = std::min(first_column_, v);
      ++column_count_;
    }
  }
}

ScpGraph build_tripartite(const ScpInstance& inst) {
  const int m = inst.num_rows();
  const int n = inst.num_cols();
  std::vector<Layer> layers(1 + m + n, Layer::kColumn);
  layers[0] = Layer::kUniverse;
  for (int i = 0; i < m; ++i) layers[element_node(i)] = Layer::kElement;

  std::vector<std::pair<int, int>> edges;
  edges.reserve(m + inst.nonzeros());
  for (int i = 0; i < m; ++i) edges.emplace_back(0, element_node(i));
  for (int i = 0; i < m; ++i) {
    for (int j : inst.row(i)) edges.emplace_back(element_node(i), column_node(inst, j));
  }
  return ScpGraph(std::move(layers), edges);
}

std::vector<double> rwr_scores(const ScpGraph& graph, double restart_p) {
  if (!(restart_p > 0.0 && restart_p <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "restart probability must lie in (0, 1]");
  }
  const int n = graph.node_count();
  std::vector<double> pi(n, 0.0);
  std::vector<double> next(n);
  pi[0] = 1.0;
  for (int sweep = 0; sweep < kMaxRwrSweeps; ++sweep) {
    std::fill(next.begin(), next.end(), 0.0);
    double to_restart = 0.0;
    for (int v = 0; v < n; ++v) {
      const double mass = pi[v];
      if (mass == 0.0) continue;
      const auto out = graph.out_neighbors(v);
      if (out.empty()) {
        to_restart += mass;
        continue;
      }
      to_restart += restart_p * mass;
      const double share = (1.0 - restart_p) * mass / static_cast<double>(out.size());
      for (int u : out) next[u] += share;
    }
    next[0] += to_restart;
    double diff = 0.0;
    for (int v = 0; v < n; ++v) diff += std::abs(next[v] - pi[v]);
    pi.swap(next);
    if (diff < kRwrTolerance) return pi;
  }
  throw Error(ErrorCode::kNonConvergence,
              "random walk with restart did not converge in " +
                  std::to_string(kMaxRwrSweeps) + " sweeps");
}

DegreeFeatures degree_features(const ScpGraph& graph) {
  const int n = graph.node_count();
  DegreeFeatures f;
  f.degree.resize(n);
  f.avg_neighbor_degree.assign(n, 0.0);
  for (int v = 0; v < n; ++v) {
    f.degree[v] = static_cast<double>(graph.neighbors(v).size());
  }
  for (int v = 0; v < n; ++v) {
    const auto nbrs = graph.neighbors(v);
    if (nbrs.empty()) continue;
    double sum = 0.0;
    for (int u : nbrs) sum += f.degree[u];
    f.avg_neighbor_degree[v] = sum / static_cast<double>(nbrs.size());
  }
  return f;
}

}  // namespace gscp
