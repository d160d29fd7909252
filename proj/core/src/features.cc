#include "gscp/features.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "gscp/hypergraph.h"

namespace gscp {

std::vector<double> pair_spectrum(const std::vector<double>& node_degrees,
                                  const std::vector<double>& ascending_eigenvalues) {
  std::vector<int> order(node_degrees.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return node_degrees[a] > node_degrees[b];
  });
  std::vector<double> out(node_degrees.size(), 0.0);
  for (std::size_t k = 0; k < order.size() && k < ascending_eigenvalues.size(); ++k) {
    out[order[k]] = ascending_eigenvalues[k];
  }
  return out;
}

std::optional<Layer> feature_domain(int feature) {
  switch (feature) {
    case kCostFeature:
    case kHyperEdgeFeature:
      return Layer::kColumn;
    case kHyperVertexFeature:
      return Layer::kElement;
    default:
      return std::nullopt;
  }
}

void normalize_min_max(FeatureMatrix& features, const std::vector<Layer>& layers) {
  for (int f = 0; f < kFeatureCount; ++f) {
    const std::optional<Layer> domain = feature_domain(f);
    auto in_domain = [&](int v) { return !domain || layers[v] == *domain; };
    double lo = INFINITY;
    double hi = -INFINITY;
    for (int v = 0; v < features.rows; ++v) {
      if (!in_domain(v)) continue;
      lo = std::min(lo, features.at(v, f));
      hi = std::max(hi, features.at(v, f));
    }
    const double span = hi - lo;
    for (int v = 0; v < features.rows; ++v) {
      double& x = features.at(v, f);
      x = in_domain(v) && span > 0.0 ? std::clamp((x - lo) / span, 0.0, 1.0) : 0.0;
    }
  }
}

FeaturizedInstance assemble_features(const ScpInstance& inst,
                                     const FeatureOptions& options) {
  const int m = inst.num_rows();
  const int n = inst.num_cols();
  FeaturizedInstance out;
  out.graph = build_tripartite(inst);
  FeatureMatrix& fm = out.features;
  fm.rows = out.graph.node_count();
  fm.values.assign(static_cast<std::size_t>(fm.rows) * kFeatureCount, 0.0);

  for (int i = 0; i < m; ++i) fm.at(element_node(i), kCoverFeature) = 1.0;
  for (int j = 0; j < n; ++j) {
    const int v = column_node(inst, j);
    fm.at(v, kCostFeature) = inst.cost(j).value();
    fm.at(v, kCoverFeature) = static_cast<double>(inst.col(j).size());
  }

  const std::vector<double> rwr = rwr_scores(out.graph, options.restart_p);
  for (int v = 1; v < fm.rows; ++v) fm.at(v, kRwrFeature) = rwr[v];

  const DegreeFeatures deg = degree_features(out.graph);
  for (int v = 0; v < fm.rows; ++v) {
    fm.at(v, kDegreeFeature) = deg.degree[v];
    fm.at(v, kAvgNeighborDegreeFeature) = deg.avg_neighbor_degree[v];
  }

  const HypergraphSpectra spectra = hypergraph_spectra(build_hypergraph(inst));
  std::vector<double> element_degree(m), column_degree(n);
  for (int i = 0; i < m; ++i) element_degree[i] = deg.degree[element_node(i)];
  for (int j = 0; j < n; ++j) column_degree[j] = deg.degree[column_node(inst, j)];
  const auto vertex_feature = pair_spectrum(element_degree, spectra.vertex_eigenvalues);
  const auto edge_feature = pair_spectrum(column_degree, spectra.edge_eigenvalues);
  for (int i = 0; i < m; ++i) fm.at(element_node(i), kHyperVertexFeature) = vertex_feature[i];
  for (int j = 0; j < n; ++j) fm.at(column_node(inst, j), kHyperEdgeFeature) = edge_feature[j];

  if (options.normalize) normalize_min_max(fm, out.graph.layers());
  return out;
}

std::string_view layer_name(Layer layer) {
  switch (layer) {
    case Layer::kUniverse: return "universe";
    case Layer::kElement: return "element";
    case Layer::kColumn: return "column";
  }
  return "unknown";
}

std::string features_to_csv(const FeaturizedInstance& featurized) {
  std::ostringstream out;
  out.precision(17);
  out << "node_id,layer";
  for (auto name : kFeatureNames) out << ',' << name;
  out << '\n';
  const auto& fm = featurized.features;
  for (int v = 0; v < fm.rows; ++v) {
    out << v << ',' << layer_name(featurized.graph.layer(v));
    for (int f = 0; f < kFeatureCount; ++f) out << ',' << fm.at(v, f);
    out << '\n';
  }
  return out.str();
}

}  // namespace gscp
