#ifndef GSCP_FEATURES_H_
#define GSCP_FEATURES_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gscp/graph.h"
#include "gscp/instance.h"

namespace gscp {

inline constexpr int kFeatureCount = 7;
inline constexpr const char* kFeatureSchemaVersion = "gscp-features-1";
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "cost", "cover", "rwr", "degree", "avg_neighbor_degree",
    "hyper_vertex", "hyper_edge"};

enum FeatureColumn {
  kCostFeature = 0,
  kCoverFeature,
  kRwrFeature,
  kDegreeFeature,
  kAvgNeighborDegreeFeature,
  kHyperVertexFeature,
  kHyperEdgeFeature,
};

// Row-major node x feature matrix.
struct FeatureMatrix {
  int rows = 0;
  std::vector<double> values;
  std::string schema = kFeatureSchemaVersion;

  double at(int node, int feature) const { return values[node * kFeatureCount + feature]; }
  double& at(int node, int feature) { return values[node * kFeatureCount + feature]; }
};

struct FeatureOptions {
  double restart_p = kDefaultRestartProbability;
  bool normalize = true;
};

// Pairs a sorted spectrum with nodes: nodes ordered by descending degree
// (ascending index on ties) receive eigenvalues in ascending order.
std::vector<double> pair_spectrum(const std::vector<double>& node_degrees,
                                  const std::vector<double>& ascending_eigenvalues);

// Layer a feature is defined on: Column for cost and hyper_edge, Element
// for hyper_vertex, every node otherwise.
std::optional<Layer> feature_domain(int feature);

// Per-feature min-max scaling to [0, 1] over the feature's domain; nodes
// outside the domain and constant features become 0.
void normalize_min_max(FeatureMatrix& features, const std::vector<Layer>& layers);

struct FeaturizedInstance {
  ScpGraph graph;
  FeatureMatrix features;
};

// Builds the tripartite graph and the seven-feature matrix:
//   cost    column cost on Column nodes, 0 elsewhere
//   cover   set size on Column nodes, 1 on elements, 0 on the Universe
//   rwr     random-walk-with-restart score, Universe forced to 0
//   degree, avg_neighbor_degree on the undirected view
//   hyper_vertex  L_V eigenvalues on Element nodes only
//   hyper_edge    L_E eigenvalues on Column nodes only
FeaturizedInstance assemble_features(const ScpInstance& inst,
                                     const FeatureOptions& options = {});

// "node_id,layer,<schema columns>" CSV with a header row.
std::string features_to_csv(const FeaturizedInstance& featurized);

std::string_view layer_name(Layer layer);

}  // namespace gscp

#endif  // GSCP_FEATURES_H_
