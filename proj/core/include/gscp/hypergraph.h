#ifndef GSCP_HYPERGRAPH_H_
#define GSCP_HYPERGRAPH_H_

#include <vector>

#include <Eigen/Dense>

#include "gscp/instance.h"

namespace gscp {

// Hypergraph with edge-dependent vertex weights: universe elements are
// vertices, columns are hyperedges, the hyperedge weight is the column
// cost and every member v of hyperedge e carries gamma_e(v) = 1 / |e|.
class Hypergraph {
 public:
  Hypergraph(int num_vertices, std::vector<std::vector<int>> edges,
             std::vector<double> edge_weights);

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<int>& edge(int e) const { return edges_[e]; }
  double edge_weight(int e) const { return weights_[e]; }
  double vertex_weight(int e, int v) const;
  // Hyperedges containing vertex v, ascending.
  const std::vector<int>& incident(int v) const { return incident_[v]; }

  // Copy without hyperedge e; all vertices are kept.
  Hypergraph without_edge(int e) const;

 private:
  int num_vertices_;
  std::vector<std::vector<int>> edges_;
  std::vector<double> weights_;
  std::vector<std::vector<int>> incident_;
};

Hypergraph build_hypergraph(const ScpInstance& inst);

struct HypergraphSpectra {
  // Dense matrices are populated only when the chain has at most
  // kDenseSpectrumLimit states; above that they are left empty and the
  // eigenvalues come from the Lanczos fallback.
  Eigen::MatrixXd vertex_transition;  // P_V, m x m
  Eigen::MatrixXd edge_transition;    // P_E, n x n
  Eigen::VectorXd vertex_stationary;  // Phi_V
  Eigen::VectorXd edge_stationary;    // Phi_E
  Eigen::MatrixXd vertex_laplacian;   // L_V
  Eigen::MatrixXd edge_laplacian;     // L_E
  std::vector<double> vertex_eigenvalues;  // ascending, m values
  std::vector<double> edge_eigenvalues;    // ascending, n values
  bool vertex_approximate = false;
  bool edge_approximate = false;
};

inline constexpr int kDenseSpectrumLimit = 4000;
inline constexpr int kLanczosExtremal = 64;

// Transition rules:
//   P_V(v -> w) = sum_{e ∋ v} [w(e) / sum_{f ∋ v} w(f)] * gamma_e(w)
//   P_E(e -> f) = sum_{v ∈ e} [gamma_e(v) / sum_{u ∈ e} gamma_e(u)]
//                 * [w(f) 1(v ∈ f) / sum_{g ∋ v} w(g)]
// A vertex in no hyperedge keeps a self-loop; a vertex whose hyperedges all
// weigh 0 picks among them uniformly. Each Laplacian is
//   L = I - (Phi^{1/2} P Phi^{-1/2} + Phi^{-1/2} P^T Phi^{1/2}) / 2
// with Phi the stationary distribution reached by power iteration from the
// uniform vector (per-component stationary laws weighted by component size
// when the chain is reducible).
HypergraphSpectra hypergraph_spectra(const Hypergraph& hg);

// Second-smallest eigenvalue of L_V.
double algebraic_connectivity(const Hypergraph& hg);

// mu(H) - mu(H - e).
double edge_contribution(const Hypergraph& hg, int e);

}  // namespace gscp

#endif  // GSCP_HYPERGRAPH_H_
