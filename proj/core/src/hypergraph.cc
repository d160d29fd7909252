#include "gscp/hypergraph.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gscp/error.h"

namespace gscp {

namespace {

constexpr int kMaxStationarySweeps = 200'000;
constexpr double kStationaryTolerance = 1e-14;
constexpr int kLanczosSteps = 256;

struct WeightedArc {
  int target;
  double prob;
};

// A Markov chain over `states` that factors through an intermediate layer:
// s -> i with probability first[s][.], then i -> t with second[i][.].
// A state with no outgoing first-stage arcs keeps a self-loop.
struct TwoStageChain {
  int states = 0;
  std::vector<std::vector<WeightedArc>> first;
  std::vector<std::vector<WeightedArc>> second;

  // y = x P
  void left_multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    Eigen::VectorXd mid = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(second.size()));
    y.setZero(states);
    for (int s = 0; s < states; ++s) {
      if (first[s].empty()) {
        y[s] += x[s];
        continue;
      }
      for (const auto& arc : first[s]) mid[arc.target] += x[s] * arc.prob;
    }
    for (std::size_t i = 0; i < second.size(); ++i) {
      if (mid[i] == 0.0) continue;
      for (const auto& arc : second[i]) y[arc.target] += mid[i] * arc.prob;
    }
  }

  // y = P x
  void right_multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    Eigen::VectorXd mid(static_cast<Eigen::Index>(second.size()));
    for (std::size_t i = 0; i < second.size(); ++i) {
      double acc = 0.0;
      for (const auto& arc : second[i]) acc += arc.prob * x[arc.target];
      mid[i] = acc;
    }
    y.resize(states);
    for (int s = 0; s < states; ++s) {
      if (first[s].empty()) {
        y[s] = x[s];
        continue;
      }
      double acc = 0.0;
      for (const auto& arc : first[s]) acc += arc.prob * mid[arc.target];
      y[s] = acc;
    }
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(states, states);
    for (int s = 0; s < states; ++s) {
      if (first[s].empty()) {
        p(s, s) = 1.0;
        continue;
      }
      for (const auto& a : first[s]) {
        for (const auto& b : second[a.target]) p(s, b.target) += a.prob * b.prob;
      }
    }
    return p;
  }

  Eigen::VectorXd stationary() const {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(states, 1.0 / states);
    Eigen::VectorXd y(states);
    for (int sweep = 0; sweep < kMaxStationarySweeps; ++sweep) {
      left_multiply(x, y);
      y /= y.sum();
      const double diff = (y - x).lpNorm<1>();
      x.swap(y);
      if (diff < kStationaryTolerance) break;
    }
    return x;
  }
};

// Probabilities of leaving vertex v through each of its hyperedges.
std::vector<WeightedArc> vertex_exits(const Hypergraph& hg, int v) {
  const auto& inc = hg.incident(v);
  std::vector<WeightedArc> arcs;
  arcs.reserve(inc.size());
  double total = 0.0;
  for (int e : inc) total += hg.edge_weight(e);
  for (int e : inc) {
    const double p = total > 0.0 ? hg.edge_weight(e) / total
                                 : 1.0 / static_cast<double>(inc.size());
    arcs.push_back({e, p});
  }
  return arcs;
}

std::vector<WeightedArc> edge_members(const Hypergraph& hg, int e) {
  std::vector<WeightedArc> arcs;
  double total = 0.0;
  for (int v : hg.edge(e)) total += hg.vertex_weight(e, v);
  for (int v : hg.edge(e)) arcs.push_back({v, hg.vertex_weight(e, v) / total});
  return arcs;
}

TwoStageChain vertex_chain(const Hypergraph& hg) {
  TwoStageChain chain;
  chain.states = hg.num_vertices();
  chain.first.resize(chain.states);
  for (int v = 0; v < chain.states; ++v) chain.first[v] = vertex_exits(hg, v);
  chain.second.resize(hg.num_edges());
  for (int e = 0; e < hg.num_edges(); ++e) {
    for (int w : hg.edge(e)) chain.second[e].push_back({w, hg.vertex_weight(e, w)});
  }
  return chain;
}

TwoStageChain edge_chain(const Hypergraph& hg) {
  TwoStageChain chain;
  chain.states = hg.num_edges();
  chain.first.resize(chain.states);
  for (int e = 0; e < chain.states; ++e) chain.first[e] = edge_members(hg, e);
  chain.second.resize(hg.num_vertices());
  for (int v = 0; v < hg.num_vertices(); ++v) chain.second[v] = vertex_exits(hg, v);
  return chain;
}

Eigen::MatrixXd dense_laplacian(const Eigen::MatrixXd& p, const Eigen::VectorXd& phi) {
  const Eigen::VectorXd root = phi.cwiseSqrt();
  const Eigen::VectorXd inv_root = root.cwiseInverse();
  const Eigen::MatrixXd s = root.asDiagonal() * p * inv_root.asDiagonal();
  Eigen::MatrixXd l = -0.5 * (s + s.transpose());
  l.diagonal().array() += 1.0;
  return l;
}

std::vector<double> dense_eigenvalues(const Eigen::MatrixXd& l) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNonConvergence, "symmetric eigensolver failed");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

// Lanczos with full reorthogonalization on the matrix-free Laplacian. Keeps
// the kLanczosExtremal/2 smallest and largest Ritz values and pads the
// middle of the spectrum with their median.
std::vector<double> lanczos_eigenvalues(const TwoStageChain& chain,
                                        const Eigen::VectorXd& phi) {
  const int n = chain.states;
  const Eigen::VectorXd root = phi.cwiseSqrt();
  const Eigen::VectorXd inv_root = root.cwiseInverse();
  auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    Eigen::VectorXd a, b;
    chain.right_multiply(inv_root.cwiseProduct(x), a);
    chain.left_multiply(root.cwiseProduct(x), b);
    out = x - 0.5 * (root.cwiseProduct(a) + inv_root.cwiseProduct(b));
  };

  const int steps = std::min(n, kLanczosSteps);
  Eigen::MatrixXd basis(n, steps);
  std::vector<double> alpha, beta;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q[i] = normal(rng);
  q.normalize();
  Eigen::VectorXd w;
  for (int k = 0; k < steps; ++k) {
    basis.col(k) = q;
    apply(q, w);
    const double a = q.dot(w);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
    }
    const double b = w.norm();
    if (k + 1 == steps || b < 1e-12) break;
    beta.push_back(b);
    q = w / b;
  }
  const int t = static_cast<int>(alpha.size());
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(t, t);
  for (int k = 0; k < t; ++k) {
    tri(k, k) = alpha[k];
    if (k + 1 < t) tri(k, k + 1) = tri(k + 1, k) = beta[k];
  }
  std::vector<double> ritz = dense_eigenvalues(tri);
  const int half = kLanczosExtremal / 2;
  std::vector<double> kept;
  if (static_cast<int>(ritz.size()) <= kLanczosExtremal) {
    kept = ritz;
  } else {
    kept.assign(ritz.begin(), ritz.begin() + half);
    kept.insert(kept.end(), ritz.end() - half, ritz.end());
  }
  std::vector<double> sorted = kept;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  std::vector<double> out;
  out.reserve(n);
  const int low = std::min<int>(half, static_cast<int>(kept.size()));
  out.insert(out.end(), kept.begin(), kept.begin() + low);
  const int high = static_cast<int>(kept.size()) - low;
  out.insert(out.end(), static_cast<std::size_t>(n - low - high), median);
  out.insert(out.end(), kept.end() - high, kept.end());
  std::sort(out.begin(), out.end());
  return out;
}

struct ChainSpectrum {
  Eigen::MatrixXd transition;
  Eigen::VectorXd stationary;
  Eigen::MatrixXd laplacian;
  std::vector<double> eigenvalues;
  bool approximate = false;
};

ChainSpectrum analyze(const TwoStageChain& chain) {
  ChainSpectrum out;
  out.stationary = chain.stationary();
  if (chain.states <= kDenseSpectrumLimit) {
    out.transition = chain.dense();
    out.laplacian = dense_laplacian(out.transition, out.stationary);
    out.eigenvalues = dense_eigenvalues(out.laplacian);
  } else {
    out.eigenvalues = lanczos_eigenvalues(chain, out.stationary);
    out.approximate = true;
  }
  return out;
}

}  // namespace

Hypergraph::Hypergraph(int num_vertices, std::vector<std::vector<int>> edges,
                       std::vector<double> edge_weights)
    : num_vertices_(num_vertices),
      edges_(std::move(edges)),
      weights_(std::move(edge_weights)),
      incident_(num_vertices) {
  if (weights_.size() != edges_.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one weight per hyperedge required");
  }
  for (int e = 0; e < num_edges(); ++e) {
    if (edges_[e].empty()) {
      throw Error(ErrorCode::kEmptyColumn, "hyperedge " + std::to_string(e) + " is empty");
    }
    for (int v : edges_[e]) {
      if (v < 0 || v >= num_vertices_) {
        throw Error(ErrorCode::kIndexOutOfRange, "hyperedge member out of range");
      }
      incident_[v].push_back(e);
    }
  }
}

double Hypergraph::vertex_weight(int e, int /*v*/) const {
  return 1.0 / static_cast<double>(edges_[e].size());
}

Hypergraph Hypergraph::without_edge(int e) const {
  auto edges = edges_;
  auto weights = weights_;
  edges.erase(edges.begin() + e);
  weights.erase(weights.begin() + e);
  return Hypergraph(num_vertices_, std::move(edges), std::move(weights));
}

Hypergraph build_hypergraph(const ScpInstance& inst) {
  std::vector<double> weights;
  weights.reserve(inst.num_cols());
  for (Cost c : inst.costs()) weights.push_back(c.value());
  return Hypergraph(inst.num_rows(), inst.cols(), std::move(weights));
}

HypergraphSpectra hypergraph_spectra(const Hypergraph& hg) {
  HypergraphSpectra out;
  ChainSpectrum v = analyze(vertex_chain(hg));
  out.vertex_transition = std::move(v.transition);
  out.vertex_stationary = std::move(v.stationary);
  out.vertex_laplacian = std::move(v.laplacian);
  out.vertex_eigenvalues = std::move(v.eigenvalues);
  out.vertex_approximate = v.approximate;
  if (hg.num_edges() > 0) {
    ChainSpectrum e = analyze(edge_chain(hg));
    out.edge_transition = std::move(e.transition);
    out.edge_stationary = std::move(e.stationary);
    out.edge_laplacian = std::move(e.laplacian);
    out.edge_eigenvalues = std::move(e.eigenvalues);
    out.edge_approximate = e.approximate;
  }
  return out;
}

double algebraic_connectivity(const Hypergraph& hg) {
  if (hg.num_vertices() < 2) return 0.0;
  const ChainSpectrum v = analyze(vertex_chain(hg));
  return v.eigenvalues[1];
}

double edge_contribution(const Hypergraph& hg, int e) {
  if (e < 0 || e >= hg.num_edges()) {
    throw Error(ErrorCode::kIndexOutOfRange, "no hyperedge " + std::to_string(e));
  }
  return algebraic_connectivity(hg) - algebraic_connectivity(hg.without_edge(e));
}

}  // namespace gscp
