#include "gscp/neural.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "gscp/error.h"

namespace gscp {

void ModelConfig::validate() const {
  if (in_dim <= 0 || hidden_dim <= 0 || sage_layers <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "model dimensions must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "dropout_rate must lie in [0, 1)");
  }
}

std::string_view penalty_form_name(PenaltyForm form) {
  return form == PenaltyForm::kLiteral ? "literal" : "hinged";
}

PenaltyForm parse_penalty_form(std::string_view text) {
  if (text == "literal") return PenaltyForm::kLiteral;
  if (text == "hinged") return PenaltyForm::kHinged;
  throw Error(ErrorCode::kInvalidConfig, "unknown penalty form: " + std::string(text));
}

void LossConfig::validate() const {
  for (double w : {alpha, beta, gamma, omega}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidConfig, "loss weights must be finite and non-negative");
    }
  }
}

template <typename T>
std::vector<std::span<T>> GnnParams<T>::blocks() {
  std::vector<std::span<T>> out;
  for (auto& layer : sage) {
    out.emplace_back(layer.weight.flat());
    out.emplace_back(layer.bias);
    out.emplace_back(layer.bn_scale);
    out.emplace_back(layer.bn_shift);
  }
  out.emplace_back(fc_weight.flat());
  out.emplace_back(fc_bias);
  out.emplace_back(out_weight.flat());
  out.emplace_back(out_bias);
  return out;
}

template <typename T>
std::vector<std::span<const T>> GnnParams<T>::blocks() const {
  std::vector<std::span<const T>> out;
  for (auto b : const_cast<GnnParams*>(this)->blocks()) out.emplace_back(b);
  return out;
}

template <typename T>
std::size_t GnnParams<T>::count() const {
  std::size_t total = 0;
  for (auto b : blocks()) total += b.size();
  return total;
}

template <typename T>
GnnParams<T> zeros_like(const GnnParams<T>& params) {
  GnnParams<T> out = params;
  for (auto b : out.blocks()) std::fill(b.begin(), b.end(), T(0));
  return out;
}

namespace {

template <typename T>
Matrix<T> glorot(int fan_in, int fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix<T> w(fan_in, fan_out);
  for (T& x : w.flat()) x = static_cast<T>(dist(rng));
  return w;
}

template <typename To, typename From>
std::vector<To> cast_vec(const std::vector<From>& v) {
  return std::vector<To>(v.begin(), v.end());
}

template <typename To, typename From>
Matrix<To> cast_mat(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  std::copy(m.flat().begin(), m.flat().end(), out.flat().begin());
  return out;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_schema(const ModelConfig& config, const std::string& schema,
                  const FeatureMatrix& features, const ScpGraph& graph) {
  if (config.in_dim != kFeatureCount || schema != features.schema) {
    throw Error(ErrorCode::kSchemaMismatch,
                "model expects " + std::to_string(config.in_dim) + " features (" + schema +
                    "), extractor provides " + std::to_string(kFeatureCount) + " (" +
                    features.schema + ")");
  }
  if (features.rows != graph.node_count()) {
    throw Error(ErrorCode::kLengthMismatch, "feature rows do not match graph nodes");
  }
}

}  // namespace

template <typename T>
BasicGnnModel<T> init_model(const ModelConfig& config) {
  config.validate();
  BasicGnnModel<T> model;
  model.config = config;
  model.feature_names.assign(kFeatureNames.begin(), kFeatureNames.end());
  std::mt19937_64 rng(config.seed);
  int in = config.in_dim;
  const int h = config.hidden_dim;
  for (int l = 0; l < config.sage_layers; ++l) {
    SageParams<T> layer;
    layer.weight = glorot<T>(2 * in, h, rng);
    layer.bias.assign(h, T(0));
    layer.bn_scale.assign(h, T(1));
    layer.bn_shift.assign(h, T(0));
    model.params.sage.push_back(std::move(layer));
    model.running_mean.emplace_back(h, T(0));
    model.running_var.emplace_back(h, T(1));
    in = h;
  }
  model.params.fc_weight = glorot<T>(h, h, rng);
  model.params.fc_bias.assign(h, T(0));
  model.params.out_weight = glorot<T>(h, 1, rng);
  model.params.out_bias.assign(1, T(0));
  return model;
}

template <typename To, typename From>
BasicGnnModel<To> cast_model(const BasicGnnModel<From>& model) {
  BasicGnnModel<To> out;
  out.config = model.config;
  out.feature_schema = model.feature_schema;
  out.feature_names = model.feature_names;
  out.fingerprint = model.fingerprint;
  for (const auto& layer : model.params.sage) {
    out.params.sage.push_back({cast_mat<To>(layer.weight), cast_vec<To>(layer.bias),
                               cast_vec<To>(layer.bn_scale), cast_vec<To>(layer.bn_shift)});
  }
  out.params.fc_weight = cast_mat<To>(model.params.fc_weight);
  out.params.fc_bias = cast_vec<To>(model.params.fc_bias);
  out.params.out_weight = cast_mat<To>(model.params.out_weight);
  out.params.out_bias = cast_vec<To>(model.params.out_bias);
  for (const auto& v : model.running_mean) out.running_mean.push_back(cast_vec<To>(v));
  for (const auto& v : model.running_var) out.running_var.push_back(cast_vec<To>(v));
  return out;
}

template <typename T>
ForwardResult<T> forward(const BasicGnnModel<T>& model, const ScpGraph& graph,
                         const FeatureMatrix& features, Mode mode,
                         std::mt19937_64* dropout_rng) {
  check_schema(model.config, model.feature_schema, features, graph);
  const int n_nodes = graph.node_count();
  const bool train = mode == Mode::kTrain;
  const double rate = model.config.dropout_rate;
  const bool dropout = train && dropout_rng != nullptr && rate > 0.0;

  ForwardResult<T> result;
  ForwardCache<T>& cache = result.cache;
  cache.mode = mode;

  Matrix<T> h(n_nodes, kFeatureCount);
  for (int v = 0; v < n_nodes; ++v) {
    for (int f = 0; f < kFeatureCount; ++f) h(v, f) = static_cast<T>(features.at(v, f));
  }

  for (std::size_t l = 0; l < model.params.sage.size(); ++l) {
    const SageParams<T>& p = model.params.sage[l];
    SageCache<T> c;
    const int d_in = h.cols();
    const int d_out = p.weight.cols();
    c.concat = Matrix<T>(n_nodes, 2 * d_in);
    for (int v = 0; v < n_nodes; ++v) {
      auto dst = c.concat.row(v);
      auto self = h.row(v);
      std::copy(self.begin(), self.end(), dst.begin());
      auto nbrs = graph.neighbors(v);
      if (nbrs.empty()) continue;
      T* agg = dst.data() + d_in;
      for (int u : nbrs) {
        const T* src = h.row(u).data();
        for (int k = 0; k < d_in; ++k) agg[k] += src[k];
      }
      const T inv = T(1) / static_cast<T>(nbrs.size());
      for (int k = 0; k < d_in; ++k) agg[k] *= inv;
    }
    Matrix<T> z;
    matmul(c.concat, p.weight, z);
    for (int v = 0; v < n_nodes; ++v) {
      T* zr = z.row(v).data();
      for (int k = 0; k < d_out; ++k) zr[k] += p.bias[k];
    }

    c.batch_mean.assign(d_out, T(0));
    c.batch_var.assign(d_out, T(0));
    c.inv_std.assign(d_out, T(0));
    std::vector<double> mean(d_out, 0.0), var(d_out, 0.0);
    for (int v = 0; v < n_nodes; ++v) {
      for (int k = 0; k < d_out; ++k) mean[k] += z(v, k);
    }
    for (int k = 0; k < d_out; ++k) mean[k] /= n_nodes;
    for (int v = 0; v < n_nodes; ++v) {
      for (int k = 0; k < d_out; ++k) {
        const double d = z(v, k) - mean[k];
        var[k] += d * d;
      }
    }
    for (int k = 0; k < d_out; ++k) {
      var[k] /= n_nodes;
      c.batch_mean[k] = static_cast<T>(mean[k]);
      c.batch_var[k] = static_cast<T>(var[k]);
      if (!train) {
        mean[k] = model.running_mean[l][k];
        var[k] = model.running_var[l][k];
      }
      c.inv_std[k] = static_cast<T>(1.0 / std::sqrt(var[k] + kBatchNormEps));
    }

    c.normalized = Matrix<T>(n_nodes, d_out);
    c.activated = Matrix<T>(n_nodes, d_out);
    c.output = Matrix<T>(n_nodes, d_out);
    if (dropout) c.dropout_mask = Matrix<T>(n_nodes, d_out);
    std::bernoulli_distribution keep(1.0 - rate);
    const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
    for (int v = 0; v < n_nodes; ++v) {
      for (int k = 0; k < d_out; ++k) {
        const T xh = static_cast<T>((z(v, k) - mean[k])) * c.inv_std[k];
        const T y = p.bn_scale[k] * xh + p.bn_shift[k];
        c.normalized(v, k) = xh;
        c.activated(v, k) = y;
        T out = y > T(0) ? y : T(0);
        if (dropout) {
          const T m = keep(*dropout_rng) ? keep_scale : T(0);
          c.dropout_mask(v, k) = m;
          out *= m;
        }
        c.output(v, k) = out;
      }
    }
    h = c.output;
    cache.sage.push_back(std::move(c));
  }

  const int hid = model.config.hidden_dim;
  matmul(h, model.params.fc_weight, cache.fc_pre);
  cache.embedding = Matrix<T>(n_nodes, hid);
  for (int v = 0; v < n_nodes; ++v) {
    for (int k = 0; k < hid; ++k) {
      T& x = cache.fc_pre(v, k);
      x += model.params.fc_bias[k];
      cache.embedding(v, k) = x > T(0) ? x : T(0);
    }
  }
  cache.logits.assign(n_nodes, model.params.out_bias[0]);
  for (int v = 0; v < n_nodes; ++v) {
    const T* e = cache.embedding.row(v).data();
    T acc = T(0);
    for (int k = 0; k < hid; ++k) acc += e[k] * model.params.out_weight(k, 0);
    cache.logits[v] += acc;
  }

  const int first = graph.first_column();
  result.scores.resize(graph.column_count());
  for (int k = 0; k < graph.column_count(); ++k) {
    double s = sigmoid(static_cast<double>(cache.logits[first + k]));
    s = std::clamp(s, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
    result.scores[k] = s;
  }
  return result;
}

LossValue loss(std::span<const double> scores, std::span<const double> labels,
               const ScpInstance& inst, const LossConfig& config) {
  const int n = inst.num_cols();
  if (static_cast<int>(scores.size()) != n || static_cast<int>(labels.size()) != n) {
    throw Error(ErrorCode::kLengthMismatch,
                "scores and labels must have one entry per column (" + std::to_string(n) + ")");
  }
  constexpr double kClip = 1e-7;
  LossValue out;
  out.grad.assign(n, 0.0);

  double bce = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s = scores[j];
    const double y = labels[j];
    const double p = std::clamp(s, kClip, 1.0 - kClip);
    bce -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    if (s > kClip && s < 1.0 - kClip) {
      out.grad[j] += config.alpha * (-y / p + (1.0 - y) / (1.0 - p)) / n;
    }
  }
  bce /= n;

  const int m = inst.num_rows();
  std::vector<double> ay(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j : inst.row(i)) ay[i] += scores[j];
  }
  double penalty = 0.0;
  for (int j = 0; j < n; ++j) penalty += inst.cost(j).value() * scores[j];
  std::vector<double> row_grad(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (config.penalty == PenaltyForm::kLiteral) {
      penalty += -config.gamma * (ay[i] - 1.0) - config.omega * (1.0 - ay[i]);
      row_grad[i] = config.omega - config.gamma;
    } else {
      penalty += config.gamma * std::max(1.0 - ay[i], 0.0) +
                 config.omega * std::max(ay[i] - 1.0, 0.0);
      row_grad[i] = ay[i] < 1.0 ? -config.gamma : (ay[i] > 1.0 ? config.omega : 0.0);
    }
  }
  if (config.beta != 0.0) {
    for (int j = 0; j < n; ++j) {
      double g = inst.cost(j).value();
      for (int i : inst.col(j)) g += row_grad[i];
      out.grad[j] += config.beta * g;
    }
  }
  out.bce = bce;
  out.penalty = penalty;
  out.value = config.alpha * bce + config.beta * penalty;
  return out;
}

template <typename T>
GnnParams<T> backward(const BasicGnnModel<T>& model, const ScpGraph& graph,
                      const ForwardCache<T>& cache, std::span<const double> grad_scores) {
  const int n_nodes = graph.node_count();
  const int hid = model.config.hidden_dim;
  const int first = graph.first_column();
  if (static_cast<int>(grad_scores.size()) != graph.column_count()) {
    throw Error(ErrorCode::kLengthMismatch, "gradient length does not match column count");
  }
  GnnParams<T> grads = zeros_like(model.params);

  std::vector<T> dlogit(n_nodes, T(0));
  for (int k = 0; k < graph.column_count(); ++k) {
    const double s = sigmoid(static_cast<double>(cache.logits[first + k]));
    dlogit[first + k] = static_cast<T>(grad_scores[k] * s * (1.0 - s));
  }

  Matrix<T> dfc(n_nodes, hid);
  for (int v = 0; v < n_nodes; ++v) {
    const T g = dlogit[v];
    grads.out_bias[0] += g;
    if (g == T(0)) continue;
    for (int k = 0; k < hid; ++k) {
      grads.out_weight(k, 0) += cache.embedding(v, k) * g;
      if (cache.fc_pre(v, k) > T(0)) dfc(v, k) = g * model.params.out_weight(k, 0);
    }
  }
  const Matrix<T>& fc_in = cache.sage.back().output;
  matmul_at_b(fc_in, dfc, grads.fc_weight);
  for (int v = 0; v < n_nodes; ++v) {
    for (int k = 0; k < hid; ++k) grads.fc_bias[k] += dfc(v, k);
  }
  Matrix<T> dh;
  matmul_a_bt(dfc, model.params.fc_weight, dh);

  for (int l = static_cast<int>(cache.sage.size()) - 1; l >= 0; --l) {
    const SageCache<T>& c = cache.sage[l];
    const SageParams<T>& p = model.params.sage[l];
    SageParams<T>& g = grads.sage[l];
    const int d_out = p.weight.cols();
    const int d_in = p.weight.rows() / 2;

    // Through dropout and ReLU.
    Matrix<T> dy = dh;
    for (int v = 0; v < n_nodes; ++v) {
      for (int k = 0; k < d_out; ++k) {
        T& x = dy(v, k);
        if (!c.dropout_mask.flat().empty()) x *= c.dropout_mask(v, k);
        if (!(c.activated(v, k) > T(0))) x = T(0);
      }
    }
    // Batch norm.
    std::vector<double> sum_dxh(d_out, 0.0), sum_dxh_xh(d_out, 0.0);
    Matrix<T> dxh(n_nodes, d_out);
    for (int v = 0; v < n_nodes; ++v) {
      for (int k = 0; k < d_out; ++k) {
        const T d = dy(v, k);
        const T xh = c.normalized(v, k);
        g.bn_scale[k] += d * xh;
        g.bn_shift[k] += d;
        const T dx = d * p.bn_scale[k];
        dxh(v, k) = dx;
        sum_dxh[k] += dx;
        sum_dxh_xh[k] += static_cast<double>(dx) * xh;
      }
    }
    Matrix<T> dz(n_nodes, d_out);
    for (int v = 0; v < n_nodes; ++v) {
      for (int k = 0; k < d_out; ++k) {
        if (cache.mode == Mode::kTrain) {
          dz(v, k) = static_cast<T>(c.inv_std[k] / n_nodes *
                                    (n_nodes * static_cast<double>(dxh(v, k)) - sum_dxh[k] -
                                     c.normalized(v, k) * sum_dxh_xh[k]));
        } else {
          dz(v, k) = dxh(v, k) * c.inv_std[k];
        }
        g.bias[k] += dz(v, k);
      }
    }
    matmul_at_b(c.concat, dz, g.weight);
    if (l == 0) break;

    Matrix<T> dconcat;
    matmul_a_bt(dz, p.weight, dconcat);
    dh = Matrix<T>(n_nodes, d_in);
    for (int v = 0; v < n_nodes; ++v) {
      const T* src = dconcat.row(v).data();
      T* self = dh.row(v).data();
      for (int k = 0; k < d_in; ++k) self[k] += src[k];
      auto nbrs = graph.neighbors(v);
      if (nbrs.empty()) continue;
      const T inv = T(1) / static_cast<T>(nbrs.size());
      for (int u : nbrs) {
        T* dst = dh.row(u).data();
        for (int k = 0; k < d_in; ++k) dst[k] += src[d_in + k] * inv;
      }
    }
  }
  return grads;
}

template <typename T>
OptimizerState<T> make_optimizer(const BasicGnnModel<T>& model, const AdamConfig& adam) {
  OptimizerState<T> state;
  state.adam = adam;
  state.m = zeros_like(model.params);
  state.v = zeros_like(model.params);
  return state;
}

template <typename T>
void adam_update(std::span<T> param, std::span<const T> grad, std::span<T> m,
                 std::span<T> v, long long step, const AdamConfig& adam) {
  const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    const double mi = adam.beta1 * m[i] + (1.0 - adam.beta1) * g;
    const double vi = adam.beta2 * v[i] + (1.0 - adam.beta2) * g * g;
    m[i] = static_cast<T>(mi);
    v[i] = static_cast<T>(vi);
    param[i] = static_cast<T>(param[i] - adam.learning_rate * (mi / c1) /
                                             (std::sqrt(vi / c2) + adam.eps));
  }
}

template <typename T>
StepResult train_step(BasicGnnModel<T>& model, OptimizerState<T>& optimizer,
                      const ScpGraph& graph, const FeatureMatrix& features,
                      std::span<const double> labels, const ScpInstance& inst,
                      const LossConfig& loss_config, std::mt19937_64& dropout_rng) {
  ForwardResult<T> fwd = forward(model, graph, features, Mode::kTrain, &dropout_rng);
  const LossValue lv = loss(fwd.scores, labels, inst, loss_config);
  if (!std::isfinite(lv.value)) {
    throw Error(ErrorCode::kNonFiniteLoss, "loss is not finite on instance " + inst.name());
  }
  GnnParams<T> grads = backward(model, graph, fwd.cache, lv.grad);
  for (auto b : grads.blocks()) {
    for (T x : b) {
      if (!std::isfinite(static_cast<double>(x))) {
        throw Error(ErrorCode::kNonFiniteLoss, "gradient is not finite on instance " + inst.name());
      }
    }
  }

  ++optimizer.step;
  auto pb = model.params.blocks();
  auto gb = std::as_const(grads).blocks();
  auto mb = optimizer.m.blocks();
  auto vb = optimizer.v.blocks();
  for (std::size_t b = 0; b < pb.size(); ++b) {
    adam_update<T>(pb[b], gb[b], mb[b], vb[b], optimizer.step, optimizer.adam);
  }

  const int n_nodes = graph.node_count();
  const double unbias = n_nodes > 1 ? static_cast<double>(n_nodes) / (n_nodes - 1) : 1.0;
  for (std::size_t l = 0; l < fwd.cache.sage.size(); ++l) {
    const SageCache<T>& c = fwd.cache.sage[l];
    for (std::size_t k = 0; k < c.batch_mean.size(); ++k) {
      T& rm = model.running_mean[l][k];
      T& rv = model.running_var[l][k];
      rm = static_cast<T>((1.0 - kBatchNormMomentum) * rm + kBatchNormMomentum * c.batch_mean[k]);
      rv = static_cast<T>((1.0 - kBatchNormMomentum) * rv +
                          kBatchNormMomentum * unbias * c.batch_var[k]);
    }
  }
  return {lv.value, lv.bce};
}

double grad_check(const BasicGnnModel<double>& model, const ScpGraph& graph,
                  const FeatureMatrix& features, std::span<const double> labels,
                  const ScpInstance& inst, const LossConfig& loss_config,
                  const GradCheckOptions& options) {
  auto total = [&](const BasicGnnModel<double>& mdl) {
    return loss(forward(mdl, graph, features, Mode::kTrain).scores, labels, inst, loss_config)
        .value;
  };
  ForwardResult<double> fwd = forward(model, graph, features, Mode::kTrain);
  const LossValue lv = loss(fwd.scores, labels, inst, loss_config);
  GnnParams<double> analytic = backward(model, graph, fwd.cache, lv.grad);
  if (options.tamper) options.tamper(analytic);

  BasicGnnModel<double> probe = model;
  auto pb = probe.params.blocks();
  auto ab = std::as_const(analytic).blocks();
  double worst = 0.0;
  for (std::size_t b = 0; b < pb.size(); ++b) {
    for (std::size_t i = 0; i < pb[b].size(); ++i) {
      const double saved = pb[b][i];
      pb[b][i] = saved + options.h;
      const double up = total(probe);
      pb[b][i] = saved - options.h;
      const double down = total(probe);
      pb[b][i] = saved;
      const double numeric = (up - down) / (2.0 * options.h);
      const double a = ab[b][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), options.floor});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  }
  return worst;
}

Matrix<double> extract_embeddings(const GnnModel& model, const ScpGraph& graph,
                                  const FeatureMatrix& features) {
  const ForwardResult<float> fwd = forward(model, graph, features, Mode::kEval);
  Matrix<double> out(fwd.cache.embedding.rows(), fwd.cache.embedding.cols());
  std::copy(fwd.cache.embedding.flat().begin(), fwd.cache.embedding.flat().end(),
            out.flat().begin());
  return out;
}

Separation separation_metrics(const Matrix<double>& points, std::span<const int> labels) {
  if (static_cast<int>(labels.size()) != points.rows()) {
    throw Error(ErrorCode::kLengthMismatch, "one label per embedding row required");
  }
  std::vector<int> pos, neg;
  for (int k = 0; k < points.rows(); ++k) (labels[k] ? pos : neg).push_back(k);
  auto dist = [&](int a, int b) {
    double s = 0.0;
    for (int c = 0; c < points.cols(); ++c) {
      const double d = points(a, c) - points(b, c);
      s += d * d;
    }
    return std::sqrt(s);
  };
  Separation out;
  out.degenerate = pos.size() < 2 || neg.empty();
  if (pos.size() >= 2) {
    double total = 0.0;
    for (int a : pos) {
      double s = 0.0;
      for (int b : pos) {
        if (a != b) s += dist(a, b);
      }
      total += s / static_cast<double>(pos.size() - 1);
    }
    out.intra = total / static_cast<double>(pos.size());
  }
  if (!pos.empty() && !neg.empty()) {
    double total = 0.0;
    for (int a : pos) {
      double s = 0.0;
      for (int b : neg) s += dist(a, b);
      total += s / static_cast<double>(neg.size());
    }
    out.inter = total / static_cast<double>(pos.size());
  }
  return out;
}

#define GSCP_INSTANTIATE(T)                                                                   \
  template struct GnnParams<T>;                                                               \
  template GnnParams<T> zeros_like(const GnnParams<T>&);                                      \
  template BasicGnnModel<T> init_model<T>(const ModelConfig&);                                \
  template ForwardResult<T> forward(const BasicGnnModel<T>&, const ScpGraph&,                 \
                                    const FeatureMatrix&, Mode, std::mt19937_64*);            \
  template GnnParams<T> backward(const BasicGnnModel<T>&, const ScpGraph&,                    \
                                 const ForwardCache<T>&, std::span<const double>);            \
  template OptimizerState<T> make_optimizer(const BasicGnnModel<T>&, const AdamConfig&);      \
  template void adam_update<T>(std::span<T>, std::span<const T>, std::span<T>, std::span<T>, \
                               long long, const AdamConfig&);                                 \
  template StepResult train_step(BasicGnnModel<T>&, OptimizerState<T>&, const ScpGraph&,      \
                                 const FeatureMatrix&, std::span<const double>,               \
                                 const ScpInstance&, const LossConfig&, std::mt19937_64&);

GSCP_INSTANTIATE(float)
GSCP_INSTANTIATE(double)
#undef GSCP_INSTANTIATE

template BasicGnnModel<double> cast_model<double, float>(const BasicGnnModel<float>&);
template BasicGnnModel<float> cast_model<float, double>(const BasicGnnModel<double>&);
template BasicGnnModel<float> cast_model<float, float>(const BasicGnnModel<float>&);
template BasicGnnModel<double> cast_model<double, double>(const BasicGnnModel<double>&);

}  // namespace gscp
