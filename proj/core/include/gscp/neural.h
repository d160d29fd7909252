#ifndef GSCP_NEURAL_H_
#define GSCP_NEURAL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gscp/features.h"
#include "gscp/graph.h"
#include "gscp/instance.h"
#include "gscp/tensor.h"

namespace gscp {

enum class Aggregate { kMean };

struct ModelConfig {
  int in_dim = kFeatureCount;
  int hidden_dim = 128;
  int sage_layers = 2;
  double dropout_rate = 0.4;
  std::uint64_t seed = 0;
  Aggregate aggregate = Aggregate::kMean;

  // Throws Error(kInvalidConfig).
  void validate() const;
};

inline constexpr double kBatchNormMomentum = 0.1;
inline constexpr double kBatchNormEps = 1e-8;

enum class PenaltyForm { kLiteral, kHinged };

std::string_view penalty_form_name(PenaltyForm form);
PenaltyForm parse_penalty_form(std::string_view text);

struct LossConfig {
  double alpha = 1.0;
  double beta = 1e-4;
  double gamma = 1.0;
  double omega = 0.4;
  PenaltyForm penalty = PenaltyForm::kLiteral;

  void validate() const;
};

template <typename T>
struct SageParams {
  Matrix<T> weight;  // (2 * in) x out; first `in` rows act on the node itself
  std::vector<T> bias;
  std::vector<T> bn_scale;
  std::vector<T> bn_shift;
};

// Trainable parameters. Gradients and Adam moments reuse this shape.
template <typename T>
struct GnnParams {
  std::vector<SageParams<T>> sage;
  Matrix<T> fc_weight;  // hidden x hidden
  std::vector<T> fc_bias;
  Matrix<T> out_weight;  // hidden x 1
  std::vector<T> out_bias;  // size 1

  // Every parameter tensor in a fixed order.
  std::vector<std::span<T>> blocks();
  std::vector<std::span<const T>> blocks() const;
  std::size_t count() const;
};

// Same-shaped zero tensors.
template <typename T>
GnnParams<T> zeros_like(const GnnParams<T>& params);

struct TrainingFingerprint {
  std::uint64_t seed = 0;
  int epochs = 0;
  LossConfig loss;
};

template <typename T>
struct BasicGnnModel {
  ModelConfig config;
  GnnParams<T> params;
  std::vector<std::vector<T>> running_mean;  // per SAGE layer
  std::vector<std::vector<T>> running_var;
  std::string feature_schema = kFeatureSchemaVersion;
  std::vector<std::string> feature_names;
  TrainingFingerprint fingerprint;

  std::size_t parameter_count() const { return params.count(); }
};

using GnnModel = BasicGnnModel<float>;

// Glorot-uniform weights from config.seed, zero biases, batch-norm
// scale 1 and shift 0, running mean 0 and variance 1.
template <typename T>
BasicGnnModel<T> init_model(const ModelConfig& config);

template <typename To, typename From>
BasicGnnModel<To> cast_model(const BasicGnnModel<From>& model);

enum class Mode { kTrain, kEval };

template <typename T>
struct SageCache {
  Matrix<T> concat;      // [self | mean of neighbors]
  Matrix<T> normalized;  // batch-norm x_hat
  Matrix<T> activated;   // after scale/shift, before ReLU
  Matrix<T> dropout_mask;  // empty when dropout is off
  Matrix<T> output;
  std::vector<T> batch_mean;
  std::vector<T> batch_var;
  std::vector<T> inv_std;
};

template <typename T>
struct ForwardCache {
  Mode mode = Mode::kEval;
  std::vector<SageCache<T>> sage;
  Matrix<T> fc_pre;
  Matrix<T> embedding;  // penultimate layer, every node
  std::vector<T> logits;  // every node
};

template <typename T>
struct ForwardResult {
  std::vector<double> scores;  // Column nodes only, in column order
  ForwardCache<T> cache;
};

// Two (or config.sage_layers) GraphSAGE layers over the undirected view,
// then FC + ReLU, then linear + sigmoid. Dropout applies only in train
// mode with a non-null rng. Throws Error(kSchemaMismatch).
template <typename T>
ForwardResult<T> forward(const BasicGnnModel<T>& model, const ScpGraph& graph,
                         const FeatureMatrix& features, Mode mode,
                         std::mt19937_64* dropout_rng = nullptr);

struct LossValue {
  double value = 0.0;
  double bce = 0.0;
  double penalty = 0.0;
  std::vector<double> grad;  // d value / d score
};

// alpha * mean BCE + beta * (cost term + coverage terms).
// Throws Error(kLengthMismatch).
LossValue loss(std::span<const double> scores, std::span<const double> labels,
               const ScpInstance& inst, const LossConfig& config);

template <typename T>
GnnParams<T> backward(const BasicGnnModel<T>& model, const ScpGraph& graph,
                      const ForwardCache<T>& cache, std::span<const double> grad_scores);

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct OptimizerState {
  AdamConfig adam;
  GnnParams<T> m;
  GnnParams<T> v;
  long long step = 0;
};

template <typename T>
OptimizerState<T> make_optimizer(const BasicGnnModel<T>& model, const AdamConfig& adam = {});

// One Adam update of a flat parameter block; `step` is the 1-based step.
template <typename T>
void adam_update(std::span<T> param, std::span<const T> grad, std::span<T> m,
                 std::span<T> v, long long step, const AdamConfig& adam);

struct StepResult {
  double loss = 0.0;
  double bce = 0.0;
};

// Train-mode forward with dropout, backward, Adam update, then the
// running batch-norm statistics move by kBatchNormMomentum.
// Throws Error(kNonFiniteLoss) before touching the model.
template <typename T>
StepResult train_step(BasicGnnModel<T>& model, OptimizerState<T>& optimizer,
                      const ScpGraph& graph, const FeatureMatrix& features,
                      std::span<const double> labels, const ScpInstance& inst,
                      const LossConfig& loss_config, std::mt19937_64& dropout_rng);

struct GradCheckOptions {
  double h = 1e-5;
  // Relative errors divide by max(|analytic|, |numeric|, floor).
  double floor = 1e-4;
  // Test hook: edits the analytic gradient before comparison.
  std::function<void(GnnParams<double>&)> tamper;
};

// Central differences over every parameter, train-mode batch statistics,
// dropout off. Returns the largest relative error.
double grad_check(const BasicGnnModel<double>& model, const ScpGraph& graph,
                  const FeatureMatrix& features, std::span<const double> labels,
                  const ScpInstance& inst, const LossConfig& loss_config,
                  const GradCheckOptions& options = {});

// Penultimate-layer activations for every node, eval mode.
Matrix<double> extract_embeddings(const GnnModel& model, const ScpGraph& graph,
                                  const FeatureMatrix& features);

struct Separation {
  double intra = 0.0;
  double inter = 0.0;
  bool degenerate = false;  // fewer than 2 solution points or no others
};

// points.row(k) is labelled labels[k] (nonzero = solution).
Separation separation_metrics(const Matrix<double>& points, std::span<const int> labels);

inline constexpr const char* kModelFormatVersion = "gscp-model-1";

std::string model_to_string(const GnnModel& model);
GnnModel model_from_string(const std::string& text);
void save_model(const GnnModel& model, const std::filesystem::path& path);
// Throws Error(kVersionMismatch) or Error(kMalformedFile).
GnnModel load_model(const std::filesystem::path& path);

}  // namespace gscp

#endif  // GSCP_NEURAL_H_
