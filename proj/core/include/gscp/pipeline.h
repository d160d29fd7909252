#ifndef GSCP_PIPELINE_H_
#define GSCP_PIPELINE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gscp/cost.h"
#include "gscp/features.h"
#include "gscp/generator.h"
#include "gscp/graph.h"
#include "gscp/instance.h"
#include "gscp/neural.h"
#include "gscp/solver.h"

namespace gscp {

struct LabeledExample {
  ScpInstance instance;
  InstanceType type = InstanceType::kCustom;
  ScpGraph graph;
  FeatureMatrix features;
  std::vector<double> labels;  // 1 for columns of the exact optimum
  Cost optimal_objective;
  SolveResult exact;  // the labelling solve
};

// Solves exactly (no timeout) and featurizes. Throws Error(kNonConvergence)
// if the solver does not prove optimality.
LabeledExample label_instance(ScpInstance inst, InstanceType type = InstanceType::kCustom);

// count_per_config instances from each config, named "<type>-<NNNN>". The
// configs' own seeds are replaced by seeds derived from `seed`, so the
// dataset depends only on (configs, count, seed).
// Throws Error(kNonPositiveCount).
std::vector<LabeledExample> make_dataset(const std::vector<GeneratorConfig>& configs,
                                         int count_per_config, std::uint64_t seed);

// Seed for instance k of config c, derived by SplitMix64.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t c, std::uint64_t k);

// Mann-Whitney rank statistic with average ranks for ties; 0.5 when one
// class is empty.
double auc(std::span<const double> scores, std::span<const double> labels);

struct EpochRecord {
  int epoch = 0;
  double mean_loss = 0.0;
  double mean_bce = 0.0;
  double holdout_auc = 0.0;
};

struct TrainOptions {
  int epochs = 60;
  double holdout_fraction = 0.2;
  std::uint64_t seed = 0;
  LossConfig loss;
  AdamConfig adam;
  bool keep_best = true;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
  GnnModel model;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_auc = 0.0;
  std::vector<int> train_indices;
  std::vector<int> holdout_indices;
};

// One shuffled pass over the training split per epoch, one train_step per
// example. Held-out AUC pools column scores over the held-out split (the
// training split when nothing is held out). Returns the best-AUC snapshot
// unless keep_best is off. Throws Error(kNonFiniteLoss).
TrainResult train(const std::vector<LabeledExample>& dataset, const ModelConfig& model_config,
                  const TrainOptions& options);

// Score cutoff at the nearest-rank percentile: the ceil(p/100 * n)-th
// smallest score, the minimum for p = 0.
double percentile_cutoff(std::span<const double> scores, double percent);
// Columns with score >= the cutoff, ascending.
std::vector<int> select_columns(std::span<const double> scores, double percent);

struct StopMode {
  enum class Kind { kTarget, kStabilize };
  Kind kind = Kind::kStabilize;
  Cost target;  // used by kTarget

  static StopMode target_objective(Cost c) { return {Kind::kTarget, c}; }
  static StopMode stabilize() { return {Kind::kStabilize, Cost{}}; }
};

struct PipelineOptions {
  double initial_threshold = 90.0;
  double decrement = 10.0;
  StopMode stop;
  SolveOptions solver;

  // Throws Error(kInvalidConfig).
  void validate() const;
};

struct RoundRecord {
  double threshold = 0.0;
  int n_selected = 0;
  bool coverage_ok = false;
  bool solver_called = false;
  std::optional<Cost> objective;
  long long nodes = 0;
  double round_ms = 0.0;
};

struct PipelineReport {
  std::string instance;
  int m = 0;
  int n = 0;
  double gnn_ms = 0.0;  // featurization plus the forward pass
  std::vector<RoundRecord> rounds;
  Cost objective;
  Selection selection;
  SolveStatus status = SolveStatus::kInfeasible;
  double size_reduction = 0.0;
  int last_solver_columns = 0;
  long long last_solver_nodes = 0;
  double total_ms = 0.0;
  int forward_count = 0;
  std::vector<double> scores;  // per column
  // Strict improvements of the best objective, ms since pipeline start.
  std::vector<TracePoint> incumbent_trace;

  int solver_rounds() const;
};

// Featurize and run one eval-mode forward pass.
std::vector<double> score_columns(const GnnModel& model, const ScpInstance& inst);

// score_columns, then the threshold loop.
PipelineReport solve_pipeline(const GnnModel& model, const ScpInstance& inst,
                              const PipelineOptions& options);

// The threshold loop on given column scores; forward_count stays 0.
PipelineReport solve_with_scores(const ScpInstance& inst, std::span<const double> scores,
                                 const PipelineOptions& options);

struct Metrics {
  double speedup = 0.0;
  double size_reduction = 0.0;
  std::optional<double> auc;
};

inline constexpr double kMinTimingMs = 1.0;

// Both wall times are clamped to at least 1 ms before dividing.
Metrics compute_metrics(const PipelineReport& report, const SolveResult& baseline,
                        std::optional<std::span<const double>> labels = std::nullopt);

std::string report_to_json(const PipelineReport& report);

}  // namespace gscp

#endif  // GSCP_PIPELINE_H_
