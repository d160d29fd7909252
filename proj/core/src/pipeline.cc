#include "gscp/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "gscp/error.h"

namespace gscp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t c, std::uint64_t k) {
  return splitmix64(splitmix64(splitmix64(master) ^ c) ^ k);
}

LabeledExample label_instance(ScpInstance inst, InstanceType type) {
  SolveResult exact = branch_and_bound(inst);
  if (exact.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kNonConvergence, "exact solve did not finish on " + inst.name());
  }
  FeaturizedInstance fi = assemble_features(inst);
  std::vector<double> labels(inst.num_cols(), 0.0);
  for (int j : exact.selection) labels[j] = 1.0;
  const Cost objective = exact.objective;
  return LabeledExample{std::move(inst), type, std::move(fi.graph), std::move(fi.features),
                        std::move(labels), objective, std::move(exact)};
}

std::vector<LabeledExample> make_dataset(const std::vector<GeneratorConfig>& configs,
                                         int count_per_config, std::uint64_t seed) {
  if (count_per_config < 1 || configs.empty()) {
    throw Error(ErrorCode::kNonPositiveCount, "dataset needs at least one config and count >= 1");
  }
  std::vector<LabeledExample> out;
  int index = 0;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (int k = 0; k < count_per_config; ++k, ++index) {
      GeneratorConfig config = configs[c];
      config.seed = derive_seed(seed, c, k);
      char name[64];
      std::snprintf(name, sizeof name, "%s-%04d", instance_type_name(config.instance_type).c_str(),
                    index);
      out.push_back(label_instance(generate(config, name), config.instance_type));
    }
  }
  return out;
}

double auc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "auc needs one label per score");
  }
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  double positives = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] > 0.5) {
        rank_sum += avg_rank;
        positives += 1.0;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) return 0.5;
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

namespace {

double pooled_auc(const GnnModel& model, const std::vector<LabeledExample>& dataset,
                  const std::vector<int>& indices) {
  std::vector<double> scores, labels;
  for (int i : indices) {
    const auto& ex = dataset[i];
    const auto fwd = forward(model, ex.graph, ex.features, Mode::kEval);
    scores.insert(scores.end(), fwd.scores.begin(), fwd.scores.end());
    labels.insert(labels.end(), ex.labels.begin(), ex.labels.end());
  }
  return auc(scores, labels);
}

}  // namespace

TrainResult train(const std::vector<LabeledExample>& dataset, const ModelConfig& model_config,
                  const TrainOptions& options) {
  if (dataset.empty()) throw Error(ErrorCode::kNonPositiveCount, "training needs examples");
  if (options.epochs < 1) throw Error(ErrorCode::kInvalidConfig, "epochs must be >= 1");
  if (!(options.holdout_fraction >= 0.0 && options.holdout_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "holdout_fraction must lie in [0, 1)");
  }
  options.loss.validate();

  TrainResult result;
  std::mt19937_64 split_rng(derive_seed(options.seed, 1, 0));
  std::vector<int> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), split_rng);
  std::size_t holdout = static_cast<std::size_t>(options.holdout_fraction * dataset.size());
  if (holdout >= dataset.size()) holdout = 0;
  result.holdout_indices.assign(order.begin(), order.begin() + holdout);
  result.train_indices.assign(order.begin() + holdout, order.end());
  std::sort(result.holdout_indices.begin(), result.holdout_indices.end());
  std::sort(result.train_indices.begin(), result.train_indices.end());
  const std::vector<int>& eval_set =
      result.holdout_indices.empty() ? result.train_indices : result.holdout_indices;

  GnnModel model = init_model<float>(model_config);
  model.fingerprint = {options.seed, options.epochs, options.loss};
  OptimizerState<float> optimizer = make_optimizer(model, options.adam);
  std::mt19937_64 shuffle_rng(derive_seed(options.seed, 2, 0));
  std::mt19937_64 dropout_rng(derive_seed(options.seed, 3, 0));

  GnnModel best = model;
  result.best_auc = -1.0;
  std::vector<int> epoch_order = result.train_indices;
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(epoch_order.begin(), epoch_order.end(), shuffle_rng);
    double loss_sum = 0.0, bce_sum = 0.0;
    for (int i : epoch_order) {
      const auto& ex = dataset[i];
      const StepResult step = train_step(model, optimizer, ex.graph, ex.features, ex.labels,
                                         ex.instance, options.loss, dropout_rng);
      loss_sum += step.loss;
      bce_sum += step.bce;
    }
    EpochRecord record;
    record.epoch = epoch;
    record.mean_loss = loss_sum / epoch_order.size();
    record.mean_bce = bce_sum / epoch_order.size();
    record.holdout_auc = pooled_auc(model, dataset, eval_set);
    result.history.push_back(record);
    if (record.holdout_auc > result.best_auc) {
      result.best_auc = record.holdout_auc;
      result.best_epoch = epoch;
      best = model;
    }
    if (options.on_epoch) options.on_epoch(record);
  }
  result.model = options.keep_best ? std::move(best) : std::move(model);
  return result;
}

double percentile_cutoff(std::span<const double> scores, double percent) {
  if (scores.empty()) throw Error(ErrorCode::kLengthMismatch, "no scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  // The 1e-9 guard keeps p * n / 100 from rounding up past an exact integer.
  long long rank = static_cast<long long>(std::ceil(percent / 100.0 * n - 1e-9));
  rank = std::clamp<long long>(rank, 1, static_cast<long long>(sorted.size()));
  return sorted[rank - 1];
}

std::vector<int> select_columns(std::span<const double> scores, double percent) {
  const double cutoff = percent <= 0.0 ? -INFINITY : percentile_cutoff(scores, percent);
  std::vector<int> out;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (scores[j] >= cutoff) out.push_back(static_cast<int>(j));
  }
  return out;
}

void PipelineOptions::validate() const {
  if (!(initial_threshold >= 0.0 && initial_threshold <= 100.0)) {
    throw Error(ErrorCode::kInvalidConfig, "initial_threshold must lie in [0, 100]");
  }
  if (!(decrement > 0.0)) throw Error(ErrorCode::kInvalidConfig, "decrement must be positive");
}

int PipelineReport::solver_rounds() const {
  return static_cast<int>(std::count_if(rounds.begin(), rounds.end(),
                                        [](const RoundRecord& r) { return r.solver_called; }));
}

namespace {

PipelineReport run_threshold_loop(const ScpInstance& inst, std::span<const double> scores,
                                  const PipelineOptions& options, Clock::time_point start,
                                  PipelineReport report) {
  std::optional<Selection> best;
  std::optional<Cost> previous_round;
  double threshold = options.initial_threshold;
  while (true) {
    const Clock::time_point round_start = Clock::now();
    RoundRecord round;
    round.threshold = threshold;
    const std::vector<int> chosen = select_columns(scores, threshold);
    round.n_selected = static_cast<int>(chosen.size());
    Restriction restriction = restrict_columns(inst, chosen);
    round.coverage_ok = restriction.sub_instance.has_value();
    bool stop = threshold <= 0.0;
    if (round.coverage_ok) {
      SolveOptions solver = options.solver;
      if (best) solver.warm_start = project(*best, restriction.index_map);
      const double offset = ms_since(start);
      const SolveResult sub = branch_and_bound(*restriction.sub_instance, solver);
      round.solver_called = true;
      round.nodes = sub.nodes_explored;
      report.last_solver_columns = round.n_selected;
      report.last_solver_nodes = sub.nodes_explored;
      report.status = sub.status;
      if (sub.status != SolveStatus::kInfeasible) {
        round.objective = sub.objective;
        const Selection lifted = lift(sub.selection, restriction.index_map);
        if (!best || sub.objective < report.objective ||
            (sub.objective == report.objective && lifted < *best)) {
          for (const TracePoint& p : sub.incumbent_trace) {
            if (report.incumbent_trace.empty() ||
                p.objective < report.incumbent_trace.back().objective) {
              report.incumbent_trace.push_back({offset + p.elapsed_ms, p.objective});
            }
          }
          best = lifted;
          report.objective = sub.objective;
        }
        if (options.stop.kind == StopMode::Kind::kTarget) {
          stop = stop || report.objective <= options.stop.target;
        } else {
          stop = stop || (previous_round && *previous_round == sub.objective);
        }
        previous_round = sub.objective;
      }
    }
    round.round_ms = ms_since(round_start);
    report.rounds.push_back(round);
    if (stop) break;
    threshold = std::max(0.0, threshold - options.decrement);
  }
  if (best) report.selection = *best;
  report.size_reduction =
      1.0 - static_cast<double>(report.last_solver_columns) / static_cast<double>(report.n);
  report.total_ms = ms_since(start);
  return report;
}

PipelineReport fresh_report(const ScpInstance& inst) {
  PipelineReport report;
  report.instance = inst.name();
  report.m = inst.num_rows();
  report.n = inst.num_cols();
  return report;
}

}  // namespace

PipelineReport solve_with_scores(const ScpInstance& inst, std::span<const double> scores,
                                 const PipelineOptions& options) {
  options.validate();
  if (static_cast<int>(scores.size()) != inst.num_cols()) {
    throw Error(ErrorCode::kLengthMismatch, "one score per column required");
  }
  PipelineReport report = fresh_report(inst);
  report.scores.assign(scores.begin(), scores.end());
  return run_threshold_loop(inst, scores, options, Clock::now(), std::move(report));
}

std::vector<double> score_columns(const GnnModel& model, const ScpInstance& inst) {
  const FeaturizedInstance fi = assemble_features(inst);
  return forward(model, fi.graph, fi.features, Mode::kEval).scores;
}

PipelineReport solve_pipeline(const GnnModel& model, const ScpInstance& inst,
                              const PipelineOptions& options) {
  options.validate();
  const Clock::time_point start = Clock::now();
  PipelineReport report = fresh_report(inst);
  report.scores = score_columns(model, inst);
  ++report.forward_count;
  report.gnn_ms = ms_since(start);
  const std::vector<double> scores = report.scores;
  return run_threshold_loop(inst, scores, options, start, std::move(report));
}

Metrics compute_metrics(const PipelineReport& report, const SolveResult& baseline,
                        std::optional<std::span<const double>> labels) {
  Metrics m;
  m.speedup = std::max(baseline.wall_ms, kMinTimingMs) / std::max(report.total_ms, kMinTimingMs);
  m.size_reduction = report.size_reduction;
  if (labels) m.auc = auc(report.scores, *labels);
  return m;
}

std::string report_to_json(const PipelineReport& report) {
  using nlohmann::json;
  json rounds = json::array();
  for (const RoundRecord& r : report.rounds) {
    rounds.push_back({{"threshold", r.threshold},
                      {"n_selected", r.n_selected},
                      {"coverage_ok", r.coverage_ok},
                      {"solver_called", r.solver_called},
                      {"objective", r.objective ? json(r.objective->to_string()) : json(nullptr)},
                      {"nodes", r.nodes},
                      {"round_ms", r.round_ms}});
  }
  json trace = json::array();
  for (const TracePoint& p : report.incumbent_trace) {
    trace.push_back({{"elapsed_ms", p.elapsed_ms}, {"objective", p.objective.to_string()}});
  }
  const json doc = {{"instance", report.instance},
                    {"m", report.m},
                    {"n", report.n},
                    {"gnn_ms", report.gnn_ms},
                    {"rounds", rounds},
                    {"objective", report.objective.to_string()},
                    {"selection", report.selection.chosen()},
                    {"status", std::string(solve_status_name(report.status))},
                    {"size_reduction", report.size_reduction},
                    {"last_solver_columns", report.last_solver_columns},
                    {"total_ms", report.total_ms},
                    {"forward_count", report.forward_count},
                    {"incumbent_trace", trace}};
  return doc.dump(2) + "\n";
}

}  // namespace gscp
