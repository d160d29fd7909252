#ifndef GSCP_EXPERIMENTS_H_
#define GSCP_EXPERIMENTS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gscp/generator.h"
#include "gscp/neural.h"
#include "gscp/pipeline.h"

namespace gscp {

enum class ExperimentKind {
  kIncumbentTrace,
  kThresholdSweep,
  kThresholdRunCount,
  kDensitySweep,
  kBenchSuite,
};

std::string_view experiment_kind_name(ExperimentKind kind);
// Accepts the kebab-case names: incumbent-trace, threshold-sweep, ...
ExperimentKind parse_experiment_kind(std::string_view text);

struct SuiteInstance {
  ScpInstance instance;
  InstanceType type = InstanceType::kCustom;
};

struct ExperimentParams {
  const GnnModel* model = nullptr;
  std::vector<SuiteInstance> instances;
  PipelineOptions pipeline;
  // Stop the pipeline at the baseline's proven optimum when there is one;
  // otherwise pipeline.stop is used as given.
  bool target_baseline_optimum = true;
  std::vector<double> thresholds = {90, 70, 50, 30};
  // Density sweep grid; instances are generated, `instances` is ignored.
  int sweep_m = 600;
  int sweep_n = 1000;
  std::vector<double> densities = {0.02, 0.05, 0.1, 0.2};
  int per_density = 2;
  std::uint64_t seed = 0;
  int workers = 1;
  std::filesystem::path out_dir;
};

struct BenchRow {
  std::string instance;
  InstanceType type = InstanceType::kCustom;
  int m = 0;
  int n = 0;
  double density = 0.0;
  PipelineReport pipeline;
  SolveResult baseline;
  Metrics metrics;
  bool optimal = false;  // pipeline objective equals a proven optimum
};

// Full-instance baseline first, then the pipeline.
BenchRow bench_instance(const GnnModel& model, const SuiteInstance& item,
                        const ExperimentParams& params);

// Runs `work(i)` for i in [0, count) on `workers` threads.
void parallel_for(int count, int workers, const std::function<void(int)>& work);

inline constexpr const char* kBenchHeader =
    "instance,type,m,n,density,objective,optimal,size_reduction,speedup,pipeline_ms,"
    "baseline_ms,rounds,forward_count";
inline constexpr const char* kTraceHeader = "instance,system,elapsed_ms,objective";

std::string bench_csv(const std::vector<BenchRow>& rows);

// Writes <kind>.csv (and, for the bench suite, per-instance pipeline
// reports under reports/) into params.out_dir; returns the written paths.
std::vector<std::filesystem::path> run_experiment(ExperimentKind kind,
                                                  const ExperimentParams& params);

}  // namespace gscp

#endif  // GSCP_EXPERIMENTS_H_
