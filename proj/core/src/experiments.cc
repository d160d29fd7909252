#include "gscp/experiments.h"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "gscp/error.h"
#include "gscp/instance_io.h"

namespace gscp {

namespace {

constexpr std::string_view kKindNames[] = {"incumbent-trace", "threshold-sweep",
                                           "threshold-run-count", "density-sweep", "bench"};

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string ms(double x) { return fixed(x, 3); }

PipelineOptions options_for(const ExperimentParams& params, const SolveResult& baseline) {
  PipelineOptions options = params.pipeline;
  if (params.target_baseline_optimum && baseline.status == SolveStatus::kOptimal) {
    options.stop = StopMode::target_objective(baseline.objective);
  }
  return options;
}

void require_model(const ExperimentParams& params) {
  if (params.model == nullptr) throw Error(ErrorCode::kInvalidConfig, "experiment needs a model");
}

std::filesystem::path write_csv(const ExperimentParams& params, std::string_view stem,
                                const std::string& text) {
  std::filesystem::create_directories(params.out_dir);
  const auto path = params.out_dir / (std::string(stem) + ".csv");
  write_text_file(path, text);
  return path;
}

}  // namespace

std::string_view experiment_kind_name(ExperimentKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  for (int k = 0; k < 5; ++k) {
    if (kKindNames[k] == text) return static_cast<ExperimentKind>(k);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown experiment: " + std::string(text));
}

void parallel_for(int count, int workers, const std::function<void(int)>& work) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          work(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

BenchRow bench_instance(const GnnModel& model, const SuiteInstance& item,
                        const ExperimentParams& params) {
  BenchRow row;
  const ScpInstance& inst = item.instance;
  row.instance = inst.name();
  row.type = item.type;
  row.m = inst.num_rows();
  row.n = inst.num_cols();
  row.density = density(inst);
  row.baseline = branch_and_bound(inst, params.pipeline.solver);
  row.pipeline = solve_pipeline(model, inst, options_for(params, row.baseline));
  row.metrics = compute_metrics(row.pipeline, row.baseline);
  row.optimal = row.baseline.status == SolveStatus::kOptimal &&
                row.pipeline.objective == row.baseline.objective;
  return row;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << kBenchHeader << '\n';
  for (const BenchRow& r : rows) {
    out << r.instance << ',' << instance_type_name(r.type) << ',' << r.m << ',' << r.n << ','
        << fixed(r.density) << ',' << r.pipeline.objective.to_string() << ','
        << (r.optimal ? 1 : 0) << ',' << fixed(r.metrics.size_reduction) << ','
        << fixed(r.metrics.speedup, 3) << ',' << ms(r.pipeline.total_ms) << ','
        << ms(r.baseline.wall_ms) << ',' << r.pipeline.rounds.size() << ','
        << r.pipeline.forward_count << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::filesystem::path> run_bench(const ExperimentParams& params) {
  require_model(params);
  std::vector<BenchRow> rows(params.instances.size());
  parallel_for(static_cast<int>(rows.size()), params.workers, [&](int i) {
    rows[i] = bench_instance(*params.model, params.instances[i], params);
  });
  std::vector<std::filesystem::path> files = {write_csv(params, "bench", bench_csv(rows))};
  const auto reports = params.out_dir / "reports";
  std::filesystem::create_directories(reports);
  for (const BenchRow& r : rows) {
    files.push_back(reports / (r.instance + ".json"));
    write_text_file(files.back(), report_to_json(r.pipeline));
  }
  return files;
}

std::vector<std::filesystem::path> run_trace(const ExperimentParams& params) {
  require_model(params);
  std::vector<BenchRow> rows(params.instances.size());
  parallel_for(static_cast<int>(rows.size()), params.workers, [&](int i) {
    rows[i] = bench_instance(*params.model, params.instances[i], params);
  });
  std::ostringstream out;
  out << kTraceHeader << '\n';
  for (const BenchRow& r : rows) {
    for (const TracePoint& p : r.pipeline.incumbent_trace) {
      out << r.instance << ",pipeline," << ms(p.elapsed_ms) << ',' << p.objective.to_string()
          << '\n';
    }
    for (const TracePoint& p : r.baseline.incumbent_trace) {
      out << r.instance << ",baseline," << ms(p.elapsed_ms) << ',' << p.objective.to_string()
          << '\n';
    }
  }
  return {write_csv(params, "incumbent-trace", out.str())};
}

struct SweepCell {
  PipelineReport report;
  double gnn_ms = 0.0;
};

// One forward per instance, then one threshold loop per initial threshold.
std::vector<std::vector<SweepCell>> sweep(const ExperimentParams& params) {
  require_model(params);
  std::vector<std::vector<SweepCell>> cells(params.instances.size());
  parallel_for(static_cast<int>(cells.size()), params.workers, [&](int i) {
    const ScpInstance& inst = params.instances[i].instance;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<double> scores = score_columns(*params.model, inst);
    const double gnn_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    for (double t : params.thresholds) {
      PipelineOptions options = params.pipeline;
      options.initial_threshold = t;
      cells[i].push_back({solve_with_scores(inst, scores, options), gnn_ms});
    }
  });
  return cells;
}

const RoundRecord* first_solver_round(const PipelineReport& report) {
  for (const RoundRecord& r : report.rounds) {
    if (r.solver_called) return &r;
  }
  return nullptr;
}

std::vector<std::filesystem::path> run_threshold_sweep(const ExperimentParams& params) {
  const auto cells = sweep(params);
  std::ostringstream out;
  out << "instance,initial_threshold,first_solver_threshold,first_solver_n_selected,"
         "final_n_selected,rounds,objective,size_reduction,gnn_ms,loop_ms\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t k = 0; k < cells[i].size(); ++k) {
      const PipelineReport& r = cells[i][k].report;
      const RoundRecord* first = first_solver_round(r);
      out << r.instance << ',' << fixed(params.thresholds[k], 2) << ','
          << (first ? fixed(first->threshold, 2) : "") << ','
          << (first ? std::to_string(first->n_selected) : "") << ',' << r.last_solver_columns
          << ',' << r.rounds.size() << ',' << r.objective.to_string() << ','
          << fixed(r.size_reduction) << ',' << ms(cells[i][k].gnn_ms) << ',' << ms(r.total_ms)
          << '\n';
    }
  }
  return {write_csv(params, "threshold-sweep", out.str())};
}

std::vector<std::filesystem::path> run_threshold_run_count(const ExperimentParams& params) {
  const auto cells = sweep(params);
  std::ostringstream out;
  out << "instance,type,initial_threshold,solver_calls,rounds\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t k = 0; k < cells[i].size(); ++k) {
      const PipelineReport& r = cells[i][k].report;
      out << r.instance << ',' << instance_type_name(params.instances[i].type) << ','
          << fixed(params.thresholds[k], 2) << ',' << r.solver_rounds() << ',' << r.rounds.size()
          << '\n';
    }
  }
  return {write_csv(params, "threshold-run-count", out.str())};
}

std::vector<std::filesystem::path> run_density_sweep(const ExperimentParams& params) {
  require_model(params);
  std::vector<SuiteInstance> items;
  std::vector<double> buckets;
  for (std::size_t b = 0; b < params.densities.size(); ++b) {
    for (int k = 0; k < params.per_density; ++k) {
      GeneratorConfig c;
      c.m_range = {params.sweep_m, params.sweep_m};
      c.n_range = {params.sweep_n, params.sweep_n};
      c.density_range = {params.densities[b], params.densities[b]};
      c.cost_model = UniformIntCost{100, 200};
      c.seed = derive_seed(params.seed, b, k);
      char name[64];
      std::snprintf(name, sizeof name, "density-%s-%02d", fixed(params.densities[b], 3).c_str(), k);
      items.push_back({generate(c, name), InstanceType::kCustom});
      buckets.push_back(params.densities[b]);
    }
  }
  std::vector<BenchRow> rows(items.size());
  parallel_for(static_cast<int>(rows.size()), params.workers,
               [&](int i) { rows[i] = bench_instance(*params.model, items[i], params); });
  std::ostringstream out;
  out << "density_bucket,instance,m,n,density,objective,optimal,baseline_status,size_reduction,"
         "speedup,pipeline_ms,baseline_ms\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const BenchRow& r = rows[i];
    out << fixed(buckets[i], 3) << ',' << r.instance << ',' << r.m << ',' << r.n << ','
        << fixed(r.density) << ',' << r.pipeline.objective.to_string() << ','
        << (r.optimal ? 1 : 0) << ',' << solve_status_name(r.baseline.status) << ','
        << fixed(r.metrics.size_reduction) << ',' << fixed(r.metrics.speedup, 3) << ','
        << ms(r.pipeline.total_ms) << ',' << ms(r.baseline.wall_ms) << '\n';
  }
  return {write_csv(params, "density-sweep", out.str())};
}

}  // namespace

std::vector<std::filesystem::path> run_experiment(ExperimentKind kind,
                                                  const ExperimentParams& params) {
  params.pipeline.validate();
  switch (kind) {
    case ExperimentKind::kBenchSuite: return run_bench(params);
    case ExperimentKind::kIncumbentTrace: return run_trace(params);
    case ExperimentKind::kThresholdSweep: return run_threshold_sweep(params);
    case ExperimentKind::kThresholdRunCount: return run_threshold_run_count(params);
    case ExperimentKind::kDensitySweep: return run_density_sweep(params);
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown experiment kind");
}

}  // namespace gscp
