#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "gscp/error.h"
#include "gscp/experiments.h"
#include "gscp/features.h"
#include "gscp/generator.h"
#include "gscp/instance_io.h"
#include "gscp/neural.h"
#include "gscp/pipeline.h"
#include "gscp/solver.h"

namespace gscp::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

bool g_quiet = false;

// CLI11 reports missing required options before unknown ones; these are
// checked after parsing instead so that a typo is named as such.
constexpr const char* kRequiredGroup = "Required";

template <typename... Args>
void progress(const char* fmt, Args... args) {
  if (g_quiet) return;
  std::fprintf(stderr, fmt, args...);
  std::fputc('\n', stderr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "expected comma-separated numbers, got '" + text + "'");
    }
  }
  if (out.empty()) throw CLI::ValidationError(flag, "empty list");
  return out;
}

// ---------------------------------------------------------------------------
// Instances on disk

bool looks_native(const std::string& text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && text[p] == '{';
}

ScpInstance read_instance(const fs::path& path) {
  const std::string text = read_text_file(path);
  if (looks_native(text)) return from_native_string(text);
  return parse_orlib_string(text, path.stem().string());
}

InstanceType type_from_name(const std::string& name) {
  for (auto t : {InstanceType::kType1, InstanceType::kType2, InstanceType::kType3,
                 InstanceType::kType4}) {
    const std::string prefix = instance_type_name(t) + "-";
    if (name.rfind(prefix, 0) == 0) return t;
  }
  return InstanceType::kCustom;
}

bool is_instance_file(const fs::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".txt" || ext == ".scp" || ext == ".orlib") return true;
  if (ext != ".json") return false;
  try {
    const json j = json::parse(read_text_file(p));
    return j.is_object() && j.value("format_version", "") == kNativeFormatVersion;
  } catch (const json::exception&) {
    return false;
  }
}

// Instance files of a directory in name order, or the file itself.
std::vector<fs::path> instance_paths(const fs::path& where) {
  if (!fs::exists(where)) {
    throw Error(ErrorCode::kIoFailure, "no such file or directory: " + where.string());
  }
  if (!fs::is_directory(where)) return {where};
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(where)) {
    if (entry.is_regular_file() && is_instance_file(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(ErrorCode::kIoFailure, "no instance files in " + where.string());
  return out;
}

// ---------------------------------------------------------------------------
// Generator flags shared by generate, train and bench

struct GeneratorFlags {
  std::string type = "2";
  int count = 5;
  int m_min = 0, m_max = 0, n_min = 0, n_max = 0;
  double density_min = 0.0, density_max = 0.0;
  std::string cost;
};

void add_generator_flags(CLI::App* app, GeneratorFlags& g, int default_count) {
  g.count = default_count;
  app->add_option("--type", g.type, "Instance family: 1-4, type1-type4 or custom")
      ->check(CLI::IsMember({"1", "2", "3", "4", "type1", "type2", "type3", "type4", "custom"}));
  app->add_option("--count", g.count, "Number of instances")->check(CLI::PositiveNumber);
  app->add_option("--m-min", g.m_min, "Override the lower row-count bound (0 keeps the preset)");
  app->add_option("--m-max", g.m_max, "Override the upper row-count bound");
  app->add_option("--n-min", g.n_min, "Override the lower column-count bound");
  app->add_option("--n-max", g.n_max, "Override the upper column-count bound");
  app->add_option("--density-min", g.density_min, "Override the lower density bound");
  app->add_option("--density-max", g.density_max, "Override the upper density bound");
  app->add_option("--cost", g.cost,
                  "Override the cost law: equal[:V], uniform:LO:HI or poisson:LAMBDA");
}

CostModel parse_cost_model(const std::string& text) {
  const auto parts = split(text, ':');
  try {
    if (!parts.empty() && parts[0] == "equal" && parts.size() <= 2) {
      return EqualCost{parts.size() == 2 ? std::stoll(parts[1]) : 1};
    }
    if (parts.size() == 3 && parts[0] == "uniform") {
      return UniformIntCost{std::stoll(parts[1]), std::stoll(parts[2])};
    }
    if (parts.size() == 2 && parts[0] == "poisson") return PoissonCost{std::stod(parts[1])};
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError("--cost", "cannot parse cost law '" + text + "'");
}

GeneratorConfig generator_config(const GeneratorFlags& g) {
  const InstanceType type = parse_instance_type(g.type);
  GeneratorConfig c = preset_config(type == InstanceType::kCustom ? InstanceType::kType2 : type, 0);
  c.instance_type = type;
  if (g.m_min > 0) c.m_range.lo = g.m_min;
  if (g.m_max > 0) c.m_range.hi = g.m_max;
  if (g.n_min > 0) c.n_range.lo = g.n_min;
  if (g.n_max > 0) c.n_range.hi = g.n_max;
  if (g.density_min > 0) c.density_range.lo = g.density_min;
  if (g.density_max > 0) c.density_range.hi = g.density_max;
  if (!g.cost.empty()) c.cost_model = parse_cost_model(g.cost);
  validate(c);
  return c;
}

// Same names and seeds as make_dataset for a single config.
std::vector<ScpInstance> generate_suite(const GeneratorConfig& base, int count,
                                        std::uint64_t seed) {
  std::vector<ScpInstance> out;
  for (int k = 0; k < count; ++k) {
    GeneratorConfig c = base;
    c.seed = derive_seed(seed, 0, k);
    char name[64];
    std::snprintf(name, sizeof name, "%s-%04d", instance_type_name(c.instance_type).c_str(), k);
    out.push_back(generate(c, name));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Run manifest

std::string option_value(const CLI::Option* opt) {
  if (opt->get_expected_min() == 0) {
    if (opt->count() == 0) return opt->get_default_str().empty() ? "false" : opt->get_default_str();
    return opt->as<bool>() ? "true" : "false";
  }
  if (opt->count() > 0) return opt->as<std::string>();
  return opt->get_default_str();
}

struct RunContext {
  CLI::App* command = nullptr;
  std::string config_file;
  fs::path out_dir;
  std::vector<std::string> outputs;

  void wrote(const fs::path& p) {
    outputs.push_back(fs::relative(p, out_dir).generic_string());
  }
};

fs::path write_manifest(const RunContext& ctx, std::uint64_t seed) {
  json config = json::object();
  for (const CLI::Option* opt : ctx.command->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    config[name] = option_value(opt);
  }
  json j;
  j["format_version"] = "gscp-run-manifest-1";
  j["tool"] = "gscp";
  j["version"] = kVersion;
  j["command"] = ctx.command->get_name();
  j["seed"] = seed;
  j["config_file"] = ctx.config_file;
  j["config"] = config;
  j["outputs"] = ctx.outputs;
  const fs::path path = ctx.out_dir / ("run-manifest-" + ctx.command->get_name() + ".json");
  write_text_file(path, j.dump(2) + "\n");
  return path;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::kIoFailure, "cannot create output directory " + dir.string());
  }
}

// ---------------------------------------------------------------------------
// Labels

json label_json(const LabeledExample& ex) {
  json j;
  j["format_version"] = "gscp-label-1";
  j["instance"] = ex.instance.name();
  j["m"] = ex.instance.num_rows();
  j["n"] = ex.instance.num_cols();
  j["objective"] = ex.optimal_objective.to_string();
  j["status"] = std::string(solve_status_name(ex.exact.status));
  j["nodes"] = ex.exact.nodes_explored;
  j["selection"] = ex.exact.selection.chosen();
  return j;
}

// Rebuilds a labeled example from a stored optimal selection, checking it
// against the instance.
LabeledExample example_from_label(ScpInstance inst, const fs::path& label_path) {
  json j;
  try {
    j = json::parse(read_text_file(label_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, label_path.string() + ": " + e.what());
  }
  if (j.value("format_version", "") != "gscp-label-1") {
    throw Error(ErrorCode::kVersionMismatch, label_path.string() + ": not a gscp-label-1 file");
  }
  if (j.value("status", "") != "optimal") {
    throw Error(ErrorCode::kNonConvergence, label_path.string() + ": label is not optimal");
  }
  const Selection sel(j.at("selection").get<std::vector<int>>());
  const auto ev = evaluate(inst, sel);
  if (!ev.feasible || ev.cost != Cost::parse(j.at("objective").get<std::string>())) {
    throw Error(ErrorCode::kMalformedFile,
                label_path.string() + ": selection does not match " + inst.name());
  }
  LabeledExample ex;
  ex.type = type_from_name(inst.name());
  auto feat = assemble_features(inst);
  ex.graph = std::move(feat.graph);
  ex.features = std::move(feat.features);
  ex.labels.assign(inst.num_cols(), 0.0);
  for (int col : sel) ex.labels[col] = 1.0;
  ex.optimal_objective = ev.cost;
  ex.exact.selection = sel;
  ex.exact.objective = ev.cost;
  ex.exact.status = SolveStatus::kOptimal;
  ex.exact.nodes_explored = j.value("nodes", 0LL);
  ex.instance = std::move(inst);
  return ex;
}

// ---------------------------------------------------------------------------
// Commands

struct Common {
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string config;
};

void add_common(CLI::App* app, Common& c, const std::string& out_names = "--out") {
  app->add_option("--config", c.config,
                  "key=value file of defaults for this command; flags win over it");
  app->add_option(out_names, c.out, "Output directory");
  app->add_option("--seed", c.seed, "Master seed (default: $GSCP_SEED, else 0)")
      ->envname("GSCP_SEED");
  app->add_flag("--quiet", g_quiet, "Suppress progress on stderr");
}

using Action = std::function<fs::path(RunContext&)>;

struct GenerateArgs {
  Common common;
  GeneratorFlags gen;
  std::string format = "native";
};

fs::path cmd_generate(GenerateArgs& a, RunContext& ctx) {
  const auto config = generator_config(a.gen);
  ensure_dir(ctx.out_dir);
  for (const auto& inst : generate_suite(config, a.gen.count, a.common.seed)) {
    const bool native = a.format == "native";
    const fs::path p = ctx.out_dir / (inst.name() + (native ? ".json" : ".txt"));
    if (native) {
      write_native(inst, p);
    } else {
      write_text_file(p, write_orlib_string(inst));
    }
    ctx.wrote(p);
    progress("generated %s (m=%d n=%d)", inst.name().c_str(), inst.num_rows(), inst.num_cols());
  }
  return write_manifest(ctx, a.common.seed);
}

struct LabelArgs {
  Common common;
  std::string in;
};

fs::path cmd_label(LabelArgs& a, RunContext& ctx) {
  const auto paths = instance_paths(a.in);
  ensure_dir(ctx.out_dir);
  std::string csv = "instance,m,n,objective,nodes,wall_ms\n";
  for (const auto& path : paths) {
    ScpInstance inst = read_instance(path);
    progress("labelling %s (m=%d n=%d)", inst.name().c_str(), inst.num_rows(), inst.num_cols());
    const LabeledExample ex = label_instance(std::move(inst), type_from_name(path.stem().string()));
    const fs::path p = ctx.out_dir / (ex.instance.name() + ".label.json");
    write_text_file(p, label_json(ex).dump(1) + "\n");
    ctx.wrote(p);
    char row[256];
    std::snprintf(row, sizeof row, "%s,%d,%d,%s,%lld,%.3f\n", ex.instance.name().c_str(),
                  ex.instance.num_rows(), ex.instance.num_cols(),
                  ex.optimal_objective.to_string().c_str(), ex.exact.nodes_explored,
                  ex.exact.wall_ms);
    csv += row;
  }
  const fs::path summary = ctx.out_dir / "labels.csv";
  write_text_file(summary, csv);
  ctx.wrote(summary);
  write_manifest(ctx, a.common.seed);
  return summary;
}

struct TrainArgs {
  Common common;
  GeneratorFlags gen;
  std::string data;
  std::string labels;
  std::string model_name = "model.gscp";
  int epochs = 60;
  int hidden = 128;
  int sage_layers = 2;
  double dropout = 0.4;
  double lr = 1e-4;
  double alpha = 1.0, beta = 1e-4, gamma = 1.0, omega = 0.4;
  std::string penalty = "literal";
  double holdout = 0.2;
  bool last = false;
};

std::vector<LabeledExample> training_data(const TrainArgs& a) {
  if (a.data.empty()) {
    const auto config = generator_config(a.gen);
    progress("generating and labelling %d instances", a.gen.count);
    return make_dataset({config}, a.gen.count, a.common.seed);
  }
  std::vector<LabeledExample> out;
  for (const auto& path : instance_paths(a.data)) {
    ScpInstance inst = read_instance(path);
    const fs::path label = fs::path(a.labels) / (inst.name() + ".label.json");
    if (!a.labels.empty() && fs::exists(label)) {
      out.push_back(example_from_label(std::move(inst), label));
    } else {
      progress("labelling %s", inst.name().c_str());
      out.push_back(label_instance(std::move(inst), type_from_name(path.stem().string())));
    }
  }
  return out;
}

fs::path cmd_train(TrainArgs& a, RunContext& ctx) {
  ModelConfig mc;
  mc.hidden_dim = a.hidden;
  mc.sage_layers = a.sage_layers;
  mc.dropout_rate = a.dropout;
  mc.seed = a.common.seed;
  mc.validate();
  TrainOptions opts;
  opts.epochs = a.epochs;
  opts.holdout_fraction = a.holdout;
  opts.seed = a.common.seed;
  opts.loss = {a.alpha, a.beta, a.gamma, a.omega, parse_penalty_form(a.penalty)};
  opts.loss.validate();
  opts.adam.learning_rate = a.lr;
  opts.keep_best = !a.last;
  opts.on_epoch = [&](const EpochRecord& r) {
    progress("epoch %d/%d loss %.5f bce %.5f auc %.4f", r.epoch, a.epochs, r.mean_loss, r.mean_bce,
             r.holdout_auc);
  };
  ensure_dir(ctx.out_dir);
  const auto dataset = training_data(a);
  const TrainResult result = train(dataset, mc, opts);
  progress("best epoch %d, held-out auc %.4f", result.best_epoch, result.best_auc);

  const fs::path model_path = ctx.out_dir / a.model_name;
  save_model(result.model, model_path);
  ctx.wrote(model_path);
  std::string csv = "epoch,mean_loss,mean_bce,holdout_auc\n";
  for (const auto& r : result.history) {
    char row[160];
    std::snprintf(row, sizeof row, "%d,%.9g,%.9g,%.9g\n", r.epoch, r.mean_loss, r.mean_bce,
                  r.holdout_auc);
    csv += row;
  }
  const fs::path history = ctx.out_dir / "history.csv";
  write_text_file(history, csv);
  ctx.wrote(history);
  write_manifest(ctx, a.common.seed);
  return model_path;
}

struct PipelineFlags {
  double threshold = 90.0;
  double decrement = 10.0;
  long long timeout_ms = 0;
};

void add_pipeline_flags(CLI::App* app, PipelineFlags& p) {
  app->add_option("--threshold", p.threshold, "Initial percentile threshold")
      ->check(CLI::Range(0.0, 100.0));
  app->add_option("--decrement", p.decrement, "Threshold decrement per round")
      ->check(CLI::PositiveNumber);
  app->add_option("--timeout-ms", p.timeout_ms, "Per-solve time limit in ms (0 = none)")
      ->check(CLI::NonNegativeNumber);
}

PipelineOptions pipeline_options(const PipelineFlags& p) {
  PipelineOptions o;
  o.initial_threshold = p.threshold;
  o.decrement = p.decrement;
  o.solver.timeout_ms = p.timeout_ms;
  o.validate();
  return o;
}

struct SolveArgs {
  Common common;
  PipelineFlags pipe;
  std::string model;
  std::string instance;
  std::string target;
};

fs::path cmd_solve(SolveArgs& a, RunContext& ctx) {
  const GnnModel model = load_model(a.model);
  const ScpInstance inst = read_instance(a.instance);
  PipelineOptions opts = pipeline_options(a.pipe);
  opts.stop = a.target.empty() ? StopMode::stabilize()
                               : StopMode::target_objective(Cost::parse(a.target));
  progress("solving %s (m=%d n=%d)", inst.name().c_str(), inst.num_rows(), inst.num_cols());
  const PipelineReport report = solve_pipeline(model, inst, opts);
  for (const auto& r : report.rounds) {
    progress("  threshold %.1f: %d columns, %s", r.threshold, r.n_selected,
             !r.coverage_ok ? "rows uncovered"
             : r.objective  ? ("objective " + r.objective->to_string()).c_str()
                            : "no solution");
  }
  progress("objective %s (%s)", report.objective.to_string().c_str(),
           std::string(solve_status_name(report.status)).c_str());
  ensure_dir(ctx.out_dir);
  const fs::path p = ctx.out_dir / (inst.name() + ".report.json");
  write_text_file(p, report_to_json(report));
  ctx.wrote(p);
  write_manifest(ctx, a.common.seed);
  return p;
}

struct BaselineArgs {
  Common common;
  std::string instance;
  std::string algo = "bnb";
  double k = 100.0;
  long long timeout_ms = 0;
  int iterations = 300;
};

json trace_json(const std::vector<TracePoint>& trace) {
  json out = json::array();
  for (const auto& t : trace) out.push_back({{"elapsed_ms", t.elapsed_ms}, {"objective", t.objective.to_string()}});
  return out;
}

fs::path cmd_baseline(BaselineArgs& a, RunContext& ctx) {
  const ScpInstance inst = read_instance(a.instance);
  SolveOptions so;
  so.timeout_ms = a.timeout_ms;
  SolveResult r;
  json extra = json::object();
  progress("%s on %s (m=%d n=%d)", a.algo.c_str(), inst.name().c_str(), inst.num_rows(),
           inst.num_cols());
  if (a.algo == "bnb") {
    r = branch_and_bound(inst, so);
  } else if (a.algo == "greedy") {
    r = greedy(inst);
  } else if (a.algo == "brute") {
    r = brute_force(inst);
  } else if (a.algo == "lagrangian") {
    const auto lr = lagrangian(inst, a.iterations);
    r = lr.heuristic;
    r.lower_bound = lr.lower_bound;
  } else {
    const auto cols = random_restrict(inst, a.k, a.common.seed);
    const auto restriction = restrict_columns(inst, cols);
    extra["k_percent"] = a.k;
    extra["n_restricted"] = cols.size();
    if (restriction.sub_instance) {
      r = branch_and_bound(*restriction.sub_instance, so);
      r.selection = lift(r.selection, restriction.index_map);
    } else {
      extra["uncovered_rows"] = restriction.uncovered_rows.size();
      r.status = SolveStatus::kInfeasible;
    }
  }
  progress("objective %s (%s)", r.objective.to_string().c_str(),
           std::string(solve_status_name(r.status)).c_str());
  json j;
  j["format_version"] = "gscp-baseline-1";
  j["instance"] = inst.name();
  j["m"] = inst.num_rows();
  j["n"] = inst.num_cols();
  j["algo"] = a.algo;
  j["status"] = std::string(solve_status_name(r.status));
  j["objective"] = r.status == SolveStatus::kInfeasible ? json(nullptr) : json(r.objective.to_string());
  j["lower_bound"] = r.lower_bound;
  j["nodes"] = r.nodes_explored;
  j["selection"] = r.selection.chosen();
  j["incumbent_trace"] = trace_json(r.incumbent_trace);
  j["wall_ms"] = r.wall_ms;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  ensure_dir(ctx.out_dir);
  const fs::path p = ctx.out_dir / (inst.name() + "." + a.algo + ".json");
  write_text_file(p, j.dump(1) + "\n");
  ctx.wrote(p);
  write_manifest(ctx, a.common.seed);
  return p;
}

struct BenchArgs {
  Common common;
  GeneratorFlags gen;
  PipelineFlags pipe;
  std::string model;
  std::string instances;
  std::string experiment = "bench";
  int workers = 1;
  std::string thresholds = "90,70,50,30";
  std::string densities = "0.02,0.05,0.1,0.2";
  int sweep_m = 600;
  int sweep_n = 1000;
  int per_density = 2;
  bool no_target = false;
};

fs::path cmd_bench(BenchArgs& a, RunContext& ctx) {
  ExperimentParams params;
  params.thresholds = parse_doubles(a.thresholds, "--thresholds");
  params.densities = parse_doubles(a.densities, "--densities");
  const GnnModel model = load_model(a.model);
  params.model = &model;
  params.pipeline = pipeline_options(a.pipe);
  params.target_baseline_optimum = !a.no_target;
  params.sweep_m = a.sweep_m;
  params.sweep_n = a.sweep_n;
  params.per_density = a.per_density;
  params.seed = a.common.seed;
  params.workers = a.workers;
  params.out_dir = ctx.out_dir;
  const ExperimentKind kind = parse_experiment_kind(a.experiment);
  if (kind != ExperimentKind::kDensitySweep) {
    if (a.instances.empty()) {
      const auto config = generator_config(a.gen);
      for (auto& inst : generate_suite(config, a.gen.count, a.common.seed)) {
        params.instances.push_back({std::move(inst), config.instance_type});
      }
    } else {
      for (const auto& path : instance_paths(a.instances)) {
        ScpInstance inst = read_instance(path);
        const InstanceType type = type_from_name(inst.name());
        params.instances.push_back({std::move(inst), type});
      }
    }
  }
  progress("%s: %zu instances, %d workers", a.experiment.c_str(), params.instances.size(),
           a.workers);
  ensure_dir(ctx.out_dir);
  const auto written = run_experiment(kind, params);
  for (const auto& p : written) ctx.wrote(p);
  write_manifest(ctx, a.common.seed);
  return written.front();
}

struct FeaturesArgs {
  Common common;
  std::string instance;
  double restart_p = kDefaultRestartProbability;
  bool raw = false;
};

fs::path cmd_features(FeaturesArgs& a, RunContext& ctx) {
  const ScpInstance inst = read_instance(a.instance);
  FeatureOptions fo;
  fo.restart_p = a.restart_p;
  fo.normalize = !a.raw;
  const auto feat = assemble_features(inst, fo);
  ensure_dir(ctx.out_dir);
  const fs::path p = ctx.out_dir / (inst.name() + ".features.csv");
  write_text_file(p, features_to_csv(feat));
  ctx.wrote(p);
  write_manifest(ctx, a.common.seed);
  return p;
}

struct ExportArgs {
  Common common;
  std::string instance;
};

fs::path cmd_export_lp(ExportArgs& a, RunContext& ctx) {
  const ScpInstance inst = read_instance(a.instance);
  ensure_dir(ctx.out_dir);
  const fs::path p = ctx.out_dir / (inst.name() + ".lp");
  export_lp(inst, p);
  ctx.wrote(p);
  write_manifest(ctx, a.common.seed);
  return p;
}

struct ConvertArgs {
  Common common;
  std::string from;
  std::string to;
  std::string in;
  std::string name;
};

fs::path cmd_convert(ConvertArgs& a, RunContext& ctx) {
  const fs::path in = a.in;
  ScpInstance inst = [&] {
    const std::string text = read_text_file(in);
    return a.from == "native" ? from_native_string(text)
                              : parse_orlib_string(text, a.name.empty() ? in.stem().string() : a.name);
  }();
  if (!a.name.empty() && a.from == "native") {
    inst = build_instance(inst.num_rows(), inst.num_cols(), inst.rows(), inst.costs(), a.name);
  }
  ensure_dir(ctx.out_dir);
  const fs::path p = ctx.out_dir / (in.stem().string() + (a.to == "native" ? ".json" : ".txt"));
  std::error_code ec;
  if (fs::exists(p) && fs::equivalent(p, in, ec)) {
    throw Error(ErrorCode::kIoFailure, "refusing to overwrite the input file " + in.string());
  }
  write_text_file(p, a.to == "native" ? to_native_string(inst) : write_orlib_string(inst));
  ctx.wrote(p);
  progress("%s: m=%d n=%d", inst.name().c_str(), inst.num_rows(), inst.num_cols());
  write_manifest(ctx, a.common.seed);
  return p;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(number) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    key.erase(0, key.find_first_not_of('-'));
    if (key.empty()) throw std::runtime_error(path + ":" + std::to_string(number) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<std::string> splice_config(const std::vector<std::string>& args) {
  std::string file;
  std::size_t command = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (command == 0 && !args[i].empty() && args[i][0] != '-') command = i;
    if (args[i] == "--config" && i + 1 < args.size()) file = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) file = args[i].substr(9);
  }
  if (file.empty() || command == 0) return args;
  std::vector<std::string> out(args.begin(), args.begin() + command + 1);
  for (const auto& [key, value] : read_config_file(file)) {
    if (key == "config") continue;
    out.push_back("--" + key + "=" + value);
  }
  out.insert(out.end(), args.begin() + command + 1, args.end());
  return out;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = splice_config(args);
  } catch (const std::exception& e) {
    std::cerr << "usage error: --config: " << e.what() << "\n";
    return kUsageError;
  }

  CLI::App app{"Set-cover instance tools with a learned column-reduction solver", "gscp"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.option_defaults()->always_capture_default();

  GenerateArgs gen;
  LabelArgs lab;
  TrainArgs tr;
  SolveArgs sol;
  BaselineArgs base;
  BenchArgs bench;
  FeaturesArgs feat;
  ExportArgs exp;
  ConvertArgs conv;
  std::vector<std::pair<CLI::App*, std::pair<Common*, Action>>> commands;

  {
    auto* c = app.add_subcommand("generate", "Write synthetic instances");
    add_common(c, gen.common);
    add_generator_flags(c, gen.gen, 5);
    c->add_option("--format", gen.format, "Instance file format")
        ->check(CLI::IsMember({"native", "orlib"}));
    commands.push_back({c, {&gen.common, [&](RunContext& x) { return cmd_generate(gen, x); }}});
  }
  {
    auto* c = app.add_subcommand("label", "Solve instances exactly and write label files");
    add_common(c, lab.common);
    c->add_option("--in", lab.in, "Instance file or directory")->required(false)->group(kRequiredGroup);
    commands.push_back({c, {&lab.common, [&](RunContext& x) { return cmd_label(lab, x); }}});
  }
  {
    auto* c = app.add_subcommand("train", "Train a scoring model");
    add_common(c, tr.common);
    add_generator_flags(c, tr.gen, 100);
    c->add_option("--data", tr.data, "Instance directory; generator flags are used when absent");
    c->add_option("--labels", tr.labels, "Directory of label files from `gscp label`");
    c->add_option("--model-name", tr.model_name, "Model file name inside --out");
    c->add_option("--epochs", tr.epochs, "Training epochs")->check(CLI::PositiveNumber);
    c->add_option("--hidden", tr.hidden, "Hidden width")->check(CLI::PositiveNumber);
    c->add_option("--sage-layers", tr.sage_layers, "Message-passing layers")
        ->check(CLI::PositiveNumber);
    c->add_option("--dropout", tr.dropout, "Dropout rate")->check(CLI::Range(0.0, 0.999));
    c->add_option("--lr", tr.lr, "Adam learning rate")->check(CLI::PositiveNumber);
    c->add_option("--alpha", tr.alpha, "Weight of the cross-entropy term");
    c->add_option("--beta", tr.beta, "Weight of the cover penalty");
    c->add_option("--gamma", tr.gamma, "Over-coverage weight inside the penalty");
    c->add_option("--omega", tr.omega, "Under-coverage weight inside the penalty");
    c->add_option("--penalty", tr.penalty, "Penalty form")
        ->check(CLI::IsMember({"literal", "hinged"}));
    c->add_option("--holdout", tr.holdout, "Held-out fraction for model selection")
        ->check(CLI::Range(0.0, 0.999));
    c->add_flag("--last", tr.last, "Keep the final epoch instead of the best held-out AUC");
    commands.push_back({c, {&tr.common, [&](RunContext& x) { return cmd_train(tr, x); }}});
  }
  {
    auto* c = app.add_subcommand("solve", "Solve one instance with the reduction pipeline");
    add_common(c, sol.common, "--report,--out");
    add_pipeline_flags(c, sol.pipe);
    c->add_option("--model", sol.model, "Model file")->required(false)->group(kRequiredGroup);
    c->add_option("--instance", sol.instance, "Instance file (native or OR-Library)")
        ->required(false)->group(kRequiredGroup);
    c->add_option("--target-obj", sol.target,
                  "Stop once the objective is at most this value; otherwise stop when two "
                  "consecutive solver rounds agree");
    commands.push_back({c, {&sol.common, [&](RunContext& x) { return cmd_solve(sol, x); }}});
  }
  {
    auto* c = app.add_subcommand("baseline", "Solve one instance with a reference method");
    add_common(c, base.common);
    c->add_option("--instance", base.instance, "Instance file")->required(false)->group(kRequiredGroup);
    c->add_option("--algo", base.algo, "bnb, brute, greedy, lagrangian or random")
        ->check(CLI::IsMember({"bnb", "brute", "greedy", "lagrangian", "random"}));
    c->add_option("--k", base.k, "Percent of columns kept by --algo random")
        ->check(CLI::Range(0.0, 100.0));
    c->add_option("--timeout-ms", base.timeout_ms, "Branch-and-bound time limit (0 = none)")
        ->check(CLI::NonNegativeNumber);
    c->add_option("--iterations", base.iterations, "Subgradient iterations for lagrangian")
        ->check(CLI::PositiveNumber);
    commands.push_back({c, {&base.common, [&](RunContext& x) { return cmd_baseline(base, x); }}});
  }
  {
    auto* c = app.add_subcommand("bench", "Run an experiment suite");
    add_common(c, bench.common);
    add_generator_flags(c, bench.gen, 20);
    add_pipeline_flags(c, bench.pipe);
    c->add_option("--model", bench.model, "Model file")->required(false)->group(kRequiredGroup);
    c->add_option("--instances", bench.instances,
                  "Instance directory; generator flags are used when absent");
    c->add_option("--experiment", bench.experiment, "Suite to run")
        ->check(CLI::IsMember({"bench", "incumbent-trace", "threshold-sweep",
                               "threshold-run-count", "density-sweep"}));
    c->add_option("--workers", bench.workers, "Concurrent instance solves")
        ->check(CLI::PositiveNumber);
    c->add_option("--thresholds", bench.thresholds, "Initial thresholds for the sweeps");
    c->add_option("--densities", bench.densities, "Density grid for density-sweep");
    c->add_option("--sweep-m", bench.sweep_m, "Rows for density-sweep")->check(CLI::PositiveNumber);
    c->add_option("--sweep-n", bench.sweep_n, "Columns for density-sweep")
        ->check(CLI::PositiveNumber);
    c->add_option("--per-density", bench.per_density, "Instances per density")
        ->check(CLI::PositiveNumber);
    c->add_flag("--no-target", bench.no_target,
                "Stop the pipeline by stabilization instead of at the baseline optimum");
    commands.push_back({c, {&bench.common, [&](RunContext& x) { return cmd_bench(bench, x); }}});
  }
  {
    auto* c = app.add_subcommand("features", "Dump the node feature matrix as CSV");
    add_common(c, feat.common);
    c->add_option("--instance", feat.instance, "Instance file")->required(false)->group(kRequiredGroup);
    c->add_option("--restart-p", feat.restart_p, "Restart probability of the random walk")
        ->check(CLI::Range(0.0, 1.0));
    c->add_flag("--raw", feat.raw, "Skip min-max normalization");
    commands.push_back({c, {&feat.common, [&](RunContext& x) { return cmd_features(feat, x); }}});
  }
  {
    auto* c = app.add_subcommand("export-lp", "Write the covering program in LP format");
    add_common(c, exp.common);
    c->add_option("--instance", exp.instance, "Instance file")->required(false)->group(kRequiredGroup);
    commands.push_back({c, {&exp.common, [&](RunContext& x) { return cmd_export_lp(exp, x); }}});
  }
  {
    auto* c = app.add_subcommand("convert", "Convert between OR-Library and native formats");
    add_common(c, conv.common);
    c->add_option("--from", conv.from, "Input format")
        ->required(false)->group(kRequiredGroup)
        ->check(CLI::IsMember({"orlib", "native"}));
    c->add_option("--to", conv.to, "Output format")
        ->required(false)->group(kRequiredGroup)
        ->check(CLI::IsMember({"orlib", "native"}));
    c->add_option("--in", conv.in, "Input file")->required(false)->group(kRequiredGroup);
    c->add_option("--name", conv.name, "Instance name (default: input file stem)");
    commands.push_back({c, {&conv.common, [&](RunContext& x) { return cmd_convert(conv, x); }}});
  }

  std::vector<const char*> cargs;
  for (const auto& s : args) cargs.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  }
  for (auto& [sub, entry] : commands) {
    if (!sub->parsed()) continue;
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_group() == kRequiredGroup && opt->count() == 0) {
        std::cerr << "usage error: " << opt->get_name() << " is required\n";
        return kUsageError;
      }
    }
  }

  try {
    for (auto& [sub, entry] : commands) {
      if (!sub->parsed()) continue;
      RunContext ctx;
      ctx.command = sub;
      ctx.config_file = entry.first->config;
      ctx.out_dir = entry.first->out;
      const fs::path result = entry.second(ctx);
      std::cout << result.string() << "\n";
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kUsageError;
}

}  // namespace gscp::cli
