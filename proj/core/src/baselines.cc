#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "gscp/error.h"
#include "gscp/instance_io.h"
#include "gscp/solver.h"
#include "lagrangian_core.h"

namespace gscp {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Selection to_original(const internal::LocalProblem& lp, const std::vector<int>& local) {
  std::vector<int> cols;
  cols.reserve(local.size());
  for (int c : local) cols.push_back(lp.col_ids[c]);
  return Selection(std::move(cols));
}

}  // namespace

std::string_view solve_status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimedOut: return "timed_out";
  }
  return "unknown";
}

SolveResult greedy(const ScpInstance& inst) {
  const auto start = Clock::now();
  const int m = inst.num_rows();
  const int n = inst.num_cols();
  std::vector<int> fresh(n);
  for (int j = 0; j < n; ++j) fresh[j] = static_cast<int>(inst.col(j).size());
  std::vector<char> covered(m, 0);
  std::vector<char> chosen(n, 0);
  std::vector<int> picked;
  int uncovered = m;
  while (uncovered > 0) {
    int best = -1;
    for (int j = 0; j < n; ++j) {
      if (chosen[j] || fresh[j] == 0) continue;
      if (best < 0 || fresh[j] > fresh[best] ||
          (fresh[j] == fresh[best] && inst.cost(j) < inst.cost(best))) {
        best = j;
      }
    }
    chosen[best] = 1;
    picked.push_back(best);
    for (int i : inst.col(best)) {
      if (covered[i]) continue;
      covered[i] = 1;
      --uncovered;
      for (int k : inst.row(i)) --fresh[k];
    }
  }
  SolveResult result;
  result.selection = Selection(std::move(picked));
  result.objective = evaluate(inst, result.selection).cost;
  result.status = SolveStatus::kFeasible;
  result.wall_ms = elapsed_ms(start);
  result.incumbent_trace.push_back({result.wall_ms, result.objective});
  return result;
}

LagrangianResult lagrangian(const ScpInstance& inst, int max_iters) {
  const auto start = Clock::now();
  const internal::LocalProblem lp = internal::make_local(inst);
  LagrangianResult out;

  SolveResult& heuristic = out.heuristic;
  heuristic.status = SolveStatus::kFeasible;
  auto offer = [&](const std::vector<int>& local) {
    std::vector<int> cols = to_original(lp, local).chosen();
    internal::remove_redundant(inst, cols);
    Selection sel(std::move(cols));
    const Cost cost = evaluate(inst, sel).cost;
    if (heuristic.incumbent_trace.empty() || cost < heuristic.objective) {
      heuristic.selection = std::move(sel);
      heuristic.objective = cost;
      heuristic.incumbent_trace.push_back({elapsed_ms(start), cost});
    }
  };

  // Cost-aware greedy seeds the upper bound used by the step rule.
  offer(internal::greedy_complete(lp, lp.cost, {}));

  internal::SubgradientParams params;
  params.max_iters = std::max(1, max_iters);
  internal::SubgradientOutcome sg = internal::run_subgradient(
      lp, internal::initial_multipliers(lp), heuristic.objective.value(), params);
  if (!sg.best_solution.empty()) offer(sg.best_solution);

  out.lower_bound = std::max(0.0, sg.best_bound);
  out.multipliers = std::move(sg.best_multipliers);
  out.bound_history = std::move(sg.history);
  for (double& b : out.bound_history) b = std::max(0.0, b);
  heuristic.lower_bound = out.lower_bound;
  heuristic.wall_ms = elapsed_ms(start);
  return out;
}

SolveResult brute_force(const ScpInstance& inst) {
  const int n = inst.num_cols();
  if (n > kBruteForceMaxColumns) {
    throw Error(ErrorCode::kTooLarge, "brute force limited to " +
                                          std::to_string(kBruteForceMaxColumns) +
                                          " columns, got " + std::to_string(n));
  }
  const auto start = Clock::now();
  std::vector<std::uint32_t> row_mask(inst.num_rows(), 0);
  for (int i = 0; i < inst.num_rows(); ++i) {
    for (int j : inst.row(i)) row_mask[i] |= 1u << j;
  }
  auto indices = [&](std::uint32_t mask) {
    std::vector<int> out;
    for (int j = 0; j < n; ++j) {
      if (mask >> j & 1u) out.push_back(j);
    }
    return out;
  };
  bool found = false;
  std::uint32_t best_mask = 0;
  Cost best_cost;
  const std::uint32_t limit = n == 32 ? 0 : (1u << n);
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    bool ok = true;
    for (std::uint32_t rm : row_mask) {
      if ((rm & mask) == 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Cost cost;
    for (int j = 0; j < n; ++j) {
      if (mask >> j & 1u) cost += inst.cost(j);
    }
    if (!found || cost < best_cost ||
        (cost == best_cost && indices(mask) < indices(best_mask))) {
      found = true;
      best_mask = mask;
      best_cost = cost;
    }
  }
  SolveResult result;
  result.selection = Selection(indices(best_mask));
  result.objective = best_cost;
  result.status = SolveStatus::kOptimal;
  result.lower_bound = best_cost.value();
  result.nodes_explored = static_cast<long long>(limit);
  result.wall_ms = elapsed_ms(start);
  result.incumbent_trace.push_back({result.wall_ms, best_cost});
  return result;
}

Restriction restrict_columns(const ScpInstance& inst, std::vector<int> columns) {
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  if (columns.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "restriction needs at least one column");
  }
  if (columns.front() < 0 || columns.back() >= inst.num_cols()) {
    throw Error(ErrorCode::kIndexOutOfRange, "restricted column out of range");
  }
  Restriction out;
  out.index_map = columns;
  std::vector<int> local(inst.num_cols(), -1);
  for (std::size_t k = 0; k < columns.size(); ++k) local[columns[k]] = static_cast<int>(k);
  std::vector<std::vector<int>> rows(inst.num_rows());
  for (int i = 0; i < inst.num_rows(); ++i) {
    for (int j : inst.row(i)) {
      if (local[j] >= 0) rows[i].push_back(local[j]);
    }
    if (rows[i].empty()) out.uncovered_rows.push_back(i);
  }
  if (out.uncovered_rows.empty()) {
    std::vector<Cost> costs;
    costs.reserve(columns.size());
    for (int j : columns) costs.push_back(inst.cost(j));
    out.sub_instance = build_instance(inst.num_rows(), static_cast<int>(columns.size()),
                                      std::move(rows), std::move(costs),
                                      inst.name() + "/restricted");
  }
  return out;
}

Selection lift(const Selection& sub_selection, const std::vector<int>& index_map) {
  std::vector<int> cols;
  cols.reserve(sub_selection.size());
  for (int k : sub_selection.chosen()) {
    if (k < 0 || k >= static_cast<int>(index_map.size())) {
      throw Error(ErrorCode::kIndexOutOfRange, "sub-selection index out of range");
    }
    cols.push_back(index_map[k]);
  }
  return Selection(std::move(cols));
}

Selection project(const Selection& selection, const std::vector<int>& index_map) {
  std::vector<int> cols;
  for (int j : selection.chosen()) {
    auto it = std::lower_bound(index_map.begin(), index_map.end(), j);
    if (it == index_map.end() || *it != j) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "column " + std::to_string(j) + " is not in the restriction");
    }
    cols.push_back(static_cast<int>(it - index_map.begin()));
  }
  return Selection(std::move(cols));
}

std::vector<int> random_restrict(const ScpInstance& inst, double k_percent,
                                 std::uint64_t seed) {
  if (!(k_percent > 0.0 && k_percent <= 100.0)) {
    throw Error(ErrorCode::kInvalidConfig, "k must lie in (0, 100]");
  }
  const int n = inst.num_cols();
  // ceil with a guard against 20 * 1000 / 100 landing on 200.0000001.
  const double exact = k_percent * n / 100.0;
  int count = static_cast<int>(std::ceil(exact - 1e-9));
  count = std::clamp(count, 1, n);
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::mt19937_64 rng(seed);
  for (int k = 0; k < count; ++k) {
    const int pick = std::uniform_int_distribution<int>(k, n - 1)(rng);
    std::swap(all[k], all[pick]);
  }
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

std::string lp_string(const ScpInstance& inst) {
  std::ostringstream out;
  out << "\\ set cover instance " << inst.name() << "\n";
  out << "Minimize\n obj:";
  for (int j = 0; j < inst.num_cols(); ++j) {
    out << (j == 0 ? " " : " + ") << inst.cost(j).to_string() << " x" << j + 1;
  }
  out << "\nSubject To\n";
  for (int i = 0; i < inst.num_rows(); ++i) {
    out << " r" << i << ":";
    const auto row = inst.row(i);
    for (std::size_t t = 0; t < row.size(); ++t) {
      out << (t == 0 ? " " : " + ") << "x" << row[t] + 1;
    }
    out << " >= 1\n";
  }
  out << "Binary\n";
  for (int j = 0; j < inst.num_cols(); ++j) out << " x" << j + 1 << "\n";
  out << "End\n";
  return out.str();
}

void export_lp(const ScpInstance& inst, const std::filesystem::path& path) {
  write_text_file(path, lp_string(inst));
}

}  // namespace gscp
