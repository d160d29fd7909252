#ifndef GSCP_SOLVER_H_
#define GSCP_SOLVER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gscp/cost.h"
#include "gscp/instance.h"

namespace gscp {

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kTimedOut };

std::string_view solve_status_name(SolveStatus status);

struct TracePoint {
  double elapsed_ms = 0.0;  // steady clock, measured from solve start
  Cost objective;
};

struct SolveResult {
  Selection selection;
  Cost objective;
  SolveStatus status = SolveStatus::kInfeasible;
  long long nodes_explored = 0;
  double lower_bound = 0.0;
  // Strictly decreasing objectives.
  std::vector<TracePoint> incumbent_trace;
  double wall_ms = 0.0;
};

struct SolveOptions {
  std::int64_t timeout_ms = 0;  // 0 = no limit
  std::optional<Selection> warm_start;
  std::int64_t node_limit = 0;  // 0 = no limit
  int root_subgradient_iters = 300;
  int node_subgradient_iters = 40;
};

// Cost-blind greedy: repeatedly takes the column covering the most
// uncovered rows, ties broken by lower cost and then lower index.
SolveResult greedy(const ScpInstance& inst);

struct LagrangianResult {
  double lower_bound = 0.0;
  SolveResult heuristic;
  std::vector<double> multipliers;  // best multipliers, one per row
  // Best bound after each iteration; non-decreasing.
  std::vector<double> bound_history;
};

// Subgradient optimization of the Lagrangian dual of the covering
// constraints, with a reduced-cost greedy repair at every iterate.
LagrangianResult lagrangian(const ScpInstance& inst, int max_iters = 300);

// Exact best-first branch and bound with Lagrangian bounds and
// reduced-cost fixing. Throws Error(kInfeasibleWarmStart) if the warm
// start does not cover every row.
SolveResult branch_and_bound(const ScpInstance& inst, const SolveOptions& options = {});

inline constexpr int kBruteForceMaxColumns = 24;

// Exhaustive enumeration; among optimal selections returns the
// lexicographically smallest index list. Throws Error(kTooLarge) for
// n > 24.
SolveResult brute_force(const ScpInstance& inst);

struct Restriction {
  // Present only when every row stays coverable.
  std::optional<ScpInstance> sub_instance;
  // Sub-column k corresponds to original column index_map[k].
  std::vector<int> index_map;
  // Rows no kept column covers.
  std::vector<int> uncovered_rows;
};

// Keeps the listed columns (deduplicated, ascending) and all rows.
Restriction restrict_columns(const ScpInstance& inst, std::vector<int> columns);
Selection lift(const Selection& sub_selection, const std::vector<int>& index_map);
// Inverse of lift for selections contained in the restriction.
Selection project(const Selection& selection, const std::vector<int>& index_map);

// ceil(k * n / 100) distinct columns, uniformly without replacement.
std::vector<int> random_restrict(const ScpInstance& inst, double k_percent,
                                 std::uint64_t seed);

// CPLEX LP text for the covering integer program.
std::string lp_string(const ScpInstance& inst);
void export_lp(const ScpInstance& inst, const std::filesystem::path& path);

}  // namespace gscp

#endif  // GSCP_SOLVER_H_
