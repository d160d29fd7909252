#ifndef GSCP_SRC_LAGRANGIAN_CORE_H_
#define GSCP_SRC_LAGRANGIAN_CORE_H_

#include <limits>
#include <vector>

#include "gscp/instance.h"

namespace gscp::internal {

// A covering subproblem in local indices: a subset of rows still to cover
// and the columns allowed to cover them.
struct LocalProblem {
  std::vector<int> row_ids;
  std::vector<int> col_ids;
  std::vector<double> cost;
  std::vector<std::vector<int>> col_rows;
  std::vector<std::vector<int>> row_cols;

  int num_rows() const { return static_cast<int>(row_ids.size()); }
  int num_cols() const { return static_cast<int>(col_ids.size()); }
};

// Columns marked free that touch at least one active row.
LocalProblem make_local(const ScpInstance& inst, const std::vector<char>& row_active,
                        const std::vector<char>& col_free);
LocalProblem make_local(const ScpInstance& inst);

// u_i = min over covering columns of c_j / |column j|.
std::vector<double> initial_multipliers(const LocalProblem& lp);

// Completes `start` into a cover by repeatedly adding the column with the
// smallest max(score_j, 0) per newly covered row (ties: cost per newly
// covered row, then index), then drops redundant columns in decreasing
// cost order. Returns local column indices; empty if some row has no
// column at all.
std::vector<int> greedy_complete(const LocalProblem& lp, const std::vector<double>& score,
                                 const std::vector<int>& start);

double local_cost(const LocalProblem& lp, const std::vector<int>& cols);

struct SubgradientParams {
  int max_iters = 300;
  // Stop as soon as the bound exceeds this value.
  double stop_bound = std::numeric_limits<double>::infinity();
  int heuristic_every = 1;
  double initial_step = 2.0;
  int stall_iters = 20;
};

struct SubgradientOutcome {
  double best_bound = -std::numeric_limits<double>::infinity();
  std::vector<double> best_multipliers;
  std::vector<double> best_reduced_costs;
  std::vector<int> best_solution;  // local indices, empty if none found
  double best_solution_cost = std::numeric_limits<double>::infinity();
  std::vector<double> history;
};

// Maximizes L(u) = sum_i u_i + sum_j min(0, c_j - sum_{i in j} u_i) over
// u >= 0 with Polyak steps against the best known upper bound; the step
// factor halves after `stall_iters` iterations without improvement.
SubgradientOutcome run_subgradient(const LocalProblem& lp, std::vector<double> multipliers,
                                   double upper_bound, const SubgradientParams& params);

// Drops columns whose rows are all covered twice, most expensive first.
void remove_redundant(const ScpInstance& inst, std::vector<int>& cols);

}  // namespace gscp::internal

#endif  // GSCP_SRC_LAGRANGIAN_CORE_H_
