#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "gscp/error.h"
#include "gscp/solver.h"
#include "lagrangian_core.h"

namespace gscp {

namespace {

using Clock = std::chrono::steady_clock;
constexpr long long kClockCheckInterval = 256;

struct Node {
  long long id = 0;
  double bound = 0.0;
  std::vector<int> included;
  std::vector<int> excluded;
  // Warm-start multipliers indexed by original row; empty at the root.
  std::vector<float> multipliers;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

std::int64_t gcd_of_costs(const ScpInstance& inst) {
  std::int64_t g = 0;
  for (Cost c : inst.costs()) g = std::gcd(g, c.units());
  return g == 0 ? 1 : g;
}

class BranchAndBound {
 public:
  BranchAndBound(const ScpInstance& inst, const SolveOptions& options)
      : inst_(inst), options_(options), quantum_(gcd_of_costs(inst)) {}

  SolveResult run() {
    start_ = Clock::now();
    if (options_.warm_start) {
      const Evaluation eval = evaluate(inst_, *options_.warm_start);
      if (!eval.feasible) {
        throw Error(ErrorCode::kInfeasibleWarmStart,
                    "warm start leaves " + std::to_string(eval.uncovered.size()) +
                        " rows uncovered");
      }
      offer(options_.warm_start->chosen());
    }
    {
      // Cost-aware greedy gives an incumbent before the first bound.
      const internal::LocalProblem lp = internal::make_local(inst_);
      std::vector<int> local = internal::greedy_complete(lp, lp.cost, {});
      std::vector<int> cols;
      for (int c : local) cols.push_back(lp.col_ids[c]);
      offer(cols);
    }

    Node root;
    root.id = next_id_++;
    root.bound = 0.0;
    queue_.push(std::move(root));

    bool stopped = false;
    while (!queue_.empty()) {
      if (limits_hit()) {
        stopped = true;
        break;
      }
      Node node = queue_.top();
      queue_.pop();
      if (prunable(node.bound)) continue;
      ++result_.nodes_explored;
      process(node);
    }

    result_.wall_ms = elapsed_ms();
    if (stopped) {
      double open_bound = std::numeric_limits<double>::infinity();
      if (!queue_.empty()) open_bound = queue_.top().bound;
      result_.status = SolveStatus::kTimedOut;
      result_.lower_bound = std::min(open_bound, result_.objective.value());
    } else {
      result_.status = SolveStatus::kOptimal;
      result_.lower_bound = result_.objective.value();
    }
    return result_;
  }

 private:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

  bool limits_hit() {
    if (options_.node_limit > 0 && result_.nodes_explored >= options_.node_limit) {
      return true;
    }
    if (options_.timeout_ms > 0 && result_.nodes_explored % kClockCheckInterval == 0 &&
        result_.nodes_explored > 0 && elapsed_ms() >= static_cast<double>(options_.timeout_ms)) {
      return true;
    }
    return false;
  }

  // Solution costs are multiples of the cost gcd, so a subtree whose bound
  // exceeds incumbent - gcd cannot hold a strictly better solution.
  double prune_threshold() const {
    if (!has_incumbent_) return std::numeric_limits<double>::infinity();
    const double inc = result_.objective.value();
    const double q = static_cast<double>(quantum_) / static_cast<double>(Cost::kScale);
    return inc - q + 1e-9 * (1.0 + std::abs(inc));
  }

  bool prunable(double bound) const { return bound > prune_threshold(); }

  void offer(std::vector<int> cols) {
    internal::remove_redundant(inst_, cols);
    Selection sel(std::move(cols));
    const Evaluation eval = evaluate(inst_, sel);
    if (!eval.feasible) return;
    const bool better = !has_incumbent_ || eval.cost < result_.objective;
    const bool tie_smaller = has_incumbent_ && eval.cost == result_.objective &&
                             sel < result_.selection;
    if (!better && !tie_smaller) return;
    result_.selection = std::move(sel);
    result_.objective = eval.cost;
    has_incumbent_ = true;
    if (better) result_.incumbent_trace.push_back({elapsed_ms(), eval.cost});
  }

  void process(const Node& node) {
    const int m = inst_.num_rows();
    const int n = inst_.num_cols();
    std::vector<char> row_active(m, 1);
    std::vector<char> col_free(n, 1);
    Cost fixed;
    for (int j : node.included) {
      col_free[j] = 0;
      fixed += inst_.cost(j);
      for (int i : inst_.col(j)) row_active[i] = 0;
    }
    for (int j : node.excluded) col_free[j] = 0;

    internal::LocalProblem lp = internal::make_local(inst_, row_active, col_free);
    if (lp.num_rows() == 0) {
      offer(node.included);
      return;
    }
    for (const auto& cols : lp.row_cols) {
      if (cols.empty()) return;  // some row can no longer be covered
    }

    std::vector<double> u(lp.num_rows());
    if (node.multipliers.empty()) {
      u = internal::initial_multipliers(lp);
    } else {
      for (int r = 0; r < lp.num_rows(); ++r) u[r] = node.multipliers[lp.row_ids[r]];
    }
    const double fixed_value = fixed.value();
    internal::SubgradientParams params;
    const bool root = node.included.empty() && node.excluded.empty();
    params.max_iters = root ? options_.root_subgradient_iters : options_.node_subgradient_iters;
    params.heuristic_every = root ? 1 : 10;
    params.stop_bound = prune_threshold() - fixed_value;
    params.initial_step = root ? 2.0 : 0.5;
    params.stall_iters = root ? 20 : 5;
    const double ub = has_incumbent_ ? result_.objective.value() - fixed_value
                                     : std::numeric_limits<double>::infinity();
    internal::SubgradientOutcome sg = internal::run_subgradient(lp, u, ub, params);

    if (!sg.best_solution.empty()) {
      std::vector<int> cols = node.included;
      for (int c : sg.best_solution) cols.push_back(lp.col_ids[c]);
      offer(std::move(cols));
    }
    const double bound = std::max(node.bound, fixed_value + sg.best_bound);
    if (prunable(bound)) return;

    // Reduced-cost fixing against the prune threshold.
    const double threshold = prune_threshold() - fixed_value;
    const double lagr = sg.best_bound;
    const auto& rc = sg.best_reduced_costs;
    std::vector<int> included = node.included;
    std::vector<int> excluded = node.excluded;
    std::vector<char> local_out(lp.num_cols(), 0);
    std::vector<char> local_in(lp.num_cols(), 0);
    for (int c = 0; c < lp.num_cols(); ++c) {
      if (rc[c] >= 0.0 && lagr + rc[c] > threshold) {
        local_out[c] = 1;
        excluded.push_back(lp.col_ids[c]);
      } else if (rc[c] < 0.0 && lagr - rc[c] > threshold) {
        local_in[c] = 1;
        included.push_back(lp.col_ids[c]);
      }
    }

    // Branch on the row (uncovered after fixing) with the fewest free columns.
    std::vector<char> covered(lp.num_rows(), 0);
    for (int c = 0; c < lp.num_cols(); ++c) {
      if (!local_in[c]) continue;
      for (int r : lp.col_rows[c]) covered[r] = 1;
    }
    int branch_row = -1;
    int branch_width = std::numeric_limits<int>::max();
    for (int r = 0; r < lp.num_rows(); ++r) {
      if (covered[r]) continue;
      int width = 0;
      for (int c : lp.row_cols[r]) {
        if (!local_out[c] && !local_in[c]) ++width;
      }
      if (width == 0) return;  // fixing proved the node infeasible
      if (width < branch_width) {
        branch_width = width;
        branch_row = r;
      }
    }

    std::vector<float> child_u(inst_.num_rows(), 0.0f);
    for (int r = 0; r < lp.num_rows(); ++r) {
      child_u[lp.row_ids[r]] = static_cast<float>(sg.best_multipliers[r]);
    }
    if (branch_row < 0) {
      offer(included);
      return;
    }
    std::vector<int> siblings;
    for (int c : lp.row_cols[branch_row]) {
      if (local_out[c] || local_in[c]) continue;
      Node child;
      child.id = next_id_++;
      child.included = included;
      child.included.push_back(lp.col_ids[c]);
      child.excluded = excluded;
      child.excluded.insert(child.excluded.end(), siblings.begin(), siblings.end());
      child.bound = std::max(bound, fixed_value + lagr + std::max(0.0, rc[c]));
      child.multipliers = child_u;
      siblings.push_back(lp.col_ids[c]);
      if (prunable(child.bound)) continue;
      queue_.push(std::move(child));
    }
  }

  const ScpInstance& inst_;
  const SolveOptions& options_;
  const std::int64_t quantum_;
  Clock::time_point start_;
  SolveResult result_;
  bool has_incumbent_ = false;
  long long next_id_ = 0;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue_;
};

}  // namespace

SolveResult branch_and_bound(const ScpInstance& inst, const SolveOptions& options) {
  return BranchAndBound(inst, options).run();
}

}  // namespace gscp
