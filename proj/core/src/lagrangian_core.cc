#include "lagrangian_core.h"

#include <algorithm>
#include <cmath>

namespace gscp::internal {

LocalProblem make_local(const ScpInstance& inst, const std::vector<char>& row_active,
                        const std::vector<char>& col_free) {
  LocalProblem lp;
  std::vector<int> local_row(inst.num_rows(), -1);
  for (int i = 0; i < inst.num_rows(); ++i) {
    if (row_active[i]) {
      local_row[i] = static_cast<int>(lp.row_ids.size());
      lp.row_ids.push_back(i);
    }
  }
  lp.row_cols.resize(lp.row_ids.size());
  for (int j = 0; j < inst.num_cols(); ++j) {
    if (!col_free[j]) continue;
    std::vector<int> rows;
    for (int i : inst.col(j)) {
      if (local_row[i] >= 0) rows.push_back(local_row[i]);
    }
    if (rows.empty()) continue;
    const int local = static_cast<int>(lp.col_ids.size());
    lp.col_ids.push_back(j);
    lp.cost.push_back(inst.cost(j).value());
    for (int r : rows) lp.row_cols[r].push_back(local);
    lp.col_rows.push_back(std::move(rows));
  }
  return lp;
}

LocalProblem make_local(const ScpInstance& inst) {
  return make_local(inst, std::vector<char>(inst.num_rows(), 1),
                    std::vector<char>(inst.num_cols(), 1));
}

std::vector<double> initial_multipliers(const LocalProblem& lp) {
  std::vector<double> u(lp.num_rows(), 0.0);
  for (int r = 0; r < lp.num_rows(); ++r) {
    double best = std::numeric_limits<double>::infinity();
    for (int c : lp.row_cols[r]) {
      best = std::min(best, lp.cost[c] / static_cast<double>(lp.col_rows[c].size()));
    }
    u[r] = std::isfinite(best) ? best : 0.0;
  }
  return u;
}

double local_cost(const LocalProblem& lp, const std::vector<int>& cols) {
  double sum = 0.0;
  for (int c : cols) sum += lp.cost[c];
  return sum;
}

std::vector<int> greedy_complete(const LocalProblem& lp, const std::vector<double>& score,
                                 const std::vector<int>& start) {
  const int rows = lp.num_rows();
  const int cols = lp.num_cols();
  std::vector<int> cover(rows, 0);
  std::vector<char> chosen(cols, 0);
  std::vector<int> fresh(cols);
  for (int c = 0; c < cols; ++c) fresh[c] = static_cast<int>(lp.col_rows[c].size());
  int uncovered = rows;
  auto take = [&](int c) {
    chosen[c] = 1;
    for (int r : lp.col_rows[c]) {
      if (cover[r]++ == 0) {
        --uncovered;
        for (int other : lp.row_cols[r]) --fresh[other];
      }
    }
  };
  for (int c : start) {
    if (!chosen[c]) take(c);
  }
  while (uncovered > 0) {
    int best = -1;
    double best_score = 0.0;
    double best_ratio = 0.0;
    for (int c = 0; c < cols; ++c) {
      if (chosen[c] || fresh[c] == 0) continue;
      const double k = static_cast<double>(fresh[c]);
      const double s = std::max(score[c], 0.0) / k;
      const double ratio = lp.cost[c] / k;
      if (best < 0 || s < best_score || (s == best_score && ratio < best_ratio)) {
        best = c;
        best_score = s;
        best_ratio = ratio;
      }
    }
    if (best < 0) return {};
    take(best);
  }

  std::vector<int> picked;
  for (int c = 0; c < cols; ++c) {
    if (chosen[c]) picked.push_back(c);
  }
  std::stable_sort(picked.begin(), picked.end(), [&](int a, int b) {
    if (lp.cost[a] != lp.cost[b]) return lp.cost[a] > lp.cost[b];
    return a > b;
  });
  std::vector<int> kept;
  for (int c : picked) {
    bool redundant = true;
    for (int r : lp.col_rows[c]) {
      if (cover[r] < 2) {
        redundant = false;
        break;
      }
    }
    if (redundant) {
      for (int r : lp.col_rows[c]) --cover[r];
    } else {
      kept.push_back(c);
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

SubgradientOutcome run_subgradient(const LocalProblem& lp, std::vector<double> u,
                                   double upper_bound, const SubgradientParams& params) {
  SubgradientOutcome out;
  const int rows = lp.num_rows();
  const int cols = lp.num_cols();
  std::vector<double> reduced(cols);
  std::vector<double> gradient(rows);
  std::vector<int> negative;
  double step = params.initial_step;
  int since_improve = 0;
  double ub = upper_bound;

  for (int it = 0; it < params.max_iters; ++it) {
    double bound = 0.0;
    for (int r = 0; r < rows; ++r) bound += u[r];
    negative.clear();
    std::fill(gradient.begin(), gradient.end(), 1.0);
    for (int c = 0; c < cols; ++c) {
      double rc = lp.cost[c];
      for (int r : lp.col_rows[c]) rc -= u[r];
      reduced[c] = rc;
      if (rc < 0.0) {
        bound += rc;
        negative.push_back(c);
        for (int r : lp.col_rows[c]) gradient[r] -= 1.0;
      }
    }
    if (bound > out.best_bound) {
      const bool real_gain = bound > out.best_bound + 1e-9 * (1.0 + std::abs(out.best_bound));
      out.best_bound = bound;
      out.best_multipliers = u;
      out.best_reduced_costs = reduced;
      since_improve = real_gain ? 0 : since_improve + 1;
    } else {
      ++since_improve;
    }
    out.history.push_back(out.best_bound);
    if (out.best_bound > params.stop_bound) break;

    if (it % params.heuristic_every == 0 || it + 1 == params.max_iters ||
        !std::isfinite(ub)) {
      std::vector<int> sol = greedy_complete(lp, reduced, negative);
      if (!sol.empty() || rows == 0) {
        const double cost = local_cost(lp, sol);
        if (cost < out.best_solution_cost) {
          out.best_solution_cost = cost;
          out.best_solution = std::move(sol);
        }
        ub = std::min(ub, cost);
      }
    }
    if (ub <= out.best_bound + 1e-9 * (1.0 + std::abs(ub))) break;

    double norm2 = 0.0;
    for (double g : gradient) norm2 += g * g;
    if (norm2 == 0.0) break;
    if (since_improve >= params.stall_iters) {
      step *= 0.5;
      since_improve = 0;
      if (step < 1e-4) break;
    }
    const double t = step * (ub - bound) / norm2;
    for (int r = 0; r < rows; ++r) u[r] = std::max(0.0, u[r] + t * gradient[r]);
  }
  return out;
}

void remove_redundant(const ScpInstance& inst, std::vector<int>& cols) {
  std::vector<int> cover(inst.num_rows(), 0);
  for (int j : cols) {
    for (int i : inst.col(j)) ++cover[i];
  }
  std::vector<int> order = cols;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (inst.cost(a) != inst.cost(b)) return inst.cost(a) > inst.cost(b);
    return a > b;
  });
  std::vector<int> kept;
  for (int j : order) {
    bool redundant = true;
    for (int i : inst.col(j)) {
      if (cover[i] < 2) {
        redundant = false;
        break;
      }
    }
    if (redundant) {
      for (int i : inst.col(j)) --cover[i];
    } else {
      kept.push_back(j);
    }
  }
  std::sort(kept.begin(), kept.end());
  cols = std::move(kept);
}

}  // namespace gscp::internal
