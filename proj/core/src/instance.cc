#include "gscp/instance.h"

#include <algorithm>
#include <string>

#include "gscp/error.h"

namespace gscp {

namespace {

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

ScpInstance build_instance(int m, int n,
                           std::vector<std::vector<int>> row_lists,
                           std::vector<Cost> costs, std::string name) {
  if (m <= 0 || n <= 0) {
    throw Error(ErrorCode::kLengthMismatch,
                "instance needs m >= 1 and n >= 1");
  }
  if (static_cast<int>(row_lists.size()) != m) {
    throw Error(ErrorCode::kLengthMismatch,
                "expected " + std::to_string(m) + " row lists, got " +
                    std::to_string(row_lists.size()));
  }
  if (static_cast<int>(costs.size()) != n) {
    throw Error(ErrorCode::kLengthMismatch,
                "expected " + std::to_string(n) + " costs, got " +
                    std::to_string(costs.size()));
  }
  for (int j = 0; j < n; ++j) {
    if (costs[j] < Cost()) {
      throw Error(ErrorCode::kNegativeCost,
                  "column " + std::to_string(j) + " has negative cost " +
                      costs[j].to_string());
    }
  }

  ScpInstance inst;
  inst.name_ = std::move(name);
  inst.cols_.assign(n, {});
  for (int i = 0; i < m; ++i) {
    auto& list = row_lists[i];
    sort_unique(list);
    if (list.empty()) {
      throw Error(ErrorCode::kEmptyRow,
                  "row " + std::to_string(i) + " is covered by no column");
    }
    if (list.front() < 0 || list.back() >= n) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "row " + std::to_string(i) + " references a column outside [0, " +
                      std::to_string(n) + ")");
    }
    for (int j : list) inst.cols_[j].push_back(i);
    inst.nonzeros_ += static_cast<long long>(list.size());
  }
  for (int j = 0; j < n; ++j) {
    if (inst.cols_[j].empty()) {
      throw Error(ErrorCode::kEmptyColumn,
                  "column " + std::to_string(j) + " covers no row");
    }
  }
  inst.rows_ = std::move(row_lists);
  inst.costs_ = std::move(costs);
  return inst;
}

std::vector<Cost> whole_costs(std::span<const long long> values) {
  std::vector<Cost> out;
  out.reserve(values.size());
  for (long long v : values) out.push_back(Cost::whole(v));
  return out;
}

std::vector<Cost> whole_costs(std::initializer_list<long long> values) {
  return whole_costs(std::span<const long long>(values.begin(), values.size()));
}

double density(const ScpInstance& inst) {
  return static_cast<double>(inst.nonzeros()) /
         (static_cast<double>(inst.num_rows()) *
          static_cast<double>(inst.num_cols()));
}

Selection::Selection(std::vector<int> chosen) : chosen_(std::move(chosen)) {
  sort_unique(chosen_);
}

bool Selection::contains(int j) const {
  return std::binary_search(chosen_.begin(), chosen_.end(), j);
}

Evaluation evaluate(const ScpInstance& inst, const Selection& selection) {
  Evaluation result;
  std::vector<char> covered(inst.num_rows(), 0);
  for (int j : selection.chosen()) {
    if (j < 0 || j >= inst.num_cols()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "selected column " + std::to_string(j) + " not in [0, " +
                      std::to_string(inst.num_cols()) + ")");
    }
    result.cost += inst.cost(j);
    for (int i : inst.col(j)) covered[i] = 1;
  }
  for (int i = 0; i < inst.num_rows(); ++i) {
    if (!covered[i]) result.uncovered.push_back(i);
  }
  result.feasible = result.uncovered.empty();
  return result;
}

}  // namespace gscp
