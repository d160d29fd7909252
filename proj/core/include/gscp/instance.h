#ifndef GSCP_INSTANCE_H_
#define GSCP_INSTANCE_H_

#include <span>
#include <string>
#include <vector>

#include "gscp/cost.h"

namespace gscp {

// A set-cover instance: m universe elements (rows) and n candidate sets
// (columns), held as a sparse covering matrix in both orientations.
//
// Instances are immutable once built and are always feasible: every row is
// covered by at least one column and every column covers at least one row.
// Row and column lists are sorted, duplicate-free and mutual transposes.
class ScpInstance {
 public:
  const std::string& name() const { return name_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_cols() const { return static_cast<int>(cols_.size()); }

  // Columns covering row `i`.
  std::span<const int> row(int i) const { return rows_[i]; }
  // Rows covered by column `j`.
  std::span<const int> col(int j) const { return cols_[j]; }
  const std::vector<std::vector<int>>& rows() const { return rows_; }
  const std::vector<std::vector<int>>& cols() const { return cols_; }

  Cost cost(int j) const { return costs_[j]; }
  const std::vector<Cost>& costs() const { return costs_; }

  // Number of non-zero entries q of the covering matrix.
  long long nonzeros() const { return nonzeros_; }

  friend bool operator==(const ScpInstance&, const ScpInstance&) = default;

 private:
  friend ScpInstance build_instance(int m, int n,
                                    std::vector<std::vector<int>> row_lists,
                                    std::vector<Cost> costs, std::string name);

  std::string name_;
  std::vector<std::vector<int>> rows_;
  std::vector<std::vector<int>> cols_;
  std::vector<Cost> costs_;
  long long nonzeros_ = 0;
};

// Canonicalizes (sorts, deduplicates, builds the transpose) and validates.
// Throws Error with kEmptyRow, kEmptyColumn, kIndexOutOfRange,
// kNegativeCost or kLengthMismatch.
ScpInstance build_instance(int m, int n,
                           std::vector<std::vector<int>> row_lists,
                           std::vector<Cost> costs, std::string name);

std::vector<Cost> whole_costs(std::span<const long long> values);
std::vector<Cost> whole_costs(std::initializer_list<long long> values);

// d = q / (m * n).
double density(const ScpInstance& inst);

// A set of chosen column indices, kept sorted and duplicate-free.
class Selection {
 public:
  Selection() = default;
  explicit Selection(std::vector<int> chosen);
  Selection(std::initializer_list<int> chosen)
      : Selection(std::vector<int>(chosen)) {}

  const std::vector<int>& chosen() const { return chosen_; }
  std::size_t size() const { return chosen_.size(); }
  bool empty() const { return chosen_.empty(); }
  auto begin() const { return chosen_.begin(); }
  auto end() const { return chosen_.end(); }
  bool contains(int j) const;

  friend bool operator==(const Selection&, const Selection&) = default;
  // Lexicographic order on the sorted index lists.
  friend auto operator<=>(const Selection&, const Selection&) = default;

 private:
  std::vector<int> chosen_;
};

struct Evaluation {
  bool feasible = false;
  Cost cost;
  std::vector<int> uncovered;
};

// Cost is summed over the chosen columns whether or not they cover.
// Throws Error(kIndexOutOfRange) for indices outside [0, n).
Evaluation evaluate(const ScpInstance& inst, const Selection& selection);

}  // namespace gscp

#endif  // GSCP_INSTANCE_H_
