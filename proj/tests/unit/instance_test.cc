#include "gscp/instance.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "fixtures.h"
#include "gscp/error.h"

namespace gscp {
namespace {

using testing::t3;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIoFailure;
}

TEST(BuildInstance, T3HasFiveNonzeros) {
  const ScpInstance inst = t3();
  EXPECT_EQ(inst.name(), "T3");
  EXPECT_EQ(inst.num_rows(), 3);
  EXPECT_EQ(inst.num_cols(), 3);
  EXPECT_EQ(inst.nonzeros(), 5);
  EXPECT_EQ(inst.cols()[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(inst.cols()[1], (std::vector<int>{1, 2}));
  EXPECT_EQ(inst.cols()[2], (std::vector<int>{2}));
}

TEST(BuildInstance, UncoveredElementIsEmptyRow) {
  EXPECT_EQ(code_of([] { build_instance(3, 2, {{0}, {}, {1}}, whole_costs({1, 1}), "x"); }),
            ErrorCode::kEmptyRow);
}

TEST(BuildInstance, DuplicatesAreCanonicalized) {
  const auto a = build_instance(3, 2, {{0, 0}, {1}, {1}}, whole_costs({1, 1}), "x");
  const auto b = build_instance(3, 2, {{0}, {1}, {1}}, whole_costs({1, 1}), "x");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.nonzeros(), 3);
}

TEST(BuildInstance, RejectsBadInputs) {
  EXPECT_EQ(code_of([] { build_instance(2, 2, {{0}, {0}}, whole_costs({1, 1}), "x"); }),
            ErrorCode::kEmptyColumn);
  EXPECT_EQ(code_of([] { build_instance(2, 2, {{0}, {2}}, whole_costs({1, 1}), "x"); }),
            ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code_of([] { build_instance(2, 2, {{0}, {1}}, whole_costs({1, -1}), "x"); }),
            ErrorCode::kNegativeCost);
  EXPECT_EQ(code_of([] { build_instance(2, 2, {{0}, {1}}, whole_costs({1}), "x"); }),
            ErrorCode::kLengthMismatch);
}

TEST(BuildInstance, TransposeConsistentOnRandomInstances) {
  for (int seed = 0; seed < 50; ++seed) {
    const auto inst = testing::random_small(seed, 12, 18, testing::cost_model_for(seed));
    for (int i = 0; i < inst.num_rows(); ++i) {
      for (int j = 0; j < inst.num_cols(); ++j) {
        const auto r = inst.row(i);
        const auto c = inst.col(j);
        const bool in_row = std::find(r.begin(), r.end(), j) != r.end();
        const bool in_col = std::find(c.begin(), c.end(), i) != c.end();
        ASSERT_EQ(in_row, in_col);
      }
    }
  }
}

TEST(Density, CountAndDivide) {
  EXPECT_NEAR(density(t3()), 5.0 / 9.0, 1e-15);
  const auto full = build_instance(2, 2, {{0, 1}, {0, 1}}, whole_costs({1, 1}), "full");
  EXPECT_DOUBLE_EQ(density(full), 1.0);
}

TEST(Evaluate, FeasibleAndInfeasibleSelections) {
  const auto inst = t3();
  const auto a = evaluate(inst, Selection{0, 1});
  EXPECT_TRUE(a.feasible);
  EXPECT_EQ(a.cost, Cost::whole(2));
  EXPECT_TRUE(a.uncovered.empty());

  const auto b = evaluate(inst, Selection{2});
  EXPECT_FALSE(b.feasible);
  EXPECT_EQ(b.cost, Cost::whole(1));
  EXPECT_EQ(b.uncovered, (std::vector<int>{0, 1}));

  const auto c = evaluate(inst, Selection{});
  EXPECT_FALSE(c.feasible);
  EXPECT_EQ(c.cost, Cost());

  EXPECT_EQ(code_of([&] { evaluate(inst, Selection{3}); }), ErrorCode::kIndexOutOfRange);
}

TEST(Evaluate, AllColumnsAlwaysFeasible) {
  for (int seed = 0; seed < 50; ++seed) {
    const auto inst = testing::random_small(seed, 12, 18, testing::cost_model_for(seed));
    std::vector<int> all(inst.num_cols());
    std::iota(all.begin(), all.end(), 0);
    EXPECT_TRUE(evaluate(inst, Selection(all)).feasible);
  }
}

TEST(CostType, ParsesAndPrintsExactDecimals) {
  EXPECT_EQ(Cost::parse("12").units(), 12 * Cost::kScale);
  EXPECT_EQ(Cost::parse("0.25").units(), 250'000);
  EXPECT_EQ(Cost::parse("0.25").to_string(), "0.25");
  EXPECT_EQ(Cost::parse("3.000000").to_string(), "3");
  EXPECT_EQ(Cost::parse("-1.5").to_string(), "-1.5");
  EXPECT_THROW(Cost::parse("1e2"), Error);
  EXPECT_THROW(Cost::parse("0.1234567"), Error);
  EXPECT_THROW(Cost::parse(""), Error);
  EXPECT_EQ(Cost::parse("0.1") + Cost::parse("0.2"), Cost::parse("0.3"));
}

TEST(SelectionType, SortedLexicographicOrder) {
  EXPECT_EQ(Selection({2, 0, 2}).chosen(), (std::vector<int>{0, 2}));
  EXPECT_LT(Selection({0, 1}), Selection({0, 2}));
  EXPECT_LT(Selection({0, 2}), Selection({1}));
}

}  // namespace
}  // namespace gscp
