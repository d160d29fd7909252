#include "gscp/solver.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fixtures.h"
#include "gscp/error.h"
#include "gscp/generator.h"

namespace gscp {
namespace {

using testing::random_small;
using testing::t3;
using testing::t3w;

TEST(BruteForce, T3AndT3w) {
  const auto a = brute_force(t3());
  EXPECT_EQ(a.objective, Cost::whole(2));
  EXPECT_EQ(a.selection, (Selection{0, 1}));
  EXPECT_EQ(a.status, SolveStatus::kOptimal);
  const auto b = brute_force(t3w());
  EXPECT_EQ(b.objective, Cost::whole(2));
  EXPECT_EQ(b.selection, (Selection{0, 2}));
}

TEST(BruteForce, RejectsTwentyFiveColumns) {
  std::vector<std::vector<int>> rows(1);
  for (int j = 0; j < 25; ++j) rows[0].push_back(j);
  const auto inst = build_instance(1, 25, rows, std::vector<Cost>(25, Cost::whole(1)), "wide");
  try {
    brute_force(inst);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(Greedy, T3PicksOptimum) {
  const auto r = greedy(t3());
  EXPECT_EQ(r.selection, (Selection{0, 1}));
  EXPECT_EQ(r.objective, Cost::whole(2));
  EXPECT_EQ(r.status, SolveStatus::kFeasible);
}

TEST(Greedy, T3wTieGoesToCheaperColumn) {
  // After column 0, columns 1 and 2 each cover one new row; the cheaper
  // column 2 wins the tie.
  const auto r = greedy(t3w());
  EXPECT_EQ(r.selection, (Selection{0, 2}));
  EXPECT_EQ(r.objective, Cost::whole(2));
}

TEST(Greedy, IgnoresCostWhenCountsDiffer) {
  // Column 2 covers everything but costs 10; {0, 1} costs 2.
  const auto inst =
      build_instance(3, 3, {{0, 2}, {0, 2}, {1, 2}}, whole_costs({1, 1, 10}), "blind");
  const auto r = greedy(inst);
  EXPECT_EQ(r.selection, (Selection{2}));
  EXPECT_EQ(r.objective, Cost::whole(10));
  EXPECT_EQ(brute_force(inst).objective, Cost::whole(2));
}

TEST(Greedy, SingleCoveringColumn) {
  const auto inst =
      build_instance(3, 3, {{0, 1}, {1, 2}, {1}}, whole_costs({1, 5, 1}), "one");
  EXPECT_EQ(greedy(inst).selection, (Selection{1}));
}

TEST(Greedy, ChvatalBoundOnEqualCosts) {
  for (int seed = 0; seed < 100; ++seed) {
    const auto inst = random_small(seed, 12, 18, testing::SmallCostModel::kEqual);
    const auto g = greedy(inst);
    const auto opt = brute_force(inst);
    EXPECT_TRUE(evaluate(inst, g.selection).feasible);
    EXPECT_LE(g.objective.value(),
              (std::log(inst.num_rows()) + 1.0) * opt.objective.value() + 1e-12);
  }
}

TEST(Lagrangian, ZeroMultipliersGiveZeroBound) {
  // The first iterate uses the cost-ratio multipliers, but L(0) = 0 is the
  // floor the reported bound can never drop below.
  const auto r = lagrangian(t3(), 1);
  EXPECT_GE(r.lower_bound, 0.0);
}

TEST(Lagrangian, T3wSandwich) {
  const auto r = lagrangian(t3w());
  EXPECT_LE(r.lower_bound, 2.0 + 1e-9);
  EXPECT_GE(r.heuristic.objective.value(), 2.0);
  EXPECT_TRUE(evaluate(t3w(), r.heuristic.selection).feasible);
}

TEST(Lagrangian, BoundHistoryIsMonotone) {
  for (int seed = 0; seed < 20; ++seed) {
    const auto inst = random_small(seed, 12, 18, testing::cost_model_for(seed));
    const auto r = lagrangian(inst);
    for (std::size_t k = 1; k < r.bound_history.size(); ++k) {
      ASSERT_GE(r.bound_history[k], r.bound_history[k - 1]);
    }
  }
}

TEST(Lagrangian, SandwichAndBeatsGreedyMostly) {
  int beats = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto inst = random_small(seed, 12, 18, testing::cost_model_for(seed));
    const auto opt = brute_force(inst).objective.value();
    const auto r = lagrangian(inst);
    EXPECT_LE(r.lower_bound, opt + 1e-9);
    EXPECT_LE(opt, r.heuristic.objective.value());
    if (r.heuristic.objective <= greedy(inst).objective) ++beats;
  }
  EXPECT_GE(beats, 80);
}

TEST(BranchAndBound, T3Optimal) {
  const auto r = branch_and_bound(t3());
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.objective, Cost::whole(2));
  EXPECT_EQ(r.selection, (Selection{0, 1}));
  EXPECT_DOUBLE_EQ(r.lower_bound, 2.0);
}

TEST(BranchAndBound, MatchesBruteForce) {
  for (int seed = 0; seed < 200; ++seed) {
    const auto inst = random_small(1000 + seed, 12, 18, testing::cost_model_for(seed));
    const auto bb = branch_and_bound(inst);
    const auto bf = brute_force(inst);
    ASSERT_EQ(bb.status, SolveStatus::kOptimal);
    ASSERT_EQ(bb.objective, bf.objective) << "seed " << seed;
    ASSERT_TRUE(evaluate(inst, bb.selection).feasible);
    ASSERT_EQ(evaluate(inst, bb.selection).cost, bb.objective);
  }
}

TEST(BranchAndBound, WarmStartDoesNotChangeOptimum) {
  for (int seed = 0; seed < 30; ++seed) {
    const auto inst = random_small(2000 + seed, 12, 18, testing::cost_model_for(seed));
    const auto cold = branch_and_bound(inst);
    SolveOptions opts;
    const auto g = greedy(inst);
    opts.warm_start = g.selection;
    const auto warm = branch_and_bound(inst, opts);
    EXPECT_EQ(warm.objective, cold.objective);
    ASSERT_FALSE(warm.incumbent_trace.empty());
    EXPECT_LE(warm.incumbent_trace.front().objective, g.objective);
  }
}

TEST(BranchAndBound, InfeasibleWarmStartRejected) {
  SolveOptions opts;
  opts.warm_start = Selection{2};
  try {
    branch_and_bound(t3(), opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleWarmStart);
  }
}

TEST(BranchAndBound, TraceStrictlyImprovingAndMonotone) {
  for (int seed = 0; seed < 5; ++seed) {
    const auto inst = generate(testing::desk_type2(seed), "trace");
    const auto r = branch_and_bound(inst);
    ASSERT_EQ(r.status, SolveStatus::kOptimal);
    for (std::size_t k = 1; k < r.incumbent_trace.size(); ++k) {
      EXPECT_LT(r.incumbent_trace[k].objective, r.incumbent_trace[k - 1].objective);
      EXPECT_GE(r.incumbent_trace[k].elapsed_ms, r.incumbent_trace[k - 1].elapsed_ms);
    }
    EXPECT_EQ(r.incumbent_trace.back().objective, r.objective);
  }
}

TEST(BranchAndBound, NodeLimitReportsTimedOut) {
  const auto inst = generate(preset_config(InstanceType::kType2, 3), "big");
  SolveOptions opts;
  opts.node_limit = 2;
  const auto r = branch_and_bound(inst, opts);
  if (r.status != SolveStatus::kOptimal) {
    EXPECT_EQ(r.status, SolveStatus::kTimedOut);
    EXPECT_LE(r.lower_bound, r.objective.value() + 1e-9);
  }
  EXPECT_TRUE(evaluate(inst, r.selection).feasible);
}

TEST(Restrict, KeepsOptimalSupport) {
  const auto inst = t3();
  const auto r = restrict_columns(inst, {0, 1});
  ASSERT_TRUE(r.sub_instance.has_value());
  const auto sub = branch_and_bound(*r.sub_instance);
  EXPECT_EQ(lift(sub.selection, r.index_map), (Selection{0, 1}));
}

TEST(Restrict, ReportsUncoveredRows) {
  const auto r = restrict_columns(t3(), {2});
  EXPECT_FALSE(r.sub_instance.has_value());
  EXPECT_EQ(r.uncovered_rows, (std::vector<int>{0, 1}));
}

TEST(Restrict, SupersetOfOptimalSupportKeepsOptimum) {
  for (int seed = 0; seed < 100; ++seed) {
    const auto inst = random_small(3000 + seed, 10, 16, testing::cost_model_for(seed));
    const auto opt = brute_force(inst);
    std::vector<int> keep = opt.selection.chosen();
    std::mt19937_64 rng(seed);
    for (int j = 0; j < inst.num_cols(); ++j) {
      if (std::bernoulli_distribution(0.3)(rng)) keep.push_back(j);
    }
    const auto r = restrict_columns(inst, keep);
    ASSERT_TRUE(r.sub_instance.has_value());
    const auto sub = brute_force(*r.sub_instance);
    EXPECT_EQ(sub.objective, opt.objective);
    const Selection lifted = lift(sub.selection, r.index_map);
    EXPECT_TRUE(evaluate(inst, lifted).feasible);
    EXPECT_EQ(project(lifted, r.index_map), sub.selection);
  }
}

TEST(Restrict, LiftFeasibleIffSubFeasible) {
  for (int seed = 0; seed < 50; ++seed) {
    const auto inst = random_small(4000 + seed, 10, 16, testing::cost_model_for(seed));
    const auto cols = random_restrict(inst, 80, seed);
    const auto r = restrict_columns(inst, cols);
    if (!r.sub_instance) continue;
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<int> pick;
      for (int k = 0; k < r.sub_instance->num_cols(); ++k) {
        if (std::bernoulli_distribution(0.5)(rng)) pick.push_back(k);
      }
      const Selection sub(pick);
      EXPECT_EQ(evaluate(*r.sub_instance, sub).feasible,
                evaluate(inst, lift(sub, r.index_map)).feasible);
    }
  }
}

TEST(RandomRestrict, CountsAndDeterminism) {
  std::vector<std::vector<int>> rows(1);
  for (int j = 0; j < 1000; ++j) rows[0].push_back(j);
  const auto inst =
      build_instance(1, 1000, rows, std::vector<Cost>(1000, Cost::whole(1)), "wide");
  EXPECT_EQ(random_restrict(inst, 20, 1).size(), 200u);
  EXPECT_EQ(random_restrict(inst, 100, 1).size(), 1000u);
  EXPECT_EQ(random_restrict(inst, 20, 9), random_restrict(inst, 20, 9));
  EXPECT_NE(random_restrict(inst, 20, 9), random_restrict(inst, 20, 10));
  const auto cols = random_restrict(inst, 50, 3);
  EXPECT_TRUE(std::is_sorted(cols.begin(), cols.end()));
  EXPECT_EQ(std::adjacent_find(cols.begin(), cols.end()), cols.end());
  EXPECT_THROW(random_restrict(inst, 0, 1), Error);
}

TEST(ExportLp, T3Transcription) {
  const std::string lp = lp_string(t3());
  EXPECT_NE(lp.find("Minimize\n obj: 1 x1 + 1 x2 + 1 x3\n"), std::string::npos);
  EXPECT_NE(lp.find("Subject To\n"), std::string::npos);
  EXPECT_NE(lp.find("r2: x2 + x3 >= 1"), std::string::npos);
  EXPECT_NE(lp.find("Binary\n x1\n x2\n x3\n"), std::string::npos);
  EXPECT_NE(lp.find("End\n"), std::string::npos);
}

}  // namespace
}  // namespace gscp
