#include "gscp/neural.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <utility>

#include "fixtures.h"
#include "gscp/error.h"
#include "gscp/features.h"
#include "gscp/generator.h"
#include "gscp/instance_io.h"
#include "gscp/solver.h"
#include "neural_fixtures.h"

namespace gscp {
namespace {

using testing::jitter_parameters;
using testing::random_small;
using testing::stripe_labels;
using testing::t3;

ModelConfig small_config(int hidden, std::uint64_t seed) {
  ModelConfig c;
  c.hidden_dim = hidden;
  c.seed = seed;
  return c;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIoFailure;
}

TEST(InitModel, DeterministicInSeed) {
  const auto a = init_model<float>(small_config(16, 3));
  const auto b = init_model<float>(small_config(16, 3));
  const auto c = init_model<float>(small_config(16, 4));
  EXPECT_EQ(a.params.fc_weight, b.params.fc_weight);
  EXPECT_EQ(a.params.sage[0].weight, b.params.sage[0].weight);
  EXPECT_NE(a.params.fc_weight, c.params.fc_weight);
}

TEST(InitModel, ParameterCountAtFullWidth) {
  const auto model = init_model<float>(small_config(1024, 0));
  // SAGE: 14*1024 + 3*1024 and 2048*1024 + 3*1024; FC: 1024^2 + 1024; head: 1025.
  EXPECT_EQ(model.parameter_count(), 3168257u);
  EXPECT_GE(model.parameter_count(), 2100000u);
  EXPECT_LE(model.parameter_count(), 3200000u);
}

TEST(InitModel, ShapesAndBatchNormDefaults) {
  const auto model = init_model<float>(small_config(8, 1));
  ASSERT_EQ(model.params.sage.size(), 2u);
  EXPECT_EQ(model.params.sage[0].weight.rows(), 14);
  EXPECT_EQ(model.params.sage[0].weight.cols(), 8);
  EXPECT_EQ(model.params.sage[1].weight.rows(), 16);
  EXPECT_EQ(model.params.out_weight.rows(), 8);
  for (const auto& layer : model.params.sage) {
    for (float s : layer.bn_scale) EXPECT_EQ(s, 1.0f);
    for (float s : layer.bn_shift) EXPECT_EQ(s, 0.0f);
  }
  for (const auto& v : model.running_var) {
    for (float x : v) EXPECT_GT(x, 0.0f);
  }
  const double limit = std::sqrt(6.0 / (14 + 8));
  for (float w : model.params.sage[0].weight.flat()) EXPECT_LE(std::abs(w), limit);
}

TEST(InitModel, RejectsBadConfig) {
  EXPECT_EQ(code_of([] { init_model<float>(small_config(0, 0)); }), ErrorCode::kInvalidConfig);
  ModelConfig c = small_config(4, 0);
  c.dropout_rate = 1.0;
  EXPECT_EQ(code_of([&] { init_model<float>(c); }), ErrorCode::kInvalidConfig);
  c.dropout_rate = -0.1;
  EXPECT_EQ(code_of([&] { init_model<float>(c); }), ErrorCode::kInvalidConfig);
}

TEST(Forward, EvalIsDeterministicAndInsideUnitInterval) {
  const auto inst = generate(testing::desk_type2(5), "d");
  const auto fi = assemble_features(inst);
  auto model = init_model<float>(small_config(32, 2));
  jitter_parameters(model, 9);
  const auto a = forward(model, fi.graph, fi.features, Mode::kEval);
  const auto b = forward(model, fi.graph, fi.features, Mode::kEval);
  ASSERT_EQ(a.scores.size(), static_cast<std::size_t>(inst.num_cols()));
  EXPECT_EQ(a.scores, b.scores);
  for (double s : a.scores) {
    EXPECT_GT(s, 0.0);
    EXPECT_LT(s, 1.0);
  }
}

TEST(Forward, DropoutOnlyInTrainMode) {
  const auto inst = t3();
  const auto fi = assemble_features(inst);
  auto model = init_model<float>(small_config(16, 2));
  std::mt19937_64 rng(1);
  const auto eval = forward(model, fi.graph, fi.features, Mode::kEval, &rng);
  EXPECT_TRUE(eval.cache.sage[0].dropout_mask.flat().empty());
  const auto train = forward(model, fi.graph, fi.features, Mode::kTrain, &rng);
  int zeros = 0;
  for (float m : train.cache.sage[0].dropout_mask.flat()) {
    EXPECT_TRUE(m == 0.0f || std::abs(m - 1.0f / 0.6f) < 1e-6f);
    zeros += m == 0.0f;
  }
  EXPECT_GT(zeros, 0);
}

TEST(Forward, MeanAggregationOfNeighbors) {
  // Node 0 has neighbors 1 and 2 carrying 2 and 4 in the first feature.
  const std::vector<std::pair<int, int>> edges = {{1, 0}, {2, 0}};
  ScpGraph graph({Layer::kColumn, Layer::kElement, Layer::kElement}, edges);
  FeatureMatrix fm;
  fm.rows = 3;
  fm.values.assign(3 * kFeatureCount, 0.0);
  fm.at(1, 0) = 2.0;
  fm.at(2, 0) = 4.0;
  const auto model = init_model<double>(small_config(4, 0));
  const auto out = forward(model, graph, fm, Mode::kEval);
  EXPECT_DOUBLE_EQ(out.cache.sage[0].concat(0, kFeatureCount + 0), 3.0);
  EXPECT_DOUBLE_EQ(out.cache.sage[0].concat(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(out.cache.sage[0].concat(1, kFeatureCount + 0), 0.0);
}

TEST(Forward, NeighborOrderDoesNotMatter) {
  const auto inst = generate(testing::desk_type2(11), "d");
  const auto fi = assemble_features(inst);
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < fi.graph.node_count(); ++v) {
    for (int u : fi.graph.out_neighbors(v)) edges.emplace_back(v, u);
  }
  std::reverse(edges.begin(), edges.end());
  const ScpGraph reversed(fi.graph.layers(), edges);
  ASSERT_NE(std::vector<int>(reversed.neighbors(1).begin(), reversed.neighbors(1).end()),
            std::vector<int>(fi.graph.neighbors(1).begin(), fi.graph.neighbors(1).end()));
  auto model = init_model<float>(small_config(32, 5));
  jitter_parameters(model, 5);
  const auto a = forward(model, fi.graph, fi.features, Mode::kEval).scores;
  const auto b = forward(model, reversed, fi.features, Mode::kEval).scores;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-6);
}

TEST(Forward, SchemaMismatch) {
  const auto fi = assemble_features(t3());
  ModelConfig c = small_config(4, 0);
  c.in_dim = 6;
  const auto six = init_model<float>(c);
  EXPECT_EQ(code_of([&] { forward(six, fi.graph, fi.features, Mode::kEval); }),
            ErrorCode::kSchemaMismatch);
  auto model = init_model<float>(small_config(4, 0));
  model.feature_schema = "other-schema";
  EXPECT_EQ(code_of([&] { forward(model, fi.graph, fi.features, Mode::kEval); }),
            ErrorCode::kSchemaMismatch);
}

TEST(BatchNorm, TrainModeNormalizesOverNodes) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto inst = generate(testing::desk_type2(seed), "d");
    const auto fi = assemble_features(inst);
    auto model = init_model<double>(small_config(16, seed));
    jitter_parameters(model, seed);
    const auto out = forward(model, fi.graph, fi.features, Mode::kTrain);
    for (const auto& layer : out.cache.sage) {
      const int n = layer.normalized.rows();
      for (int k = 0; k < layer.normalized.cols(); ++k) {
        double mean = 0.0, var = 0.0;
        for (int v = 0; v < n; ++v) mean += layer.normalized(v, k);
        mean /= n;
        for (int v = 0; v < n; ++v) var += std::pow(layer.normalized(v, k) - mean, 2);
        var /= n;
        EXPECT_LE(std::abs(mean), 1e-6);
        EXPECT_NEAR(var, 1.0, 1e-5);
      }
    }
  }
}

TEST(Loss, BceAtLabels) {
  const auto inst = t3();
  LossConfig c;
  c.beta = 0.0;
  const std::vector<double> y = {1, 1, 0};
  EXPECT_LE(loss(y, y, inst, c).value, 1e-6);
}

TEST(Loss, SymmetricBce) {
  const auto inst = build_instance(1, 2, {{0, 1}}, whole_costs({1, 1}), "two");
  LossConfig c;
  c.beta = 0.0;
  EXPECT_NEAR(loss(std::vector<double>{0.5, 0.5}, std::vector<double>{1, 0}, inst, c).value,
              std::log(2.0), 1e-12);
}

TEST(Loss, LiteralPenaltyOnT3) {
  LossConfig c;
  c.alpha = 0.0;
  c.beta = 1.0;
  const std::vector<double> ones = {1, 1, 1};
  // A*y = (1, 2, 2): 3 - 1*2 - 0.4*(-2).
  EXPECT_NEAR(loss(ones, ones, t3(), c).value, 1.8, 1e-12);
}

TEST(Loss, HingedPenaltyOnT3) {
  LossConfig c;
  c.alpha = 0.0;
  c.beta = 1.0;
  c.penalty = PenaltyForm::kHinged;
  const std::vector<double> ones = {1, 1, 1};
  // Rows 2 and 3 are over-covered by one each: 3 + 0.4 * 2.
  EXPECT_NEAR(loss(ones, ones, t3(), c).value, 3.8, 1e-12);
  const std::vector<double> low = {0.2, 0.1, 0.3};
  // A*y = (0.2, 0.3, 0.4): 0.6 + (0.8 + 0.7 + 0.6).
  EXPECT_NEAR(loss(low, ones, t3(), c).value, 0.6 + 2.1, 1e-12);
}

TEST(Loss, WeightsSelectTerms) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = random_small(seed, 8, 10, testing::cost_model_for(seed));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    std::vector<double> s(inst.num_cols());
    for (double& x : s) x = u(rng);
    const auto y = stripe_labels(inst.num_cols(), static_cast<int>(seed));
    double bce = 0.0;
    for (int j = 0; j < inst.num_cols(); ++j) {
      bce -= y[j] * std::log(s[j]) + (1 - y[j]) * std::log(1 - s[j]);
    }
    bce /= inst.num_cols();
    LossConfig c;
    c.beta = 0.0;
    EXPECT_NEAR(loss(s, y, inst, c).value, bce, 1e-12);
    c.alpha = 0.0;
    EXPECT_EQ(loss(s, y, inst, c).value, 0.0);
  }
}

TEST(Loss, LiteralCoverageTermsCollapse) {
  // The two literal coverage sums are negatives of each other, so together
  // they reduce to (omega - gamma) * sum(Ay - 1).
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = random_small(seed, 8, 10, testing::cost_model_for(seed));
    std::mt19937_64 rng(seed + 100);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> s(inst.num_cols());
    for (double& x : s) x = u(rng);
    LossConfig c;
    c.alpha = 0.0;
    c.beta = 1.0;
    c.gamma = 1.0 + seed * 0.1;
    c.omega = 0.4;
    double cost = 0.0, excess = 0.0;
    for (int j = 0; j < inst.num_cols(); ++j) cost += inst.cost(j).value() * s[j];
    for (int i = 0; i < inst.num_rows(); ++i) {
      double ay = 0.0;
      for (int j : inst.row(i)) ay += s[j];
      excess += ay - 1.0;
    }
    EXPECT_NEAR(loss(s, s, inst, c).penalty - cost, (c.omega - c.gamma) * excess, 1e-9);
  }
}

TEST(Loss, GradientMatchesFiniteDifferences) {
  for (auto form : {PenaltyForm::kLiteral, PenaltyForm::kHinged}) {
    const auto inst = random_small(4, 8, 10, testing::SmallCostModel::kWide);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::vector<double> s(inst.num_cols());
    for (double& x : s) x = u(rng);
    const auto y = stripe_labels(inst.num_cols(), 1);
    LossConfig c;
    c.beta = 0.3;
    c.penalty = form;
    const auto lv = loss(s, y, inst, c);
    for (int j = 0; j < inst.num_cols(); ++j) {
      auto up = s, down = s;
      up[j] += 1e-6;
      down[j] -= 1e-6;
      const double numeric = (loss(up, y, inst, c).value - loss(down, y, inst, c).value) / 2e-6;
      EXPECT_NEAR(lv.grad[j], numeric, 1e-6);
    }
  }
}

TEST(Loss, LengthMismatch) {
  EXPECT_EQ(code_of([] {
              loss(std::vector<double>{0.5}, std::vector<double>{1.0}, t3(), LossConfig{});
            }),
            ErrorCode::kLengthMismatch);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  std::vector<double> p = {0.0}, g = {1.0}, m = {0.0}, v = {0.0};
  adam_update<double>(p, g, m, v, 1, AdamConfig{});
  EXPECT_NEAR(p[0], -1e-4, 1e-10);
}

TEST(TrainStep, OverfitsOneInstance) {
  GeneratorConfig gc = testing::desk_type2(3);
  gc.m_range = {12, 12};
  gc.n_range = {20, 20};
  gc.density_range = {0.2, 0.3};
  const auto inst = generate(gc, "overfit");
  const auto fi = assemble_features(inst);
  const auto opt = branch_and_bound(inst);
  std::vector<double> labels(inst.num_cols(), 0.0);
  for (int j : opt.selection) labels[j] = 1.0;

  // Overfitting is checked with regularization off.
  ModelConfig config = small_config(128, 1);
  config.dropout_rate = 0.0;
  auto model = init_model<float>(config);
  auto optimizer = make_optimizer(model);
  std::mt19937_64 rng(1);
  StepResult first, last;
  for (int step = 0; step < 200; ++step) {
    last = train_step(model, optimizer, fi.graph, fi.features, labels, inst, LossConfig{}, rng);
    if (step == 0) first = last;
  }
  EXPECT_LT(last.bce, 0.05);
  EXPECT_LT(last.bce, first.bce);
  EXPECT_EQ(optimizer.step, 200);
}

TEST(TrainStep, SameSeedSameTrajectory) {
  const auto inst = random_small(8, 8, 10, testing::SmallCostModel::kEqual);
  const auto fi = assemble_features(inst);
  const auto labels = stripe_labels(inst.num_cols(), 0);
  auto run = [&] {
    auto model = init_model<float>(small_config(16, 7));
    auto optimizer = make_optimizer(model);
    std::mt19937_64 rng(7);
    for (int step = 0; step < 10; ++step) {
      train_step(model, optimizer, fi.graph, fi.features, labels, inst, LossConfig{}, rng);
    }
    return model;
  };
  const auto a = run();
  const auto b = run();
  EXPECT_EQ(a.params.fc_weight, b.params.fc_weight);
  EXPECT_EQ(a.params.sage[1].weight, b.params.sage[1].weight);
  EXPECT_EQ(a.running_var, b.running_var);
  EXPECT_NE(a.params.fc_weight, init_model<float>(small_config(16, 7)).params.fc_weight);
}

TEST(TrainStep, RunningStatisticsFollowMomentum) {
  const auto inst = t3();
  const auto fi = assemble_features(inst);
  auto model = init_model<double>(small_config(4, 0));
  model.config.dropout_rate = 0.0;
  auto optimizer = make_optimizer(model);
  const auto before = forward(model, fi.graph, fi.features, Mode::kTrain);
  std::mt19937_64 rng(0);
  train_step(model, optimizer, fi.graph, fi.features, std::vector<double>{1, 1, 0}, inst,
             LossConfig{}, rng);
  const int n = fi.graph.node_count();
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(model.running_mean[0][k], 0.1 * before.cache.sage[0].batch_mean[k], 1e-12);
    EXPECT_NEAR(model.running_var[0][k],
                0.9 + 0.1 * before.cache.sage[0].batch_var[k] * n / (n - 1), 1e-12);
  }
}

TEST(TrainStep, NonFiniteLossLeavesModelUntouched) {
  const auto inst = t3();
  const auto fi = assemble_features(inst);
  auto model = init_model<float>(small_config(4, 0));
  model.params.out_bias[0] = std::nanf("");
  const auto snapshot = model.params.fc_weight;
  auto optimizer = make_optimizer(model);
  std::mt19937_64 rng(0);
  EXPECT_EQ(code_of([&] {
              train_step(model, optimizer, fi.graph, fi.features, std::vector<double>{1, 1, 0},
                         inst, LossConfig{}, rng);
            }),
            ErrorCode::kNonFiniteLoss);
  EXPECT_EQ(model.params.fc_weight, snapshot);
  EXPECT_EQ(optimizer.step, 0);
}

TEST(GradCheck, T3Literal) {
  const auto inst = t3();
  const auto fi = assemble_features(inst);
  auto model = init_model<double>(small_config(4, 0));
  // Zero biases can leave activations exactly on a ReLU kink.
  jitter_parameters(model, 0);
  LossConfig c;
  c.beta = 0.1;
  EXPECT_LE(grad_check(model, fi.graph, fi.features, std::vector<double>{1, 1, 0}, inst, c),
            1e-4);
}

TEST(GradCheck, T3HingedAwayFromKinks) {
  const auto inst = t3();
  const auto fi = assemble_features(inst);
  auto model = init_model<double>(small_config(4, 0));
  jitter_parameters(model, 1);
  LossConfig c;
  c.beta = 0.1;
  c.penalty = PenaltyForm::kHinged;
  const auto scores = forward(model, fi.graph, fi.features, Mode::kTrain).scores;
  for (int i = 0; i < inst.num_rows(); ++i) {
    double ay = 0.0;
    for (int j : inst.row(i)) ay += scores[j];
    ASSERT_GT(std::abs(ay - 1.0), 1e-3);
  }
  EXPECT_LE(grad_check(model, fi.graph, fi.features, std::vector<double>{1, 1, 0}, inst, c),
            1e-4);
}

TEST(GradCheck, RandomSmallModels) {
  for (int s = 0; s < 20; ++s) {
    const auto inst = random_small(1000 + s, 6, 8, testing::cost_model_for(s));
    const auto fi = assemble_features(inst);
    auto model = init_model<double>(small_config(2 + s % 7, s));
    jitter_parameters(model, 77 + s);
    const auto labels = stripe_labels(inst.num_cols(), s);
    for (auto form : {PenaltyForm::kLiteral, PenaltyForm::kHinged}) {
      LossConfig c;
      c.beta = 0.1;
      c.penalty = form;
      EXPECT_LE(grad_check(model, fi.graph, fi.features, labels, inst, c), 1e-4)
          << "seed " << s << " form " << penalty_form_name(form);
    }
  }
}

TEST(GradCheck, DetectsCorruptedGradient) {
  const auto inst = t3();
  const auto fi = assemble_features(inst);
  auto model = init_model<double>(small_config(4, 0));
  GradCheckOptions options;
  options.tamper = [](GnnParams<double>& g) { g.fc_weight(1, 2) += 0.05; };
  EXPECT_GE(grad_check(model, fi.graph, fi.features, std::vector<double>{1, 1, 0}, inst,
                       LossConfig{}, options),
            1e-2);
}

TEST(Embeddings, PenultimateLayerPerNode) {
  const auto fi = assemble_features(t3());
  const auto model = init_model<float>(small_config(6, 0));
  const auto emb = extract_embeddings(model, fi.graph, fi.features);
  EXPECT_EQ(emb.rows(), fi.graph.node_count());
  EXPECT_EQ(emb.cols(), 6);
  for (double x : emb.flat()) EXPECT_GE(x, 0.0);
}

TEST(Separation, HandExample) {
  Matrix<double> pts(3, 2);
  pts(1, 1) = 1.0;
  pts(2, 0) = 10.0;
  const std::vector<int> labels = {1, 1, 0};
  const auto s = separation_metrics(pts, labels);
  EXPECT_DOUBLE_EQ(s.intra, 1.0);
  EXPECT_NEAR(s.inter, (10.0 + std::sqrt(101.0)) / 2.0, 1e-12);
  EXPECT_FALSE(s.degenerate);
}

TEST(Separation, DegenerateAndIdentical) {
  Matrix<double> pts(4, 3, 0.5);
  EXPECT_TRUE(separation_metrics(pts, std::vector<int>{1, 1, 1, 1}).degenerate);
  EXPECT_TRUE(separation_metrics(pts, std::vector<int>{0, 0, 0, 0}).degenerate);
  const auto same = separation_metrics(pts, std::vector<int>{1, 1, 0, 0});
  EXPECT_EQ(same.intra, 0.0);
  EXPECT_EQ(same.inter, 0.0);
}

class ModelIo : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("gscp_model_io_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(ModelIo, RoundtripPreservesScoresBitExactly) {
  const auto inst = t3();
  const auto fi = assemble_features(inst);
  auto model = init_model<float>(small_config(8, 3));
  auto optimizer = make_optimizer(model);
  std::mt19937_64 rng(3);
  for (int step = 0; step < 5; ++step) {
    train_step(model, optimizer, fi.graph, fi.features, std::vector<double>{1, 1, 0}, inst,
               LossConfig{}, rng);
  }
  model.fingerprint.epochs = 5;
  const auto path = dir_ / "m.gscp";
  save_model(model, path);
  const auto loaded = load_model(path);
  EXPECT_EQ(forward(model, fi.graph, fi.features, Mode::kEval).scores,
            forward(loaded, fi.graph, fi.features, Mode::kEval).scores);
  EXPECT_EQ(loaded.params.sage[0].weight, model.params.sage[0].weight);
  EXPECT_EQ(loaded.running_var, model.running_var);
  EXPECT_EQ(loaded.fingerprint.epochs, 5);
  EXPECT_EQ(model_to_string(loaded), model_to_string(model));
}

TEST_F(ModelIo, SixFeatureModelLoadsButFailsAtForward) {
  ModelConfig c = small_config(4, 0);
  c.in_dim = 6;
  auto model = init_model<float>(c);
  model.feature_names.pop_back();
  const auto loaded = model_from_string(model_to_string(model));
  const auto fi = assemble_features(t3());
  EXPECT_EQ(code_of([&] { forward(loaded, fi.graph, fi.features, Mode::kEval); }),
            ErrorCode::kSchemaMismatch);
}

TEST_F(ModelIo, TruncatedAndVersionErrors) {
  const std::string text = model_to_string(init_model<float>(small_config(4, 0)));
  EXPECT_EQ(code_of([&] { model_from_string(text.substr(0, text.size() / 2)); }),
            ErrorCode::kMalformedFile);
  std::string other = text;
  other.replace(other.find("gscp-model-1"), 12, "gscp-model-9");
  EXPECT_EQ(code_of([&] { model_from_string(other); }), ErrorCode::kVersionMismatch);
  EXPECT_EQ(code_of([&] { model_from_string("{\"format_version\": \"gscp-model-1\"}"); }),
            ErrorCode::kMalformedFile);
  EXPECT_EQ(code_of([&] { load_model(dir_ / "missing.gscp"); }), ErrorCode::kIoFailure);
}

}  // namespace
}  // namespace gscp
