#ifndef GSCP_TESTS_FIXTURES_H_
#define GSCP_TESTS_FIXTURES_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gscp/generator.h"
#include "gscp/instance.h"

namespace gscp::testing {

// Three elements, three sets: s1 = {1, 2}, s2 = {2, 3}, s3 = {3}.
inline ScpInstance t3(std::initializer_list<long long> costs = {1, 1, 1}) {
  return build_instance(3, 3, {{0}, {0, 1}, {1, 2}}, whole_costs(costs), "T3");
}

// Same structure with costs (1, 3, 1).
inline ScpInstance t3w() { return t3({1, 3, 1}); }

enum class SmallCostModel { kUniform, kEqual, kPoisson, kWide };

// Small random feasible instance for oracle comparisons.
inline ScpInstance random_small(std::uint64_t seed, int max_m, int max_n,
                                SmallCostModel model) {
  std::mt19937_64 rng(seed);
  const int m = std::uniform_int_distribution<int>(2, max_m)(rng);
  const int n = std::uniform_int_distribution<int>(2, max_n)(rng);
  const double d = std::uniform_real_distribution<double>(0.15, 0.5)(rng);
  std::bernoulli_distribution hit(d);
  std::vector<std::vector<int>> cols(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      if (hit(rng)) cols[j].push_back(i);
    }
    if (cols[j].empty()) cols[j].push_back(std::uniform_int_distribution<int>(0, m - 1)(rng));
  }
  std::vector<std::vector<int>> rows(m);
  for (int j = 0; j < n; ++j) {
    for (int i : cols[j]) rows[i].push_back(j);
  }
  for (int i = 0; i < m; ++i) {
    if (rows[i].empty()) rows[i].push_back(std::uniform_int_distribution<int>(0, n - 1)(rng));
  }
  std::vector<long long> costs(n);
  for (auto& c : costs) {
    switch (model) {
      case SmallCostModel::kUniform:
        c = std::uniform_int_distribution<long long>(100, 200)(rng);
        break;
      case SmallCostModel::kEqual:
        c = 1;
        break;
      case SmallCostModel::kPoisson:
        c = std::max<long long>(1, std::poisson_distribution<long long>(20.0)(rng));
        break;
      case SmallCostModel::kWide:
        c = std::uniform_int_distribution<long long>(1, 100)(rng);
        break;
    }
  }
  return build_instance(m, n, std::move(rows), whole_costs(costs),
                        "small-" + std::to_string(seed));
}

inline SmallCostModel cost_model_for(int k) { return static_cast<SmallCostModel>(k % 4); }

// Type-2-style family at desk scale: m 50-100, n 100-200, equal costs.
inline GeneratorConfig desk_type2(std::uint64_t seed) {
  GeneratorConfig c = preset_config(InstanceType::kType2, seed);
  c.instance_type = InstanceType::kCustom;
  c.m_range = {50, 100};
  c.n_range = {100, 200};
  return c;
}

}  // namespace gscp::testing

#endif  // GSCP_TESTS_FIXTURES_H_
