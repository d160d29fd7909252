#include "gscp/generator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gscp/error.h"

namespace gscp {

namespace {

constexpr int kMaxDraws = 20;
constexpr double kDensitySlack = 0.01;

struct CostSampler {
  std::mt19937_64& rng;

  Cost operator()(const UniformIntCost& c) const {
    return Cost::whole(std::uniform_int_distribution<long long>(c.lo, c.hi)(rng));
  }
  Cost operator()(const EqualCost& c) const { return Cost::whole(c.value); }
  Cost operator()(const PoissonCost& c) const {
    long long v = std::poisson_distribution<long long>(c.lambda)(rng);
    // Zero-cost sets make the objective degenerate.
    return Cost::whole(v == 0 ? 1 : v);
  }
};

}  // namespace

std::string instance_type_name(InstanceType type) {
  switch (type) {
    case InstanceType::kType1: return "type1";
    case InstanceType::kType2: return "type2";
    case InstanceType::kType3: return "type3";
    case InstanceType::kType4: return "type4";
    case InstanceType::kCustom: return "custom";
  }
  return "custom";
}

InstanceType parse_instance_type(const std::string& text) {
  if (text == "1" || text == "type1") return InstanceType::kType1;
  if (text == "2" || text == "type2") return InstanceType::kType2;
  if (text == "3" || text == "type3") return InstanceType::kType3;
  if (text == "4" || text == "type4") return InstanceType::kType4;
  if (text == "custom") return InstanceType::kCustom;
  throw Error(ErrorCode::kInvalidConfig, "unknown instance type '" + text + "'");
}

GeneratorConfig preset_config(InstanceType type, std::uint64_t seed) {
  GeneratorConfig c;
  c.instance_type = type;
  c.seed = seed;
  switch (type) {
    case InstanceType::kType1:
      c.m_range = {100, 400};
      c.n_range = {100, 1000};
      c.density_range = {0.22, 0.29};
      c.cost_model = UniformIntCost{100, 200};
      break;
    case InstanceType::kType2:
      c.m_range = {100, 300};
      c.n_range = {100, 500};
      c.density_range = {0.16, 0.28};
      c.cost_model = EqualCost{1};
      break;
    case InstanceType::kType3:
      c.m_range = {200, 350};
      c.n_range = {300, 350};
      c.density_range = {0.13, 0.18};
      c.cost_model = PoissonCost{20.0};
      break;
    case InstanceType::kType4:
      c.m_range = {200, 250};
      c.n_range = {1000, 3000};
      c.density_range = {0.04, 0.05};
      c.cost_model = PoissonCost{20.0};
      break;
    case InstanceType::kCustom:
      throw Error(ErrorCode::kInvalidConfig, "custom type has no preset");
  }
  return c;
}

void validate(const GeneratorConfig& config) {
  if (config.m_range.lo < 1 || config.m_range.lo > config.m_range.hi) {
    throw Error(ErrorCode::kInvalidConfig, "bad m range");
  }
  if (config.n_range.lo < 1 || config.n_range.lo > config.n_range.hi) {
    throw Error(ErrorCode::kInvalidConfig, "bad n range");
  }
  const RealRange& d = config.density_range;
  if (!(d.lo > 0.0) || d.hi > 1.0 || d.lo > d.hi) {
    throw Error(ErrorCode::kInvalidConfig, "density range must lie in (0, 1]");
  }
  if (const auto* p = std::get_if<PoissonCost>(&config.cost_model)) {
    if (!(p->lambda > 0.0)) {
      throw Error(ErrorCode::kInvalidConfig, "Poisson lambda must be > 0");
    }
  }
  if (const auto* u = std::get_if<UniformIntCost>(&config.cost_model)) {
    if (u->lo < 0 || u->lo > u->hi) {
      throw Error(ErrorCode::kInvalidConfig, "bad uniform cost range");
    }
  }
  if (const auto* e = std::get_if<EqualCost>(&config.cost_model)) {
    if (e->value < 0) throw Error(ErrorCode::kInvalidConfig, "negative cost");
  }
}

ScpInstance generate(const GeneratorConfig& config, const std::string& name) {
  validate(config);
  std::mt19937_64 rng(config.seed);
  const int m = std::uniform_int_distribution<int>(config.m_range.lo,
                                                   config.m_range.hi)(rng);
  const int n = std::uniform_int_distribution<int>(config.n_range.lo,
                                                   config.n_range.hi)(rng);
  const double lo = config.density_range.lo - kDensitySlack;
  const double hi = config.density_range.hi + kDensitySlack;

  std::vector<int> pool(m);
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    const double target = std::uniform_real_distribution<double>(
        config.density_range.lo, config.density_range.hi)(rng);
    std::binomial_distribution<int> size_law(m, target);

    // Column sizes follow Binomial(m, d), so E[q] = d * m * n.
    std::vector<std::vector<int>> cols(n);
    for (int j = 0; j < n; ++j) {
      const int size = std::max(1, size_law(rng));
      std::iota(pool.begin(), pool.end(), 0);
      // Partial Fisher-Yates: the first `size` slots are a uniform sample.
      for (int k = 0; k < size; ++k) {
        const int pick = std::uniform_int_distribution<int>(k, m - 1)(rng);
        std::swap(pool[k], pool[pick]);
      }
      cols[j].assign(pool.begin(), pool.begin() + size);
    }

    // Repair: every row must be covered by some column.
    std::vector<char> covered(m, 0);
    for (const auto& col : cols) {
      for (int i : col) covered[i] = 1;
    }
    for (int i = 0; i < m; ++i) {
      if (!covered[i]) {
        const int j = std::uniform_int_distribution<int>(0, n - 1)(rng);
        cols[j].push_back(i);
      }
    }

    long long q = 0;
    for (const auto& col : cols) q += static_cast<long long>(col.size());
    const double realized =
        static_cast<double>(q) / (static_cast<double>(m) * n);
    if (realized < lo || realized > hi) continue;

    std::vector<std::vector<int>> rows(m);
    for (int j = 0; j < n; ++j) {
      for (int i : cols[j]) rows[i].push_back(j);
    }
    std::vector<Cost> costs(n);
    CostSampler sampler{rng};
    for (int j = 0; j < n; ++j) costs[j] = std::visit(sampler, config.cost_model);
    return build_instance(m, n, std::move(rows), std::move(costs), name);
  }
  throw Error(ErrorCode::kInfeasibleConfig,
              "realized density missed [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "] in " + std::to_string(kMaxDraws) +
                  " draws");
}

}  // namespace gscp
