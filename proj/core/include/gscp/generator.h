#ifndef GSCP_GENERATOR_H_
#define GSCP_GENERATOR_H_

#include <cstdint>
#include <string>
#include <variant>

#include "gscp/instance.h"

namespace gscp {

enum class InstanceType { kType1, kType2, kType3, kType4, kCustom };

std::string instance_type_name(InstanceType type);
// Accepts "1".."4", "type1".."type4" and "custom".
InstanceType parse_instance_type(const std::string& text);

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct UniformIntCost {
  long long lo = 1;
  long long hi = 1;
};
struct EqualCost {
  long long value = 1;
};
struct PoissonCost {
  double lambda = 20.0;
};
using CostModel = std::variant<UniformIntCost, EqualCost, PoissonCost>;

struct GeneratorConfig {
  InstanceType instance_type = InstanceType::kCustom;
  IntRange m_range;
  IntRange n_range;
  RealRange density_range;
  CostModel cost_model = EqualCost{};
  std::uint64_t seed = 0;
};

// Per-type ranges and cost laws for the four synthetic families:
//   Type 1: m 100-400, n 100-1000,  d 0.22-0.29, Uniform[100, 200]
//   Type 2: m 100-300, n 100-500,   d 0.16-0.28, Equal
//   Type 3: m 200-350, n 300-350,   d 0.13-0.18, Poisson(20)
//   Type 4: m 200-250, n 1000-3000, d 0.04-0.05, Poisson(20)
GeneratorConfig preset_config(InstanceType type, std::uint64_t seed);

// Throws Error(kInvalidConfig) on empty ranges, density outside (0, 1] or
// a non-positive Poisson rate.
void validate(const GeneratorConfig& config);

// Deterministic in config.seed. The result is feasible, its m and n lie in
// the configured ranges and its density lies within density_range +- 0.01.
// Throws Error(kInfeasibleConfig) when 20 draws all miss the density band.
ScpInstance generate(const GeneratorConfig& config, const std::string& name);

}  // namespace gscp

#endif  // GSCP_GENERATOR_H_
