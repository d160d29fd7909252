#ifndef GSCP_COST_H_
#define GSCP_COST_H_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace gscp {

// Exact decimal cost stored as an integer count of micro-units. Objective
// values are sums of these, so optimality comparisons never round.
class Cost {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Cost() = default;

  static constexpr Cost from_units(std::int64_t units) { return Cost(units); }
  static constexpr Cost whole(std::int64_t value) {
    return Cost(value * kScale);
  }
  // Accepts "12", "-3", "0.25", "1e2" is rejected. At most six fractional
  // digits. Throws Error(kMalformedFile) on anything else.
  static Cost parse(std::string_view text);
  // Rounds to the nearest micro-unit.
  static Cost from_double(double value);

  constexpr std::int64_t units() const { return units_; }
  constexpr double value() const {
    return static_cast<double>(units_) / static_cast<double>(kScale);
  }
  constexpr bool is_whole() const { return units_ % kScale == 0; }
  // Shortest exact decimal rendering ("3", "1.25").
  std::string to_string() const;

  constexpr Cost& operator+=(Cost other) {
    units_ += other.units_;
    return *this;
  }
  constexpr Cost& operator-=(Cost other) {
    units_ -= other.units_;
    return *this;
  }
  friend constexpr Cost operator+(Cost a, Cost b) { return a += b; }
  friend constexpr Cost operator-(Cost a, Cost b) { return a -= b; }
  friend constexpr auto operator<=>(Cost, Cost) = default;

 private:
  explicit constexpr Cost(std::int64_t units) : units_(units) {}

  std::int64_t units_ = 0;
};

}  // namespace gscp

#endif  // GSCP_COST_H_
