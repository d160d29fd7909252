#include "gscp/cost.h"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "gscp/error.h"

namespace gscp {

Cost Cost::parse(std::string_view text) {
  auto fail = [&]() -> Cost {
    throw Error(ErrorCode::kMalformedFile,
                "invalid cost literal '" + std::string(text) + "'");
  };
  if (text.empty()) return fail();
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++pos;
  }
  std::int64_t whole_part = 0;
  int whole_digits = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    whole_part = whole_part * 10 + (text[pos] - '0');
    if (whole_part > 9'000'000'000'000LL / kScale) return fail();
    ++pos;
    ++whole_digits;
  }
  std::int64_t frac = 0;
  int frac_digits = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (frac_digits == 6) {
        if (text[pos] != '0') return fail();
      } else {
        frac = frac * 10 + (text[pos] - '0');
        ++frac_digits;
      }
      ++pos;
    }
  }
  if (pos != text.size() || (whole_digits == 0 && frac_digits == 0)) {
    return fail();
  }
  for (int i = frac_digits; i < 6; ++i) frac *= 10;
  const std::int64_t units = whole_part * kScale + frac;
  return Cost(negative ? -units : units);
}

Cost Cost::from_double(double value) {
  return Cost(std::llround(value * static_cast<double>(kScale)));
}

std::string Cost::to_string() const {
  const bool negative = units_ < 0;
  const std::int64_t magnitude = negative ? -units_ : units_;
  std::string out = negative ? "-" : "";
  out += std::to_string(magnitude / kScale);
  std::int64_t frac = magnitude % kScale;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 6 - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

}  // namespace gscp
