// Copyright 2026 The statlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Display rules shared by every surface: four decimals, half away from zero.

#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace statlab {

/// Formats `value` with exactly four decimals, rounding half away from zero
/// on the exact binary value. Negative results that round to zero print
/// without a sign.
inline std::string format_fixed4(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  const bool negative = std::signbit(value);
  // glibc prints the exact decimal expansion; 40 places is enough to see
  // every digit that decides the rounding at the fourth.
  char buf[400];
  std::snprintf(buf, sizeof buf, "%.40f", std::fabs(value));
  std::string s(buf);
  const auto dot = s.find('.');
  std::string digits = s.substr(0, dot) + s.substr(dot + 1, 4);
  const bool round_up = s[dot + 5] >= '5';
  if (round_up) {
    int i = static_cast<int>(digits.size()) - 1;
    while (i >= 0) {
      if (digits[i] == '9') {
        digits[i] = '0';
        --i;
      } else {
        ++digits[i];
        break;
      }
    }
    if (i < 0) digits.insert(digits.begin(), '1');
  }
  std::string out = digits.substr(0, digits.size() - 4) + "." +
                    digits.substr(digits.size() - 4);
  if (negative && out.find_first_not_of("0.") != std::string::npos) {
    out.insert(out.begin(), '-');
  }
  return out;
}

/// Four-decimal rounding with trailing zeros dropped: 1 prints as "1",
/// 0.05 as "0.05" and 0.841344746 as "0.8413".
inline std::string format_compact(double value) {
  std::string s = format_fixed4(value);
  if (s.find('.') == std::string::npos) return s;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

/// p-values below the four-decimal resolution print as "< 0.0001".
inline std::string format_p_value(double p) {
  if (p < 0.00005) return "< 0.0001";
  return format_fixed4(p);
}

}  // namespace statlab
