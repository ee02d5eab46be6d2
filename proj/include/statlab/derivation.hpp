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

// Derivation documents: ordered sections of steps, each pairing a TeX
// template with the full-precision numbers substituted into it.
//
// Placeholders are written {{name}} in a template. An optional format suffix
// selects the display rule:
//   {{name}}    four decimals with trailing zeros dropped
//   {{name:4}}  always four decimals
//   {{name:p}}  p-value relation: "= 0.0123" or "< 0.0001"

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "statlab/display.hpp"
#include "statlab/error.hpp"

namespace statlab {

enum class StepKind { kMath, kText };

struct Step {
  StepKind kind = StepKind::kMath;
  std::string tex_template;
  std::map<std::string, double> values;
  std::string display;
};

struct Section {
  std::string title;
  std::vector<Step> steps;
};

struct DerivationDocument {
  std::string title;
  std::vector<Section> sections;
};

namespace detail {

inline std::string render_value(double v, char format, StepKind kind) {
  if (std::isinf(v)) {
    if (kind == StepKind::kMath) return v > 0 ? "+\\infty" : "-\\infty";
    return v > 0 ? "+inf" : "-inf";
  }
  switch (format) {
    case '4': return format_fixed4(v);
    case 'p': return v < 0.00005 ? "< 0.0001" : "= " + format_fixed4(v);
    default: return format_compact(v);
  }
}

// True when a number appended to `out` would directly follow a binary
// operator, where a negative value needs parentheses.
inline bool follows_operator(const std::string& out) {
  auto end = out.find_last_not_of(' ');
  if (end == std::string::npos) return false;
  const std::string_view head(out.data(), end + 1);
  for (std::string_view op : {"\\times", "\\cdot", "\\pm", "\\mp"}) {
    if (head.size() >= op.size() &&
        head.substr(head.size() - op.size()) == op) {
      return true;
    }
  }
  const char c = head.back();
  return c == '+' || c == '-' || c == '*' || c == '/';
}

}  // namespace detail

/// Substitutes every placeholder of `tmpl`. Throws kInternal when a
/// placeholder has no value, which would indicate a broken template.
inline std::string render_template(const std::string& tmpl,
                                   const std::map<std::string, double>& values,
                                   StepKind kind = StepKind::kMath) {
  std::string out;
  out.reserve(tmpl.size() + 32);
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find("{{", pos);
    if (open == std::string::npos) {
      out.append(tmpl, pos, std::string::npos);
      break;
    }
    const auto close = tmpl.find("}}", open + 2);
    if (close == std::string::npos) {
      fail(ErrorCode::kInternal, "unterminated placeholder in template");
    }
    // In \frac{{{x}}} the placeholder opens at the last pair of braces.
    auto start = open;
    while (start + 2 < close && tmpl[start + 2] == '{') ++start;
    out.append(tmpl, pos, start - pos);
    std::string name = tmpl.substr(start + 2, close - start - 2);
    char format = 0;
    if (const auto colon = name.find(':'); colon != std::string::npos) {
      format = colon + 1 < name.size() ? name[colon + 1] : 0;
      name.resize(colon);
    }
    const auto it = values.find(name);
    if (it == values.end()) {
      fail(ErrorCode::kInternal, "template placeholder without value: " + name);
    }
    std::string rendered = detail::render_value(it->second, format, kind);
    if (kind == StepKind::kMath && it->second < 0 &&
        detail::follows_operator(out)) {
      rendered = "(" + rendered + ")";
    }
    out += rendered;
    pos = close + 2;
  }
  return out;
}

/// Names of the placeholders used by a template, in order of appearance.
inline std::vector<std::string> placeholders(const std::string& tmpl) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while ((pos = tmpl.find("{{", pos)) != std::string::npos) {
    const auto close = tmpl.find("}}", pos + 2);
    if (close == std::string::npos) break;
    while (pos + 2 < close && tmpl[pos + 2] == '{') ++pos;
    std::string name = tmpl.substr(pos + 2, close - pos - 2);
    if (const auto colon = name.find(':'); colon != std::string::npos) {
      name.resize(colon);
    }
    names.push_back(std::move(name));
    pos = close + 2;
  }
  return names;
}

inline Step make_step(std::string tmpl, std::map<std::string, double> values,
                      StepKind kind = StepKind::kMath) {
  Step s{kind, std::move(tmpl), std::move(values), {}};
  s.display = render_template(s.tex_template, s.values, kind);
  return s;
}

inline Step text_step(std::string tmpl,
                      std::map<std::string, double> values = {}) {
  return make_step(std::move(tmpl), std::move(values), StepKind::kText);
}

}  // namespace statlab
