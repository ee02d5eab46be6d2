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

// Structural checks on generated HTML reports: balanced tags, quoted
// attributes, escaped text, and extraction of the embedded replay payload.

#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace statlab::testing {

inline bool fail_with(std::string* why, std::string msg) {
  if (why) *why = std::move(msg);
  return false;
}

/// True if `html` is a single well-formed element tree (XHTML-style: every
/// tag closed or self-closed, attribute values quoted, '&' only in entities,
/// raw '<' only as markup).
inline bool well_formed_html(std::string_view html, std::string* why = nullptr) {
  constexpr std::string_view kDoctype = "<!DOCTYPE html>";
  if (html.substr(0, kDoctype.size()) != kDoctype) {
    return fail_with(why, "missing doctype");
  }
  std::vector<std::string> open;
  bool seen_root = false;
  std::size_t i = kDoctype.size();
  while (i < html.size()) {
    const char c = html[i];
    if (c == '&') {
      const auto semi = html.find(';', i);
      if (semi == std::string_view::npos || semi - i > 10) {
        return fail_with(why, "bare '&' at " + std::to_string(i));
      }
      i = semi + 1;
      continue;
    }
    if (c != '<') {
      if (open.empty() && !std::isspace(static_cast<unsigned char>(c))) {
        return fail_with(why, "text outside the root element");
      }
      ++i;
      continue;
    }
    if (html.substr(i, 4) == "<!--") {
      const auto end = html.find("-->", i);
      if (end == std::string_view::npos) return fail_with(why, "open comment");
      i = end + 3;
      continue;
    }
    const auto close = html.find('>', i);
    if (close == std::string_view::npos) return fail_with(why, "unterminated tag");
    std::string_view tag = html.substr(i + 1, close - i - 1);
    i = close + 1;
    if (!tag.empty() && tag[0] == '/') {
      const std::string name(tag.substr(1));
      if (open.empty() || open.back() != name) {
        return fail_with(why, "mismatched </" + name + ">");
      }
      open.pop_back();
      continue;
    }
    const bool self_closing = !tag.empty() && tag.back() == '/';
    if (self_closing) tag.remove_suffix(1);
    std::size_t n = 0;
    while (n < tag.size() && (std::isalnum(static_cast<unsigned char>(tag[n])) ||
                              tag[n] == '-' || tag[n] == ':')) {
      ++n;
    }
    if (n == 0) return fail_with(why, "bad tag name");
    const std::string name(tag.substr(0, n));
    // Attributes: name="value" pairs.
    std::size_t a = n;
    while (a < tag.size()) {
      if (std::isspace(static_cast<unsigned char>(tag[a]))) {
        ++a;
        continue;
      }
      const auto eq = tag.find('=', a);
      if (eq == std::string_view::npos || eq + 1 >= tag.size() ||
          (tag[eq + 1] != '"' && tag[eq + 1] != '\'')) {
        return fail_with(why, "unquoted attribute in <" + name + ">");
      }
      const auto end = tag.find(tag[eq + 1], eq + 2);
      if (end == std::string_view::npos) {
        return fail_with(why, "unterminated attribute in <" + name + ">");
      }
      a = end + 1;
    }
    if (open.empty()) {
      if (seen_root) return fail_with(why, "second root element");
      seen_root = true;
    }
    if (self_closing) continue;
    if (name == "script" || name == "style") {
      const std::string end = "</" + name + ">";
      const auto stop = html.find(end, i);
      if (stop == std::string_view::npos) return fail_with(why, "open <" + name + ">");
      if (html.substr(i, stop - i).find('<') != std::string_view::npos) {
        return fail_with(why, "raw '<' inside <" + name + ">");
      }
      i = stop + end.size();
      continue;
    }
    open.push_back(name);
  }
  if (!open.empty()) return fail_with(why, "unclosed <" + open.back() + ">");
  if (!seen_root) return fail_with(why, "no root element");
  return true;
}

/// Contents of the replay-payload script element, or "" if absent.
inline std::string replay_payload(std::string_view html) {
  constexpr std::string_view kOpen =
      R"(<script type="application/json" id="replay-payload">)";
  const auto start = html.find(kOpen);
  if (start == std::string_view::npos) return "";
  const auto from = start + kOpen.size();
  const auto end = html.find("</script>", from);
  if (end == std::string_view::npos) return "";
  return std::string(html.substr(from, end - from));
}

}  // namespace statlab::testing
