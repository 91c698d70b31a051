/*
 * Copyright 2026 sqlxdiff project.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "sqlxd/plan.hpp"

#include <cctype>
#include <regex>
#include <sstream>
#include <vector>

#include "sqlxd/exec.hpp"

namespace sqlxd {

namespace {

std::string collapse_ws(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

// "Seq Scan on t0 a  (cost=0.00..1.04 rows=4 width=4)" -> "Seq Scan"
std::string operator_name(std::string s) {
  static const std::regex kParen(R"(\([^()]*\))");
  static const std::regex kTail(R"(\s+(on|using|workers|of)\b:?.*$)", std::regex::icase);
  static const std::regex kQuoted(R"('([^']|'')*'|"[^"]*")");
  static const std::regex kBracket(R"(\[[^\]]*\])");
  static const std::regex kNumber(R"([-+]?\d+(\.\d+)?)");
  static const std::regex kColonTail(R"(:.*$)");
  std::string prev;
  while (prev != s) {
    prev = s;
    s = std::regex_replace(s, kParen, " ");
  }
  s = std::regex_replace(s, kQuoted, " ");
  s = std::regex_replace(s, kBracket, " ");
  s = std::regex_replace(s, kTail, "");
  s = std::regex_replace(s, kColonTail, "");
  s = std::regex_replace(s, kNumber, "");
  s = collapse_ws(s);
  bool letters = false;
  for (char c : s) letters = letters || std::isalpha(static_cast<unsigned char>(c));
  return letters ? s : std::string();
}

}  // namespace

std::string PlanFingerprint::digest() const { return sha256_hex(normalized).substr(0, 16); }

PlanFingerprint plan_fingerprint(const std::string& plan_text) {
  static const std::regex kSubplan(R"(^(SubPlan|InitPlan)\b)");
  static const std::regex kDetail(R"(^[A-Za-z_][A-Za-z_ ]*:\s)");
  static const std::regex kSingleKey(R"(^[a-z_]+:)");

  std::vector<std::string> lines;
  {
    std::istringstream in(plan_text);
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) lines.push_back(line);
    }
  }
  const bool arrows = plan_text.find("->") != std::string::npos;

  std::vector<std::size_t> stack;
  std::string out;
  bool ok = !lines.empty();
  for (std::size_t i = 0; i < lines.size() && ok; ++i) {
    const std::string& line = lines[i];
    std::size_t indent = line.find_first_not_of(" \t");
    std::string content = line.substr(indent);
    bool node = i == 0;
    if (content.rfind("->", 0) == 0) {
      node = true;
      content = content.substr(2);
      indent += 2;
    } else if (std::regex_search(content, kSubplan)) {
      node = true;
    } else if (!arrows && i > 0) {
      node = !std::regex_search(content, kSingleKey);
    } else if (i > 0) {
      node = false;
    }
    if (!node) continue;
    if (arrows && i > 0 && std::regex_search(content, kDetail) && content.rfind("->", 0) != 0 &&
        !std::regex_search(content, kSubplan)) {
      continue;
    }
    const std::string name = operator_name(content);
    if (name.empty()) {
      if (i == 0) ok = false;
      continue;
    }
    while (!stack.empty() && stack.back() >= indent) stack.pop_back();
    if (!out.empty()) out += '\n';
    out += std::string(2 * stack.size(), ' ') + name;
    stack.push_back(indent);
  }
  if (!ok) return {collapse_ws(plan_text), true};
  return {out, false};
}

}  // namespace sqlxd
