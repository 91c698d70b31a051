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
#pragma once

#include <string>

namespace sqlxd {

/// Operator tree of an EXPLAIN output, one operator per line, indented two
/// spaces per nesting level. Costs, row estimates, relation names, filter
/// and key details are dropped.
struct PlanFingerprint {
  std::string normalized;
  /// Set when no operator could be recognised; normalized then holds the
  /// whitespace-collapsed raw text.
  bool degraded = false;

  /// First 16 hex digits of SHA-256 over normalized.
  std::string digest() const;
  bool operator==(const PlanFingerprint&) const = default;
};

/// Understands PostgreSQL's text format ("->" children, detail lines) and
/// indentation-only formats such as QuestDB's, where "key: value" lines are
/// details. Idempotent: fingerprinting the normalized text again gives the
/// same result.
PlanFingerprint plan_fingerprint(const std::string& plan_text);

}  // namespace sqlxd
