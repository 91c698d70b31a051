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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sqlxd {

/// Base of every error the harness raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dialect-only node was rendered for a dialect that lacks it.
class UnsupportedConstruct : public Error {
 public:
  UnsupportedConstruct(std::string dialect, std::string construct)
      : Error("construct '" + construct + "' is not supported by dialect '" + dialect + "'"),
        dialect_(std::move(dialect)),
        construct_(std::move(construct)) {}

  const std::string& dialect() const noexcept { return dialect_; }
  const std::string& construct() const noexcept { return construct_; }

 private:
  std::string dialect_;
  std::string construct_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at offset " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A dialect-only construct survived mapping with no rule able to rewrite it.
class UnmappableConstruct : public Error {
 public:
  UnmappableConstruct(std::string construct, const std::string& detail)
      : Error("cannot map '" + construct + "': " + detail), construct_(std::move(construct)) {}

  const std::string& construct() const noexcept { return construct_; }

 private:
  std::string construct_;
};

/// Raised by the mini-evaluator for nodes outside its scalar subset.
class UnsupportedExpr : public Error {
 public:
  using Error::Error;
};

/// The connection to an endpoint dropped. Retryable.
class ConnectionLost : public Error {
 public:
  using Error::Error;
};

/// A replay executor was asked for a statement it has no recorded outcome for.
class FixtureMissing : public Error {
 public:
  using Error::Error;
};

class FlakyPredicate : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sqlxd
