/* Copyright 2026 The PEBM Authors
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
 *
 */

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pebm {

/// Invalid arguments or configuration. Carries every violation found, not
/// just the first one.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::string msg)
      : std::runtime_error(msg), violations_{std::move(msg)} {}
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Blow-up, NaN, step-size guard or an internal solver failure.
class NumericalError : public std::runtime_error {
 public:
  enum class Kind { BlowUp, NotANumber, StepGuard, Solver };
  NumericalError(Kind kind, const std::string& msg, double t)
      : std::runtime_error(msg), kind_(kind), time_(t) {}
  Kind kind() const noexcept { return kind_; }
  double time() const noexcept { return time_; }

 private:
  Kind kind_;
  double time_;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pebm
