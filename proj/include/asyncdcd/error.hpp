/**
 * Copyright 2026 The asyncdcd authors
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

namespace dcd {

/// Malformed input text (data files, model files). Carries a 1-based line
/// number when the failing line is known, 0 otherwise.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& msg, std::size_t line = 0)
      : std::runtime_error(line ? msg + " (line " + std::to_string(line) + ")"
                                : msg),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid argument or configuration (bad flag combination, p == 0, ...).
class config_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numeric failure inside a solver (inner iteration did not converge).
class numeric_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dcd
