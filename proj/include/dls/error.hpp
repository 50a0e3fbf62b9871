// Copyright 2026 The DLS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DLS_ERROR_HPP_
#define DLS_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dls {

// Raised when a caller breaks an operation's precondition (width mismatch,
// out-of-range code, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotABijection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchedulerError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class UnknownState : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Any text-format error. Line and column are 1-based; 0 means "not known".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(Format(what, line, column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string Format(const std::string& what, std::size_t line,
                            std::size_t column) {
    if (line == 0) return what;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

// The random source could not deliver bits. Never recovered by silently
// switching to another source.
class SourceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dls

#endif  // DLS_ERROR_HPP_
