// Copyright 2026 The popnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace popnet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax error in a BN, matching or plan document. Line and column are
// 1-based; column 0 means "whole line".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), line_(line), column_(column) {}
  // Same position, message prefixed with `context` (typically a file name).
  ParseError(const std::string& context, const ParseError& inner)
      : Error(context + ": " + inner.what()),
        line_(inner.line_),
        column_(inner.column_) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

// A structurally invalid network (cycle, bad CPT row, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// p(evidence) == 0: the asserted values are contradictory under the network.
class ZeroEvidenceError : public Error {
 public:
  using Error::Error;
};

class UnknownVariableError : public Error {
 public:
  using Error::Error;
};

class IncompleteAssignmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace popnet
