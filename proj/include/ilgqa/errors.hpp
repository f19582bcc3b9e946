// Copyright 2026 The ilgqa Authors
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

#ifndef ILGQA_ERRORS_HPP_
#define ILGQA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ilgqa {

// Every failure the library raises is either a problem with the caller's
// input (bad file, bad record, bad config) or a broken internal invariant.
// The CLI maps the former to exit code 1 and the latter to exit code 2.
class Error : public std::runtime_error {
 public:
  enum class Kind { kInput, kInternal };

  Error(Kind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(std::string message)
      : Error(Kind::kInput, std::move(message)) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(std::string message)
      : Error(Kind::kInternal, std::move(message)) {}
};

// Malformed record in an on-disk file. Carries file/line/field context so
// diagnostics can point at the offending value.
class ParseError : public InputError {
 public:
  ParseError(const std::string& file, long line, const std::string& field,
             const std::string& message)
      : InputError(file + ":" + std::to_string(line) + ": field '" + field +
                   "': " + message) {}
};

class SceneMismatchError : public InternalError {
 public:
  SceneMismatchError(const std::string& expected, const std::string& got)
      : InternalError("scene mismatch: graph is for '" + expected +
                      "', sub-graph is for '" + got + "'") {}
};

class NodeNotFoundError : public InternalError {
 public:
  explicit NodeNotFoundError(const std::string& key)
      : InternalError("no asset node with key '" + key + "'") {}
};

}  // namespace ilgqa

#endif  // ILGQA_ERRORS_HPP_
