// Copyright 2026 The scorewave Authors
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

#ifndef SCOREWAVE_ERRORS_HPP_
#define SCOREWAVE_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scorewave {

/// Base class for all scorewave errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid input data or parameters (bad bars, budgets, shapes, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// A bar does not fit the fixed-size budget of a representation.
class OverBudgetError : public ValidationError {
 public:
  OverBudgetError(const std::string& msg, int required, int budget)
      : ValidationError(msg), required_(required), budget_(budget) {}
  int required() const { return required_; }
  int budget() const { return budget_; }

 private:
  int required_;
  int budget_;
};

/// Monophonic encoder got polyphonic input.
class NotMonophonicError : public ValidationError {
 public:
  explicit NotMonophonicError(const std::string& msg) : ValidationError(msg) {}
};

/// Matrix/vector shape mismatch.
class ShapeError : public ValidationError {
 public:
  explicit ShapeError(const std::string& msg) : ValidationError(msg) {}
};

/// Chorale generation could not satisfy the request.
class GenerationError : public ValidationError {
 public:
  explicit GenerationError(const std::string& msg) : ValidationError(msg) {}
};

/// Hard failure while parsing a Standard MIDI File. Carries the byte
/// offset at which parsing gave up.
class MidiError : public ValidationError {
 public:
  MidiError(const std::string& msg, std::size_t offset)
      : ValidationError(msg + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Filesystem / stream failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace scorewave

#endif  // SCOREWAVE_ERRORS_HPP_
