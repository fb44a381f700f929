// Copyright 2026 The ionet Authors
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

namespace ionet {

/// Broad category of a failure; the CLI maps these onto exit codes.
enum class ErrorClass {
  Usage,      // bad arguments or unknown measure
  Data,       // malformed or inconsistent input
  Numerical,  // singular systems, undefined scores, runaway walks
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what)
      : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

// --- data errors -----------------------------------------------------------

class DanglingSector : public Error {
 public:
  explicit DanglingSector(std::size_t id)
      : Error(ErrorClass::Data, "dangling sector " + std::to_string(id + 1) +
                                    ": row sums to zero"),
        id_(id) {}
  std::size_t sector() const noexcept { return id_; }

 private:
  std::size_t id_;
};

class NonFinite : public Error {
 public:
  explicit NonFinite(const std::string& where)
      : Error(ErrorClass::Data, "non-finite value in " + where) {}
};

class OutOfRange : public Error {
 public:
  explicit OutOfRange(const std::string& what) : Error(ErrorClass::Data, what) {}
};

class UnmappedSector : public Error {
 public:
  explicit UnmappedSector(std::size_t id)
      : Error(ErrorClass::Data, "sector " + std::to_string(id + 1) +
                                    " is missing from the aggregation map"),
        id_(id) {}
  std::size_t sector() const noexcept { return id_; }

 private:
  std::size_t id_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error(ErrorClass::Data, "dimension mismatch: " + what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorClass::Data, what) {}
};

/// Line and column are 1-based; column 0 means "whole line".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t col, const std::string& reason)
      : Error(ErrorClass::Data, "parse error at line " + std::to_string(line) +
                                    ", column " + std::to_string(col) + ": " +
                                    reason),
        line_(line),
        col_(col) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

// --- numerical errors ------------------------------------------------------

class SingularSystem : public Error {
 public:
  SingularSystem(std::size_t target, const std::string& detail)
      : Error(ErrorClass::Numerical,
              "singular first-passage system for target " +
                  std::to_string(target + 1) + ": " + detail),
        target_(target) {}
  std::size_t target() const noexcept { return target_; }

 private:
  std::size_t target_;
};

class UndefinedScore : public Error {
 public:
  UndefinedScore(std::size_t id, const std::string& measure)
      : Error(ErrorClass::Numerical, measure + " is undefined for sector " +
                                         std::to_string(id + 1)),
        id_(id) {}
  std::size_t sector() const noexcept { return id_; }

 private:
  std::size_t id_;
};

class NonProductive : public Error {
 public:
  explicit NonProductive(const std::string& detail)
      : Error(ErrorClass::Numerical,
              "absorption matrix is not productive: " + detail) {}
};

class CapExceeded : public Error {
 public:
  CapExceeded(std::size_t truncated, std::size_t total)
      : Error(ErrorClass::Numerical,
              std::to_string(truncated) + " of " + std::to_string(total) +
                  " walks hit the step cap"),
        truncated_(truncated),
        total_(total) {}
  std::size_t truncated() const noexcept { return truncated_; }
  double truncated_fraction() const noexcept {
    return total_ == 0 ? 0.0 : double(truncated_) / double(total_);
  }

 private:
  std::size_t truncated_;
  std::size_t total_;
};

class UnknownMeasure : public Error {
 public:
  explicit UnknownMeasure(const std::string& name)
      : Error(ErrorClass::Usage, "unknown measure '" + name + "'") {}
};

}  // namespace ionet
