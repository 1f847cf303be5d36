// Copyright 2026, The ROSS Authors
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

/**
 * \file errors.hpp
 * \brief Exception hierarchy shared by every module.
 *
 * Each category maps onto one CLI exit code (see exit_code()).
 */
#pragma once

#include <stdexcept>
#include <string>

namespace ross {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad parameter values or configuration (non-positive voxel size, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed, truncated or otherwise invalid on-disk data.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Arrays or images whose geometry does not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Query outside a valid domain (e.g. time outside a trajectory).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Too few samples, too short history, fewer than three targets.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Numerically degenerate input (collinear targets, empty cells, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Evaluation with no defined class.
class EmptyEvaluationError : public Error {
 public:
  using Error::Error;
};

namespace exit_codes {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;
inline constexpr int kFormat = 3;
inline constexpr int kNumeric = 4;
}  // namespace exit_codes

/// Exit status for an exception escaping a CLI subcommand.
int exit_code(const std::exception &e) noexcept;

/// Rethrows the exception being handled with `context` prepended to its
/// message, keeping its category. Call only from inside a catch block.
[[noreturn]] void rethrow_with_context(const std::string &context);

}  // namespace ross
