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

#include "ross/errors.hpp"

namespace ross {

int exit_code(const std::exception &e) noexcept {
  if (dynamic_cast<const ConfigError *>(&e)) return exit_codes::kUsage;
  if (dynamic_cast<const FormatError *>(&e) ||
      dynamic_cast<const ShapeError *>(&e)) {
    return exit_codes::kFormat;
  }
  if (dynamic_cast<const RangeError *>(&e) ||
      dynamic_cast<const InsufficientDataError *>(&e) ||
      dynamic_cast<const DegenerateError *>(&e) ||
      dynamic_cast<const EmptyEvaluationError *>(&e)) {
    return exit_codes::kNumeric;
  }
  return exit_codes::kFailure;
}

void rethrow_with_context(const std::string &context) {
  try {
    throw;
  } catch (const ConfigError &e) {
    throw ConfigError(context + e.what());
  } catch (const FormatError &e) {
    throw FormatError(context + e.what());
  } catch (const ShapeError &e) {
    throw ShapeError(context + e.what());
  } catch (const RangeError &e) {
    throw RangeError(context + e.what());
  } catch (const InsufficientDataError &e) {
    throw InsufficientDataError(context + e.what());
  } catch (const DegenerateError &e) {
    throw DegenerateError(context + e.what());
  } catch (const EmptyEvaluationError &e) {
    throw EmptyEvaluationError(context + e.what());
  } catch (const std::exception &e) {
    throw Error(context + e.what());
  }
}

}  // namespace ross
