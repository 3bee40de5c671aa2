// Copyright 2026 The TMPUD Authors
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

#ifndef TMPUD_ERRORS_H_
#define TMPUD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace tmpud {

// Base of every error raised by the library. `kind()` is a stable,
// machine-readable tag used by the CLI when reporting failures.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define TMPUD_DEFINE_ERROR(Name, tag)                            \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(tag, what) {} \
  }

TMPUD_DEFINE_ERROR(InvalidArgument, "invalid_argument");
TMPUD_DEFINE_ERROR(ParseError, "parse_error");
TMPUD_DEFINE_ERROR(InfeasibleState, "infeasible_state");
TMPUD_DEFINE_ERROR(NoPlanExists, "no_plan_exists");
TMPUD_DEFINE_ERROR(NoPath, "no_path");
TMPUD_DEFINE_ERROR(EmptyInput, "empty_input");
TMPUD_DEFINE_ERROR(MissingCell, "missing_cell");

#undef TMPUD_DEFINE_ERROR

}  // namespace tmpud

#endif  // TMPUD_ERRORS_H_
