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

#ifndef TMPUD_JSON_IO_H_
#define TMPUD_JSON_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>

#include "json.hpp"

namespace tmpud {

using Json = nlohmann::json;

// A parsed JSON text that remembers on which line every value starts, so
// schema violations can be reported against the source.
class JsonDocument {
 public:
  // Throws ParseError ("<origin>:<line>:<col>: ...") on malformed input.
  static JsonDocument parse(std::string_view text, std::string origin = "<input>");
  static JsonDocument load(const std::filesystem::path& path);

  const Json& root() const { return root_; }
  const std::string& origin() const { return origin_; }

  // Line (1-based) of the value at `pointer`, or of its closest ancestor.
  int line_of(const Json::json_pointer& pointer) const;

  // Throws ParseError "<origin>:<line>: <message> (at <pointer>)".
  [[noreturn]] void fail(const Json::json_pointer& pointer,
                         const std::string& message) const;

  // Typed accessors that report missing or mistyped members with a line.
  const Json& at(const Json::json_pointer& pointer) const;
  double number(const Json::json_pointer& pointer) const;
  double number_or(const Json::json_pointer& pointer, double fallback) const;
  long long integer(const Json::json_pointer& pointer) const;
  long long integer_or(const Json::json_pointer& pointer,
                       long long fallback) const;
  std::string string(const Json::json_pointer& pointer) const;
  std::string string_or(const Json::json_pointer& pointer,
                        std::string fallback) const;
  bool contains(const Json::json_pointer& pointer) const {
    return root_.contains(pointer);
  }

 private:
  Json root_;
  std::string origin_;
  std::unordered_map<std::string, int> lines_;
};

}  // namespace tmpud

#endif  // TMPUD_JSON_IO_H_
