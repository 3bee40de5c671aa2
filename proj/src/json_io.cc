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

#include "tmpud/json_io.h"

#include <fstream>
#include <sstream>
#include <vector>

#include "tmpud/errors.h"

namespace tmpud {
namespace {

std::string escape_token(const std::string& token) {
  std::string out;
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

// Walks a syntactically valid JSON text and records the line on which each
// value begins, keyed by its JSON pointer string.
std::unordered_map<std::string, int> index_lines(std::string_view text) {
  struct Frame {
    bool object;
    std::string key;
    int index;
  };
  std::unordered_map<std::string, int> lines;
  std::vector<Frame> stack;
  int line = 1;
  bool value_position = true;
  bool expecting_key = false;

  auto pointer = [&stack]() {
    std::string p;
    for (const auto& f : stack) {
      p += '/';
      p += f.object ? escape_token(f.key) : std::to_string(f.index);
    }
    return p;
  };
  auto read_string = [&](std::size_t& i) {
    std::string s;
    ++i;  // opening quote
    while (i < text.size() && text[i] != '"') {
      if (text[i] == '\\' && i + 1 < text.size()) {
        s += text[i + 1];
        i += 2;
        continue;
      }
      s += text[i++];
    }
    return s;  // i rests on the closing quote
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') continue;
    if (expecting_key && c == '"') {
      stack.back().key = read_string(i);
      expecting_key = false;
      continue;
    }
    if (c == ':') {
      value_position = true;
      continue;
    }
    if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().object) {
          expecting_key = true;
        } else {
          ++stack.back().index;
          value_position = true;
        }
      }
      continue;
    }
    if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
      value_position = false;
      expecting_key = false;
      continue;
    }
    if (!value_position) continue;
    lines.emplace(pointer(), line);
    value_position = false;
    if (c == '{') {
      stack.push_back({true, {}, 0});
      expecting_key = true;
    } else if (c == '[') {
      stack.push_back({false, {}, 0});
      value_position = true;
    } else if (c == '"') {
      read_string(i);
    } else {
      while (i + 1 < text.size() && text[i + 1] != ',' && text[i + 1] != '}' &&
             text[i + 1] != ']' && text[i + 1] != '\n' && text[i + 1] != ' ') {
        ++i;
      }
    }
  }
  return lines;
}

}  // namespace

JsonDocument JsonDocument::parse(std::string_view text, std::string origin) {
  JsonDocument doc;
  doc.origin_ = std::move(origin);
  try {
    doc.root_ = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // Recover line/column from the byte offset reported by the parser.
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    throw ParseError(doc.origin_ + ":" + std::to_string(line) + ":" +
                     std::to_string(column) + ": " +
                     (pos == std::string::npos ? what : what.substr(pos)));
  }
  doc.lines_ = index_lines(text);
  return doc;
}

JsonDocument JsonDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

int JsonDocument::line_of(const Json::json_pointer& pointer) const {
  Json::json_pointer p = pointer;
  while (true) {
    const auto it = lines_.find(p.to_string());
    if (it != lines_.end()) return it->second;
    if (p.empty()) return 1;
    p = p.parent_pointer();
  }
}

void JsonDocument::fail(const Json::json_pointer& pointer,
                        const std::string& message) const {
  throw ParseError(origin_ + ":" + std::to_string(line_of(pointer)) + ": " +
                   message + " (at " +
                   (pointer.empty() ? std::string("/") : pointer.to_string()) +
                   ")");
}

const Json& JsonDocument::at(const Json::json_pointer& pointer) const {
  if (!root_.contains(pointer)) fail(pointer, "missing required member");
  return root_.at(pointer);
}

double JsonDocument::number(const Json::json_pointer& pointer) const {
  const Json& v = at(pointer);
  if (!v.is_number()) fail(pointer, "expected a number");
  return v.get<double>();
}

double JsonDocument::number_or(const Json::json_pointer& pointer,
                               double fallback) const {
  return contains(pointer) ? number(pointer) : fallback;
}

long long JsonDocument::integer(const Json::json_pointer& pointer) const {
  const Json& v = at(pointer);
  if (!v.is_number_integer()) fail(pointer, "expected an integer");
  return v.get<long long>();
}

long long JsonDocument::integer_or(const Json::json_pointer& pointer,
                                   long long fallback) const {
  return contains(pointer) ? integer(pointer) : fallback;
}

std::string JsonDocument::string(const Json::json_pointer& pointer) const {
  const Json& v = at(pointer);
  if (!v.is_string()) fail(pointer, "expected a string");
  return v.get<std::string>();
}

std::string JsonDocument::string_or(const Json::json_pointer& pointer,
                                    std::string fallback) const {
  return contains(pointer) ? string(pointer) : std::move(fallback);
}

}  // namespace tmpud
