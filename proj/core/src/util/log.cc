// Copyright 2026 The cogdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cogdb/util/log.h"

#include <atomic>
#include <iostream>
#include <sstream>

namespace cogdb::util {

namespace {

std::atomic<LogLevel> g_min_level{LogLevel::kInfo};

std::string_view level_name(LogLevel level) {
  switch (level) {
    case LogLevel::kDebug: return "debug";
    case LogLevel::kInfo: return "info";
    case LogLevel::kWarn: return "warn";
    case LogLevel::kError: return "error";
  }
  return "info";
}

void append_value(std::ostringstream& os, std::string_view value) {
  const bool quote = value.empty() ||
                     value.find_first_of(" \t\"=") != std::string_view::npos;
  if (!quote) {
    os << value;
    return;
  }
  os << '"';
  for (char c : value) {
    if (c == '"' || c == '\\') os << '\\';
    os << c;
  }
  os << '"';
}

}  // namespace

void set_min_log_level(LogLevel level) { g_min_level = level; }

void log(LogLevel level, std::string_view event,
         std::initializer_list<LogField> fields) {
  if (level < g_min_level.load()) return;
  std::ostringstream os;
  os << "level=" << level_name(level) << " event=" << event;
  for (const auto& [key, value] : fields) {
    os << ' ' << key << '=';
    append_value(os, value);
  }
  os << '\n';
  std::cerr << os.str();
}

}  // namespace cogdb::util
