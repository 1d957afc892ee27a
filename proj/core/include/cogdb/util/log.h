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

#ifndef COGDB_UTIL_LOG_H_
#define COGDB_UTIL_LOG_H_

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>

namespace cogdb::util {

enum class LogLevel { kDebug, kInfo, kWarn, kError };

using LogField = std::pair<std::string_view, std::string>;

// Writes one `level=... event=... key=value ...` line to stderr. Values
// containing blanks or quotes are double-quoted.
void log(LogLevel level, std::string_view event,
         std::initializer_list<LogField> fields = {});

void set_min_log_level(LogLevel level);

}  // namespace cogdb::util

#endif  // COGDB_UTIL_LOG_H_
