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

#ifndef COGDB_UTIL_STRINGS_H_
#define COGDB_UTIL_STRINGS_H_

#include <string>
#include <string_view>
#include <vector>

namespace cogdb::util {

std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

// Splits on any run of ASCII whitespace; empty pieces are dropped.
std::vector<std::string> split_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string_view trim(std::string_view s);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// Fixed-point rendering with `precision` digits after the decimal point.
std::string format_fixed(double value, int precision);

bool parse_double(std::string_view s, double& out);

}  // namespace cogdb::util

#endif  // COGDB_UTIL_STRINGS_H_
