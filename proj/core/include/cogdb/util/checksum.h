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

#ifndef COGDB_UTIL_CHECKSUM_H_
#define COGDB_UTIL_CHECKSUM_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace cogdb::util {

std::uint32_t crc32(std::string_view bytes);
std::uint32_t crc32_file(const std::filesystem::path& path);

// 8 lowercase hex digits.
std::string hex32(std::uint32_t value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace cogdb::util

#endif  // COGDB_UTIL_CHECKSUM_H_
