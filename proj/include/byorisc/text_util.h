// Copyright 2026 The ByoRISC Toolkit Authors.
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

#ifndef BYORISC_TEXT_UTIL_H_
#define BYORISC_TEXT_UTIL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace byorisc {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);

// Whitespace-separated tokens.
std::vector<std::string> split_ws(std::string_view s);
// Splits on a delimiter; pieces are trimmed, empty pieces are kept.
std::vector<std::string> split(std::string_view s, char delim);

// Removes a trailing '#' comment.
std::string_view strip_comment(std::string_view line);

// Decimal, 0x-prefixed hex or 0b-prefixed binary with optional sign.
std::optional<int64_t> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);
// Throwing variants; \`what\` names the field in the InputError message.
int64_t require_int(std::string_view s, std::string_view what);
uint64_t require_hex(std::string_view digits, std::string_view what);
double require_double(std::string_view s, std::string_view what);

std::string hex(uint64_t value, int digits);

// 64-bit FNV-1a, used for report digests.
uint64_t fnv1a(std::string_view data, uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace byorisc

#endif  // BYORISC_TEXT_UTIL_H_
