// Copyright 2026 The remforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace remforge::core {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
/// Strict parse of a full string as double; throws ParseError.
double parse_double(std::string_view text);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`, so readers never
/// observe a partial file. Creates parent directories as needed.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace remforge::core
