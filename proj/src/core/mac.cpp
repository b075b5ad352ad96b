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

#include "remforge/core/mac.hpp"

#include "remforge/core/error.hpp"

namespace remforge::core {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string MacAddress::to_string() const {
  std::string out;
  out.reserve(17);
  for (int byte = 5; byte >= 0; --byte) {
    const auto v = static_cast<unsigned>((bits_ >> (8 * byte)) & 0xFF);
    out.push_back(kHexDigits[v >> 4]);
    out.push_back(kHexDigits[v & 0xF]);
    if (byte > 0) out.push_back(':');
  }
  return out;
}

std::string MacAddress::to_hex() const {
  std::string out;
  out.reserve(12);
  for (int nib = 11; nib >= 0; --nib) out.push_back(kHexDigits[(bits_ >> (4 * nib)) & 0xF]);
  return out;
}

MacAddress validate_mac(std::string_view text) {
  std::string digits;
  if (text.size() == 17) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (i % 3 == 2) {
        if (text[i] != ':') throw InvalidArgument("malformed MAC address: '" + std::string(text) + "'");
      } else {
        digits.push_back(text[i]);
      }
    }
  } else if (text.size() == 12) {
    digits.assign(text);
  } else {
    throw InvalidArgument("malformed MAC address length: '" + std::string(text) + "'");
  }
  std::uint64_t bits = 0;
  for (char c : digits) {
    const int v = hex_value(c);
    if (v < 0) throw InvalidArgument("non-hex character in MAC address: '" + std::string(text) + "'");
    bits = (bits << 4) | static_cast<std::uint64_t>(v);
  }
  return MacAddress(bits);
}

}  // namespace remforge::core
