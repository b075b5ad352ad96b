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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace remforge::core {

/// 48-bit IEEE 802 address. Ordering matches the lexicographic order of the
/// canonical text form.
class MacAddress {
 public:
  constexpr MacAddress() = default;
  explicit constexpr MacAddress(std::uint64_t bits) : bits_(bits & 0xFFFF'FFFF'FFFFULL) {}

  constexpr std::uint64_t bits() const { return bits_; }
  /// Lowercase, colon separated: "aa:bb:cc:dd:ee:ff".
  std::string to_string() const;
  /// Bare 12 hex digits, used in column names.
  std::string to_hex() const;

  friend constexpr auto operator<=>(MacAddress, MacAddress) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Accepts "aa:bb:cc:dd:ee:ff" (either case) or 12 bare hex digits.
/// Throws InvalidArgument on bad length or non-hex characters.
MacAddress validate_mac(std::string_view text);

}  // namespace remforge::core
