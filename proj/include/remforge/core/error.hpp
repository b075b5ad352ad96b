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

#include <stdexcept>
#include <string>

namespace remforge {

/// Base class for every error raised by the toolchain.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or record.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An estimator has no model for the requested key (e.g. an unseen MAC).
class NoModelError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure during fitting (non-finite loss, singular data, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The requested mission cannot be flown with the given battery.
class MissionInfeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace remforge
