// Copyright 2026 The mrsid Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace mrsid {

/// Matrix or vector sizes that do not agree with a model or with each other.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input data: CSV rows, selection files, JSON documents.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation that cannot proceed numerically (rank loss, overflow,
/// ill-conditioned inversion).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The block depth is too small for the lag/order hypothesis. This is a
/// precondition violation, not a failed data-adequacy verdict.
class LagHypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The data failed the rank/column-count adequacy test and the caller did
/// not ask to proceed anyway.
class IdentifiabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mrsid
