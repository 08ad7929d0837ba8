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

#include <cstdint>
#include <random>

namespace mrsid {

/// Seedable generator whose output is identical on every conforming
/// platform.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distribution classes are not (their algorithms are
/// implementation-defined), so the conversions are done here:
///   - uniform():  (next() >> 11) * 2^-53, a double in [0, 1)
///   - gaussian(): Box-Muller on two uniforms, cosine branch only,
///                 u1 mapped to (0, 1] as 1 - uniform()
/// Each gaussian() call consumes exactly two engine outputs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform();
  double uniform(double low, double high) { return low + (high - low) * uniform(); }
  double gaussian();
  double gaussian(double sigma) { return sigma * gaussian(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mrsid
