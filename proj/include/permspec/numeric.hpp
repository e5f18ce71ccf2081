// Copyright 2026 The permspec Authors
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

#pragma once

#include <algorithm>
#include <cmath>

namespace permspec {

/// Neumaier's variant of compensated summation.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline constexpr double kSnapTolerance = 1e-12;

/// Rounds x to the nearest integer when it lies within kSnapTolerance
/// (relative to max(1,|x|)) of it; j*a for rational a must land on integers.
inline double snap_to_integer(double x) noexcept {
  const double r = std::nearbyint(x);
  if (std::abs(x - r) <= kSnapTolerance * std::max(1.0, std::abs(x))) return r;
  return x;
}

/// {x} = x - floor(x) after snapping.
inline double fractional_part(double x) noexcept {
  const double s = snap_to_integer(x);
  const double fr = s - std::floor(s);
  return fr >= 1.0 ? 0.0 : fr;
}

}  // namespace permspec
