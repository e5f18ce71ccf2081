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

#include <cstddef>
#include <mutex>
#include <vector>

namespace permspec::detail {

/// FFTW planning is not thread-safe; every plan create/destroy holds this.
std::mutex& fftw_planner_mutex();

/// sum_k samples[k] cos(2 pi n k / M) for n = 0..count-1, M = samples.size().
std::vector<double> dft_cosine_sums(const std::vector<double>& samples, std::size_t count);

}  // namespace permspec::detail
