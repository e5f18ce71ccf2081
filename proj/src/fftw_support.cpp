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

#include "fftw_support.hpp"

#include <algorithm>

#include <fftw3.h>

namespace permspec::detail {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> dft_cosine_sums(const std::vector<double>& samples, std::size_t count) {
  const std::size_t size = samples.size();
  const std::size_t half = size / 2 + 1;
  double* in = fftw_alloc_real(size);
  fftw_complex* spec = fftw_alloc_complex(half);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(size), in, spec, FFTW_ESTIMATE);
  }
  std::copy(samples.begin(), samples.end(), in);
  fftw_execute(plan);
  std::vector<double> out(std::min(count, half));
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = spec[n][0];
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(spec);
  return out;
}

}  // namespace permspec::detail
