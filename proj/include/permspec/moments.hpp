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

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "permspec/ewens.hpp"
#include "permspec/funcs.hpp"
#include "permspec/trapezoid.hpp"

namespace permspec {

/// Psi_N(j) = prod_{k<j} (N-k)/(theta+N-k-1) for j = 1..N, built by one pass
/// of the product recurrence. Psi_N(j) = (N/theta) P[J_N = j].
class PsiTable {
 public:
  PsiTable(std::int64_t n, EwensParam theta);

  std::int64_t n() const noexcept { return n_; }
  double theta() const noexcept { return theta_; }
  /// 1 <= j <= n, else OutOfRange.
  double operator()(std::int64_t j) const;
  /// Psi_N(j) for 1 <= j <= n and 0 beyond n (the indicator 1{j <= N}).
  double or_zero(std::int64_t j) const noexcept {
    return (j >= 1 && j <= n_) ? values_[static_cast<std::size_t>(j - 1)] : 0.0;
  }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::int64_t n_;
  double theta_;
  std::vector<double> values_;
};

double psi(std::int64_t n, EwensParam theta, std::int64_t j);

/// Watterson: E prod alpha_j^{[r_j]} = 1{m <= N} Psi_N(m) prod (theta/j)^{r_j},
/// m = sum j r_j. Pairs are (j, r_j) with distinct j.
double falling_factorial_moment(std::int64_t n, EwensParam theta,
                                std::span<const std::pair<std::int64_t, std::int64_t>> r);

/// E[I] = N int f + theta sum_{j<=N} Psi_N(j) R_j. Needs series.jmax >= n.
double exact_mean(std::int64_t n, EwensParam theta, const ErrorSeries& series,
                  const FunctionSpec& f);

enum class VarianceMethod { Auto, Direct, Convolution };

/// Var[I] = theta sum_j j R_j^2 Psi(j)
///        + theta^2 sum_{j,j'<=N} R_j R_j' (Psi(j+j') 1{j+j'<=N} - Psi(j) Psi(j')).
/// Direct is the O(N^2) double sum; Convolution evaluates the Psi(j+j') part
/// with an FFT. Auto takes the O(N) path at theta = 1, Direct up to
/// N = 4096 and Convolution beyond.
double exact_variance(std::int64_t n, EwensParam theta, const ErrorSeries& series,
                      const FunctionSpec& f, VarianceMethod method = VarianceMethod::Auto);

/// A_n^alpha = binom(n + alpha, n), alpha > -1.
double cesaro_number(double alpha, std::int64_t n);

/// sigma_n^theta(s) = sum_{j=0}^n A_{n-j}^{theta-1} / A_n^theta s_j. s[0] is s_0.
double cesaro_mean(std::span<const double> s, double order, std::int64_t n);

enum class BoundNorm { L1, L2 };

/// Structural right-hand sides of the coupling bounds, C(theta) left free.
/// L1: {(1/N) sum |u_j|, (theta/N) sum |u_j| Psi_N(j)}.
/// L2: {sigma^1(|u|)^2, sigma^1(u^2), sigma^1(|u|) sigma^theta(|u|), sigma^theta(u^2)}.
std::vector<double> coupling_bound_rhs(std::int64_t n, EwensParam theta, std::span<const double> u,
                                       BoundNorm which);

}  // namespace permspec
