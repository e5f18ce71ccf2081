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
#include <utility>
#include <vector>

#include "permspec/funcs.hpp"
#include "permspec/rng.hpp"

namespace permspec {

/// Ewens parameter theta > 0.
class EwensParam {
 public:
  explicit EwensParam(double theta);
  double value() const noexcept { return theta_; }

 private:
  double theta_;
};

/// Cycle type (alpha_1, ..., alpha_N) of a permutation of N points, stored
/// sparsely as (length, count) pairs with count > 0, sorted by length.
/// A sampled permutation has O(theta log N) cycles, so the dense vector is
/// rarely what a caller wants.
class CycleCounts {
 public:
  using Entry = std::pair<std::int64_t, std::int64_t>;

  /// Throws InvalidCycleType unless sum j * alpha_j == n.
  CycleCounts(std::int64_t n, std::vector<Entry> entries);
  static CycleCounts from_dense(std::int64_t n, const std::vector<std::int64_t>& alpha);

  std::int64_t n() const noexcept { return n_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::int64_t count(std::int64_t j) const noexcept;
  std::int64_t total_cycles() const noexcept;
  std::vector<std::int64_t> dense() const;

  bool operator==(const CycleCounts&) const = default;
  auto operator<=>(const CycleCounts&) const = default;

 private:
  std::int64_t n_;
  std::vector<Entry> entries_;
};

/// Smallest t > after with xi_t = 1, where xi_i ~ Bernoulli(theta/(theta+i-1))
/// independently. Returns limit + 1 when no such t <= limit exists.
/// Draws exactly one uniform.
std::int64_t next_one(std::int64_t after, double theta, Stream& rng, std::int64_t limit);

/// Ewens(theta) cycle counts through the Feller coupling: xi_1 = 1, the
/// later xi are generated by skipping runs of zeros, and C_j(N) counts the
/// spacings of length j in 1 xi_2 ... xi_N 1. Cost O(theta log N) per draw.
CycleCounts sample_cycle_counts(std::int64_t n, EwensParam theta, Stream& rng);

/// Same law, one Bernoulli draw per index. O(N); kept as an independent route.
CycleCounts sample_cycle_counts_bernoulli(std::int64_t n, EwensParam theta, Stream& rng);

/// One joint draw of the Feller coupling, truncated at `horizon`.
struct CouplingRealization {
  std::int64_t n = 0;
  std::int64_t horizon = 0;
  std::vector<std::int64_t> ones;        ///< positions i <= horizon with xi_i = 1; ones[0] == 1
  std::vector<std::int64_t> c;           ///< c[j-1] = C_j(N)
  std::vector<std::int64_t> w;           ///< w[j-1] = W_j, spacings ending at or before horizon
  std::vector<std::int64_t> w_beyond;    ///< w_beyond[j-1] = W_{jN}, spacings starting after N
  std::int64_t j_n = 0;
  std::int64_t k_n = 0;                  ///< exact even when the next 1 lies beyond horizon
  double w_tail_bound = 0.0;             ///< theta^2 / (horizon - n)

  /// |C_j - W_j| <= W_{jN} + 1{J+K = j+1} + 1{J = j}.
  bool inequality_holds(std::int64_t j) const;
  bool inequality_holds() const;
};

/// Throws HorizonTooSmall when horizon < 2n.
CouplingRealization sample_coupling(std::int64_t n, EwensParam theta, std::int64_t horizon,
                                    Stream& rng);

/// nu_{N,theta}[alpha] = (N!/theta_(N)) prod_j (theta/j)^{a_j} / a_j!, in log space.
double exact_cycle_type_pmf(std::int64_t n, EwensParam theta, const CycleCounts& alpha);
double log_cycle_type_pmf(std::int64_t n, EwensParam theta, const CycleCounts& alpha);

/// Every cycle type of n points (integer partitions), in a fixed order.
std::vector<CycleCounts> enumerate_cycle_types(std::int64_t n);

inline constexpr std::int64_t kMaxEnumerationN = 8;

struct LawPoint {
  double value = 0.0;
  double probability = 0.0;
};

/// Exact law of I = N int f + sum_j alpha_j u_j over all cycle types, sorted
/// by value, with values equal to 1e-12 relative merged. n <= 8 (TooLarge).
std::vector<LawPoint> enumerate_exact_distribution(std::int64_t n, EwensParam theta,
                                                   const FunctionSpec& f);

/// Linear statistic of a cycle type given the u_j sequence (u[j-1] = j R_j).
double linear_statistic(const CycleCounts& alpha, double n_integral,
                        const std::vector<double>& u);

}  // namespace permspec
