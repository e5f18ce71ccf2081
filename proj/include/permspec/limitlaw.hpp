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

#include <complex>
#include <cstdint>
#include <vector>

#include "permspec/ewens.hpp"
#include "permspec/funcs.hpp"
#include "permspec/rng.hpp"
#include "permspec/trapezoid.hpp"

namespace permspec {

struct LevyAtom {
  std::int64_t j = 0;
  double location = 0.0;  ///< u_j
  double mass = 0.0;      ///< 1/j
};

/// The infinitely divisible law mu_{f,theta}: Levy measure theta * sum_j (1/j) delta_{u_j},
/// truncated to j <= j_trunc, plus an analytic bound on the dropped variance
/// theta * sum_{j > j_trunc} u_j^2 / j.
struct LimitLawSpec {
  double theta = 1.0;
  std::int64_t j_trunc = 0;
  std::vector<LevyAtom> atoms;
  double tail_variance_bound = 0.0;

  /// theta * sum_atoms mass * location^2: the variance of the truncated law.
  double variance() const;
};

/// Throws WrongRegime unless the function family is in the bounded regime and
/// DegenerateLaw when every u_j vanishes.
LimitLawSpec build_levy(const ErrorSeries& series, const FunctionSpec& f, EwensParam theta,
                        std::int64_t j_trunc);

struct CfValue {
  std::complex<double> value;
  double exponent_tail_bound = 0.0;  ///< |dropped exponent| <= t^2/2 * tail_variance_bound
};

/// exp(theta sum_atoms (1/j)(e^{i t u_j} - 1 - i t u_j)).
CfValue cf_mu(const LimitLawSpec& law, double t);

/// One draw of sum_{j <= j_trunc} u_j (W_j - theta/j), W_j ~ Poisson(theta/j)
/// independent. Throws CannotMeetTolerance when the dropped variance is not
/// below eps^2.
double sample_mu(const LimitLawSpec& law, double eps, Stream& rng);

enum class HnMode { Dense, Sparse };

/// Draws of the centred Poissonized statistic H_N - E[H_N], H_N = sum_{j<=N} u_j W_j,
/// E[H_N] = theta sum_{j<=N} R_j. Precomputes the tables shared by repeated draws.
class HnSampler {
 public:
  HnSampler(const ErrorSeries& series, EwensParam theta, std::int64_t n);

  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  std::int64_t n() const noexcept { return n_; }

  /// Dense: one Poisson per j, O(N). Sparse: total count K ~ Poisson(theta H_N),
  /// then K indices drawn with probability proportional to 1/j. O(theta log N).
  double sample(Stream& rng, HnMode mode) const;

 private:
  std::int64_t n_;
  double theta_;
  std::vector<double> u_;
  std::vector<double> harmonic_;  ///< harmonic_[j-1] = sum_{i<=j} 1/i
  double mean_ = 0.0;
  double variance_ = 0.0;
};

double sample_h_n(const ErrorSeries& series, EwensParam theta, std::int64_t n, Stream& rng,
                  HnMode mode);

struct EtaNormalization {
  std::int64_t n = 0;
  double eta_sq = 0.0;  ///< theta * sum_{j<=N} j R_j^2
};

EtaNormalization eta_normalization(const ErrorSeries& series, EwensParam theta, std::int64_t n);

/// max_{j<=N} |u_j| / eta_N. Throws DegenerateLaw when eta_N = 0.
double max_u_over_eta(const ErrorSeries& series, EwensParam theta, std::int64_t n);

}  // namespace permspec
