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
#include <functional>
#include <span>
#include <vector>

#include "permspec/ewens.hpp"

namespace permspec {

double normal_cdf(double x);

/// sup_x |F_sample(x) - cdf(x)|. Exact for any right-continuous cdf,
/// continuous or not (left limits are taken one ulp below each sample point).
double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Two-sample sup distance between empirical CDFs.
double ks_distance(std::span<const double> a, std::span<const double> b);

struct EmpiricalCf {
  std::vector<double> t;
  std::vector<std::complex<double>> value;
  double radius = 0.0;  ///< 4 / sqrt(m)
};

EmpiricalCf empirical_cf(std::span<const double> sample, std::span<const double> t_grid);

/// Total variation between an empirical sample and an exact discrete law.
/// Sample values are matched to law points within 1e-9 relative; unmatched
/// sample mass counts in full.
double tv_distance(std::span<const double> sample, std::span<const LawPoint> law);

/// Total variation between two discrete laws given as (value, probability).
double tv_distance(std::span<const LawPoint> p, std::span<const LawPoint> q);

/// Radius r with P[TV(empirical, truth) >= r] <= delta for m draws from a law
/// on k points (L1 deviation inequality of Weissman et al., halved).
double multinomial_tv_radius(std::int64_t k, std::int64_t m, double delta);

struct ChiSquare {
  double statistic = 0.0;
  std::int64_t dof = 0;
  double p_value = 1.0;
};

/// Pearson test of observed counts against probabilities; adjacent cells are
/// pooled until every expected count is at least min_expected.
ChiSquare chi_square_test(std::span<const std::int64_t> observed, std::span<const double> probs,
                          double min_expected = 5.0);

struct Moments {
  std::int64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  double skewness = 0.0;
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;  ///< sqrt((m4 - var^2) / m)
};

/// Two-pass moments in index order; bitwise reproducible for a given sample.
Moments sample_moments(std::span<const double> sample);

}  // namespace permspec
