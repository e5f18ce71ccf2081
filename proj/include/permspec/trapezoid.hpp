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
#include <string>
#include <vector>

#include "permspec/funcs.hpp"

namespace permspec {

/// Trapezoidal error R_j = (1/j) sum_{k<j} f(k/j) - int f, by direct
/// compensated summation over the j nodes.
double rj_direct(const FunctionSpec& f, std::int64_t j);

/// ({ja} - {jb}) / j. This closed form counts the arc as (a,b]; for the
/// open arc subtract 1/j whenever jb is an integer.
double rj_indicator_closed_form(double a, double b, std::int64_t j);

struct PoissonSum {
  double value = 0.0;
  double tail_bound = 0.0;          ///< bound on |sum_{n > n_terms} a_{jn}|
  bool truncation_warning = false;  ///< tail_bound > tolerance
};

/// R_j as the aliased cosine sum a_j + a_2j + ... truncated after n_terms.
/// For an Indicator this converges to the midpoint value at jumps, so it
/// differs from the direct sum whenever ja or jb is an integer.
PoissonSum rj_poisson(const FunctionSpec& f, std::int64_t j, std::int64_t n_terms,
                      double tolerance = 1e-12);

enum class SeriesMethod { Direct, ClosedForm, PoissonSummation };

std::string to_string(SeriesMethod m);

/// Direct sums for smooth families, the convention-aware closed form for
/// indicators (the direct sum is quadratic in jmax).
SeriesMethod preferred_method(const FunctionSpec& f);

struct ErrorSeries {
  std::int64_t jmax = 0;
  std::vector<double> r;                 ///< r[j-1] = R_j
  std::vector<double> u;                 ///< u[j-1] = j R_j
  std::vector<double> partial_sum_jRj2;  ///< [J-1] = sum_{j<=J} j R_j^2
  SeriesMethod method = SeriesMethod::Direct;
  double max_tail_bound = 0.0;           ///< Poisson method only

  double rj(std::int64_t j) const { return r.at(static_cast<std::size_t>(j - 1)); }
  double uj(std::int64_t j) const { return u.at(static_cast<std::size_t>(j - 1)); }
};

/// Builds R_1..R_jmax. For a trig polynomial of degree k every R_j with
/// j > k is set to exactly 0.
ErrorSeries build_series(const FunctionSpec& f, std::int64_t jmax, SeriesMethod method,
                         std::int64_t poisson_terms = 4096);

inline ErrorSeries build_series(const FunctionSpec& f, std::int64_t jmax) {
  return build_series(f, jmax, preferred_method(f));
}

enum class Regime { Bounded, Divergent, Degenerate, Undetermined };

std::string to_string(Regime r);

struct RegimeReport {
  Regime regime = Regime::Undetermined;
  Regime family_verdict = Regime::Undetermined;
  Regime numeric_verdict = Regime::Undetermined;
  double partial_sum = 0.0;    ///< sum_{j<=jmax} j R_j^2
  double log_slope = 0.0;      ///< fitted d(partial sum)/d(log J) over the upper half decade
  double tail_fraction = 0.0;  ///< share of the partial sum contributed by j > jmax/2
  std::string evidence;
};

/// Family knowledge decides; the numeric partial sums are reported as
/// evidence and turn the verdict into Undetermined when they disagree.
RegimeReport classify_regime(const ErrorSeries& series, const FunctionSpec& f);

inline constexpr double kJacksonConstant = 179.0 / 180.0;

struct JacksonRow {
  std::int64_t j = 0;
  double abs_rj = 0.0;
  double omega2 = 0.0;  ///< omega_2(f, 1/(2j)) grid estimate
  double bound = 0.0;   ///< kJacksonConstant * omega2
  double margin = 0.0;  ///< bound / |R_j|, +inf when R_j = 0
  bool holds = false;
};

struct JacksonReport {
  std::vector<JacksonRow> rows;
  bool all_hold = true;
};

/// |R_j| <= (179/180) omega_2(f, 1/(2j)) on j = 1, 2, 4, ... <= jmax (plus jmax).
/// Violations are reported, not thrown.
JacksonReport jackson_bound_check(const FunctionSpec& f, const ErrorSeries& series,
                                  std::int64_t grid = kDefaultModulusGrid);

}  // namespace permspec
