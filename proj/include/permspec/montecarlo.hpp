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
#include <functional>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "permspec/ewens.hpp"
#include "permspec/funcs.hpp"
#include "permspec/limitlaw.hpp"
#include "permspec/stats.hpp"

namespace permspec {

enum class SimulationMode { Statistic, CycleCounts, Coupling, HN, MuLimit };

std::string to_string(SimulationMode m);
/// Accepts statistic, cycle_counts, coupling, h_n, mu_limit. Throws ParseError.
SimulationMode parse_simulation_mode(std::string_view text);

inline constexpr double kDefaultHorizonFactor = 100.0;
inline constexpr std::int64_t kMaxCouplingHorizon = 10'000'000;

struct SimulationConfig {
  std::int64_t n = 10;
  double theta = 1.0;
  FunctionSpec function = FunctionSpec::trig(0.0, {1.0});
  std::int64_t replicates = 1000;
  std::uint64_t master_seed = 0;
  int workers = 1;
  SimulationMode mode = SimulationMode::Statistic;
  double horizon_factor = kDefaultHorizonFactor;
  HnMode hn_mode = HnMode::Sparse;
  double mu_eps = 1e-3;            ///< mu_limit: required sqrt of the dropped variance
  std::vector<double> cf_grid;     ///< empty means t = -5, -4.5, ..., 5

  /// Throws InvalidArgument on n < 1, replicates < 1, workers < 1,
  /// theta <= 0 or horizon_factor < 2.
  void validate() const;
};

std::vector<double> default_cf_grid();

/// horizon = min(horizon_factor * n, 10^7), raised to 2n when that is larger.
std::int64_t coupling_horizon(std::int64_t n, double horizon_factor);

struct Histogram {
  bool lattice = false;        ///< unit bins centred on the points offset + k
  double offset = 0.0;
  std::vector<double> edges;   ///< bins.size() + 1 entries
  std::vector<double> mass;    ///< sums to 1
};

/// Unit lattice bins when every value minus `offset` is an integer, else
/// Freedman-Diaconis bins.
Histogram make_histogram(std::span<const double> values, double offset);

struct EmpiricalReport {
  Moments moments;
  Histogram histogram;
  EmpiricalCf cf;  ///< of the centred values (value - reference_mean when known)

  std::string reference;  ///< what the sample is compared against
  std::optional<double> reference_mean;
  std::optional<double> reference_variance;
  std::optional<double> ks;             ///< vs N(0,1) after standardising, or a point mass
  std::optional<double> ks_radius;      ///< 1.63 / sqrt(m)
  std::optional<double> tv;             ///< vs an exact discrete law
  std::optional<double> tv_radius;      ///< 99% multinomial radius
  std::optional<double> cf_max_deviation;  ///< sup_t |empirical cf - cf_mu|
};

struct SimulationResult {
  SimulationConfig config;
  std::vector<double> values;              ///< one per replicate, index order
  std::vector<CycleCounts> cycle_counts;   ///< cycle_counts mode only
  EmpiricalReport report;
};

/// Runs the configured mode. Replicate i draws from replicate_stream(seed, i)
/// and aggregation follows replicate order, so the result does not depend on
/// the worker count. Any error aborts the whole run.
SimulationResult run(const SimulationConfig& config);

/// Runs body(i) for i in [0, count) on `workers` threads in contiguous
/// blocks. The first exception thrown by any worker is rethrown.
void parallel_for(std::int64_t count, int workers, const std::function<void(std::int64_t)>& body);

struct CouplingReport {
  std::int64_t n = 0;
  double theta = 1.0;
  std::int64_t reps = 0;
  std::int64_t horizon = 0;
  double w_tail_bound = 0.0;

  double mean_abs_diff = 0.0;  ///< E|G_N - H_N|
  double mean_abs_diff_stderr = 0.0;
  double mean_sq_diff = 0.0;   ///< E(G_N - H_N)^2
  double mean_sq_diff_stderr = 0.0;
  std::vector<double> l1_rhs;
  std::vector<double> l2_rhs;
  double implied_c_l1 = 0.0;   ///< mean_abs_diff / sum(l1_rhs), 0 when the sum is 0
  double implied_c_l2 = 0.0;

  /// E W_{jN} <= theta^2/(N-1) for every j, allowing 3 standard errors.
  double w_beyond_bound = 0.0;
  double w_beyond_max_mean = 0.0;
  bool w_beyond_holds = true;

  /// P[J_N = j] against (theta/N) Psi_N(j).
  std::vector<double> j_frequency;
  std::vector<double> j_exact;
  ChiSquare j_chi_square;

  /// P[J_N + K_N = j + 1] <= theta/N, allowing 3 standard errors.
  double jk_bound = 0.0;
  double jk_max_frequency = 0.0;
  bool jk_holds = true;

  std::int64_t inequality_violations = 0;
};

/// Joint realizations of the Feller coupling with G_N = sum u_j C_j(N) and
/// H_N = sum u_j W_j. Throws InvalidArgument unless u has length n.
CouplingReport coupling_experiment(std::int64_t n, EwensParam theta, std::span<const double> u,
                                   std::int64_t reps, double horizon_factor,
                                   std::uint64_t master_seed, int workers = 1);

struct EnumerationReport {
  std::int64_t n = 0;
  double theta = 1.0;
  std::int64_t reps = 0;
  double exact_mean = 0.0;
  double enumeration_mean = 0.0;
  double exact_variance = 0.0;
  double enumeration_variance = 0.0;
  std::vector<LawPoint> law;
  double tv = 0.0;
  double tv_radius = 0.0;

  bool moments_agree(double tol = 1e-9) const;
  bool tv_within_radius() const { return tv <= tv_radius; }
};

/// Cross-checks the moment formulas and the sampler against full enumeration.
/// Throws TooLarge when n > 7.
EnumerationReport verify_against_enumeration(std::int64_t n, EwensParam theta,
                                             const FunctionSpec& f, std::int64_t reps,
                                             std::uint64_t master_seed, int workers = 1);

inline constexpr std::int64_t kMaxVerifyN = 7;

}  // namespace permspec
