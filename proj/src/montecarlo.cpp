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

#include "permspec/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "permspec/error.hpp"
#include "permspec/moments.hpp"
#include "permspec/numeric.hpp"
#include "permspec/trapezoid.hpp"

namespace permspec {
namespace {

constexpr double kTvDelta = 0.01;
constexpr double kKsCritical = 1.63;  // 1% point of the Kolmogorov distribution
constexpr std::int64_t kMaxHistogramBins = 10'000;

bool is_integer(double x) { return std::abs(x - std::nearbyint(x)) <= 1e-9 * std::max(1.0, std::abs(x)); }

double iqr(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
  };
  return quantile(0.75) - quantile(0.25);
}

std::vector<double> centred(std::span<const double> values, double mean) {
  std::vector<double> out(values.begin(), values.end());
  for (auto& v : out) v -= mean;
  return out;
}

double cf_deviation(const EmpiricalCf& cf, const LimitLawSpec& law) {
  double worst = 0.0;
  for (std::size_t i = 0; i < cf.t.size(); ++i)
    worst = std::max(worst, std::abs(cf.value[i] - cf_mu(law, cf.t[i]).value));
  return worst;
}

void compare_gaussian(EmpiricalReport& rep, std::span<const double> values, double mean, double var) {
  if (!(var > 0.0)) return;
  const double sd = std::sqrt(var);
  std::vector<double> z(values.begin(), values.end());
  for (auto& v : z) v = (v - mean) / sd;
  rep.ks = ks_distance(z, normal_cdf);
  rep.ks_radius = kKsCritical / std::sqrt(static_cast<double>(values.size()));
}

void compare_point_mass(EmpiricalReport& rep, std::span<const double> values, double at) {
  rep.ks = ks_distance(values, [at](double x) { return x >= at ? 1.0 : 0.0; });
  rep.ks_radius = 0.0;
}

void compare_exact_law(EmpiricalReport& rep, std::span<const double> values,
                       const std::vector<LawPoint>& law) {
  rep.tv = tv_distance(values, law);
  rep.tv_radius = multinomial_tv_radius(static_cast<std::int64_t>(law.size()),
                                        static_cast<std::int64_t>(values.size()), kTvDelta);
}

}  // namespace

std::string to_string(SimulationMode m) {
  switch (m) {
    case SimulationMode::Statistic: return "statistic";
    case SimulationMode::CycleCounts: return "cycle_counts";
    case SimulationMode::Coupling: return "coupling";
    case SimulationMode::HN: return "h_n";
    case SimulationMode::MuLimit: return "mu_limit";
  }
  return "statistic";
}

SimulationMode parse_simulation_mode(std::string_view text) {
  for (auto m : {SimulationMode::Statistic, SimulationMode::CycleCounts, SimulationMode::Coupling,
                 SimulationMode::HN, SimulationMode::MuLimit})
    if (text == to_string(m)) return m;
  throw Error(ErrorKind::ParseError, "unknown mode '" + std::string(text) +
                                         "' (expected statistic, cycle_counts, coupling, h_n or mu_limit)");
}

void SimulationConfig::validate() const {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
  if (!(theta > 0.0)) throw Error(ErrorKind::InvalidArgument, "theta must be positive");
  if (replicates < 1) throw Error(ErrorKind::InvalidArgument, "replicates must be at least 1");
  if (workers < 1) throw Error(ErrorKind::InvalidArgument, "workers must be at least 1");
  if (!(horizon_factor >= 2.0)) throw Error(ErrorKind::InvalidArgument, "horizon_factor must be at least 2");
  if (!(mu_eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu_eps must be positive");
}

std::vector<double> default_cf_grid() {
  std::vector<double> t;
  for (int k = -10; k <= 10; ++k) t.push_back(0.5 * k);
  return t;
}

std::int64_t coupling_horizon(std::int64_t n, double horizon_factor) {
  const double h = std::min(horizon_factor * static_cast<double>(n),
                            static_cast<double>(kMaxCouplingHorizon));
  return std::max(static_cast<std::int64_t>(h), 2 * n);
}

Histogram make_histogram(std::span<const double> values, double offset) {
  if (values.empty()) throw Error(ErrorKind::EmptySample, "sample is empty");
  Histogram h;
  h.offset = offset;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  const double m = static_cast<double>(values.size());

  h.lattice = std::all_of(values.begin(), values.end(), [&](double v) { return is_integer(v - offset); }) &&
              (hi - lo) < static_cast<double>(kMaxHistogramBins);
  double width, start;
  std::int64_t bins;
  if (h.lattice) {
    width = 1.0;
    start = offset + std::nearbyint(lo - offset) - 0.5;
    bins = static_cast<std::int64_t>(std::nearbyint(hi - lo)) + 1;
  } else {
    width = 2.0 * iqr(std::vector<double>(values.begin(), values.end())) / std::cbrt(m);
    if (!(width > 0.0)) width = hi > lo ? (hi - lo) / std::ceil(std::sqrt(m)) : 1.0;
    bins = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((hi - lo) / width)));
    if (bins > kMaxHistogramBins) {
      bins = kMaxHistogramBins;
      width = (hi - lo) / static_cast<double>(bins);
    }
    start = lo;
  }
  for (std::int64_t b = 0; b <= bins; ++b) h.edges.push_back(start + width * static_cast<double>(b));
  std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    auto b = static_cast<std::int64_t>(std::floor((v - start) / width));
    b = std::clamp<std::int64_t>(b, 0, bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  for (auto c : counts) h.mass.push_back(static_cast<double>(c) / m);
  return h;
}

void parallel_for(std::int64_t count, int workers, const std::function<void(std::int64_t)>& body) {
  const std::int64_t w = std::clamp<std::int64_t>(workers, 1, std::max<std::int64_t>(count, 1));
  if (w == 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> threads;
  const std::int64_t block = (count + w - 1) / w;
  for (std::int64_t k = 0; k < w; ++k) {
    const std::int64_t lo = k * block, hi = std::min(count, lo + block);
    threads.emplace_back([&, lo, hi] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first) std::rethrow_exception(first);
}

SimulationResult run(const SimulationConfig& config) {
  config.validate();
  SimulationResult out;
  out.config = config;
  if (out.config.cf_grid.empty()) out.config.cf_grid = default_cf_grid();

  const std::int64_t n = config.n;
  const EwensParam theta(config.theta);
  const FunctionSpec& f = config.function;
  const ErrorSeries series = build_series(f, n);
  const double n_integral = static_cast<double>(n) * integral(f);
  const auto reps = config.replicates;
  out.values.assign(static_cast<std::size_t>(reps), 0.0);

  auto& rep = out.report;
  std::optional<LimitLawSpec> law;
  double offset = 0.0;

  switch (config.mode) {
    case SimulationMode::Statistic:
    case SimulationMode::CycleCounts: {
      const bool keep = config.mode == SimulationMode::CycleCounts;
      if (keep) out.cycle_counts.assign(static_cast<std::size_t>(reps), CycleCounts(1, {{1, 1}}));
      parallel_for(reps, config.workers, [&](std::int64_t i) {
        Stream rng = replicate_stream(config.master_seed, static_cast<std::uint64_t>(i));
        CycleCounts alpha = sample_cycle_counts(n, theta, rng);
        out.values[static_cast<std::size_t>(i)] = linear_statistic(alpha, n_integral, series.u);
        if (keep) out.cycle_counts[static_cast<std::size_t>(i)] = std::move(alpha);
      });
      offset = n_integral;
      rep.reference_mean = exact_mean(n, theta, series, f);
      rep.reference_variance = exact_variance(n, theta, series, f);
      const auto regime = classify_regime(series, f);
      if (keep && n <= kMaxEnumerationN) {
        // TV over cycle types rather than over values of I.
        const auto types = enumerate_cycle_types(n);
        std::map<CycleCounts, std::int64_t> index;
        std::vector<LawPoint> exact;
        for (std::size_t k = 0; k < types.size(); ++k) {
          index.emplace(types[k], static_cast<std::int64_t>(k));
          exact.push_back({static_cast<double>(k), exact_cycle_type_pmf(n, theta, types[k])});
        }
        std::vector<double> labels;
        for (const auto& a : out.cycle_counts) labels.push_back(static_cast<double>(index.at(a)));
        rep.reference = "exact cycle-type pmf";
        compare_exact_law(rep, labels, exact);
      } else if (n <= kMaxEnumerationN) {
        rep.reference = "exact law of I by enumeration";
        compare_exact_law(rep, out.values, enumerate_exact_distribution(n, theta, f));
      } else if (regime.regime == Regime::Degenerate) {
        rep.reference = "point mass at N*integral";
        compare_point_mass(rep, out.values, n_integral);
      } else if (regime.regime == Regime::Divergent) {
        rep.reference = "N(0,1) after standardising by exact mean and variance";
        compare_gaussian(rep, out.values, *rep.reference_mean, *rep.reference_variance);
      } else if (regime.regime == Regime::Bounded) {
        rep.reference = "cf of the limit law mu_{f,theta}";
        law = build_levy(series, f, theta, n);
      }
      break;
    }
    case SimulationMode::Coupling: {
      const std::int64_t horizon = coupling_horizon(n, config.horizon_factor);
      parallel_for(reps, config.workers, [&](std::int64_t i) {
        Stream rng = replicate_stream(config.master_seed, static_cast<std::uint64_t>(i));
        const auto c = sample_coupling(n, theta, horizon, rng);
        KahanSum diff;
        for (std::int64_t j = 1; j <= n; ++j) {
          const auto k = static_cast<std::size_t>(j - 1);
          if (c.c[k] != c.w[k]) diff.add(series.u[k] * static_cast<double>(c.c[k] - c.w[k]));
        }
        out.values[static_cast<std::size_t>(i)] = diff.value();
      });
      rep.reference = "none (G_N - H_N)";
      break;
    }
    case SimulationMode::HN: {
      const HnSampler sampler(series, theta, n);
      parallel_for(reps, config.workers, [&](std::int64_t i) {
        Stream rng = replicate_stream(config.master_seed, static_cast<std::uint64_t>(i));
        out.values[static_cast<std::size_t>(i)] = sampler.sample(rng, config.hn_mode);
      });
      rep.reference_mean = 0.0;
      rep.reference_variance = sampler.variance();
      const auto regime = classify_regime(series, f);
      if (regime.regime == Regime::Divergent) {
        rep.reference = "N(0,1) after dividing by eta_N";
        compare_gaussian(rep, out.values, 0.0, sampler.variance());
      } else if (regime.regime == Regime::Bounded) {
        rep.reference = "cf of the limit law mu_{f,theta}";
        law = build_levy(series, f, theta, n);
      } else {
        rep.reference = "point mass at 0";
        compare_point_mass(rep, out.values, 0.0);
      }
      break;
    }
    case SimulationMode::MuLimit: {
      law = build_levy(series, f, theta, n);
      parallel_for(reps, config.workers, [&](std::int64_t i) {
        Stream rng = replicate_stream(config.master_seed, static_cast<std::uint64_t>(i));
        out.values[static_cast<std::size_t>(i)] = sample_mu(*law, config.mu_eps, rng);
      });
      rep.reference = "cf of the truncated limit law mu_{f,theta}";
      rep.reference_mean = 0.0;
      rep.reference_variance = law->variance();
      break;
    }
  }

  rep.moments = sample_moments(out.values);
  rep.histogram = make_histogram(out.values, offset);
  const auto c = centred(out.values, rep.reference_mean.value_or(0.0));
  rep.cf = empirical_cf(c, out.config.cf_grid);
  if (law) rep.cf_max_deviation = cf_deviation(rep.cf, *law);
  return out;
}

CouplingReport coupling_experiment(std::int64_t n, EwensParam theta, std::span<const double> u,
                                   std::int64_t reps, double horizon_factor,
                                   std::uint64_t master_seed, int workers) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
  if (static_cast<std::int64_t>(u.size()) != n)
    throw Error(ErrorKind::InvalidArgument, "u must have length n");
  if (reps < 1) throw Error(ErrorKind::InvalidArgument, "reps must be at least 1");
  if (workers < 1) throw Error(ErrorKind::InvalidArgument, "workers must be at least 1");
  const double th = theta.value();
  const auto sz = static_cast<std::size_t>(n);

  CouplingReport out;
  out.n = n;
  out.theta = th;
  out.reps = reps;
  out.horizon = static_cast<std::int64_t>(std::min(horizon_factor * static_cast<double>(n),
                                                   static_cast<double>(kMaxCouplingHorizon)));
  if (out.horizon < 2 * n)
    throw Error(ErrorKind::HorizonTooSmall, "horizon " + std::to_string(out.horizon) +
                                                " is below 2n = " + std::to_string(2 * n));

  // Integer tallies merge exactly, so per-worker partial sums keep the
  // result independent of scheduling.
  struct Tally {
    std::vector<std::int64_t> w_beyond, w_beyond_sq, j_count, jk_count;
    std::int64_t violations = 0;
  };
  const int w = static_cast<int>(std::clamp<std::int64_t>(workers, 1, reps));
  std::vector<Tally> tallies(static_cast<std::size_t>(w));
  for (auto& t : tallies) {
    t.w_beyond.assign(sz, 0);
    t.w_beyond_sq.assign(sz, 0);
    t.j_count.assign(sz, 0);
    t.jk_count.assign(sz, 0);
  }
  std::vector<double> diffs(static_cast<std::size_t>(reps), 0.0);
  const std::int64_t block = (reps + w - 1) / w;
  parallel_for(w, w, [&](std::int64_t k) {
    Tally& t = tallies[static_cast<std::size_t>(k)];
    for (std::int64_t i = k * block; i < std::min(reps, (k + 1) * block); ++i) {
      Stream rng = replicate_stream(master_seed, static_cast<std::uint64_t>(i));
      const auto c = sample_coupling(n, theta, out.horizon, rng);
      KahanSum diff;
      for (std::size_t j = 0; j < sz; ++j) {
        if (c.c[j] != c.w[j]) diff.add(u[j] * static_cast<double>(c.c[j] - c.w[j]));
        t.w_beyond[j] += c.w_beyond[j];
        t.w_beyond_sq[j] += c.w_beyond[j] * c.w_beyond[j];
      }
      diffs[static_cast<std::size_t>(i)] = diff.value();
      ++t.j_count[static_cast<std::size_t>(c.j_n - 1)];
      const std::int64_t jk = c.j_n + c.k_n - 1;
      if (jk >= 1 && jk <= n) ++t.jk_count[static_cast<std::size_t>(jk - 1)];
      if (!c.inequality_holds()) ++t.violations;
    }
  });
  Tally total = tallies[0];
  for (std::size_t k = 1; k < tallies.size(); ++k) {
    for (std::size_t j = 0; j < sz; ++j) {
      total.w_beyond[j] += tallies[k].w_beyond[j];
      total.w_beyond_sq[j] += tallies[k].w_beyond_sq[j];
      total.j_count[j] += tallies[k].j_count[j];
      total.jk_count[j] += tallies[k].jk_count[j];
    }
    total.violations += tallies[k].violations;
  }

  const double m = static_cast<double>(reps);
  out.w_tail_bound = th * th / static_cast<double>(out.horizon - n);
  std::vector<double> abs_d(diffs.size()), sq_d(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    abs_d[i] = std::abs(diffs[i]);
    sq_d[i] = diffs[i] * diffs[i];
  }
  const auto ma = sample_moments(abs_d);
  const auto ms = sample_moments(sq_d);
  out.mean_abs_diff = ma.mean;
  out.mean_abs_diff_stderr = ma.mean_stderr;
  out.mean_sq_diff = ms.mean;
  out.mean_sq_diff_stderr = ms.mean_stderr;
  out.l1_rhs = coupling_bound_rhs(n, theta, u, BoundNorm::L1);
  out.l2_rhs = coupling_bound_rhs(n, theta, u, BoundNorm::L2);
  auto ratio = [](double num, const std::vector<double>& parts) {
    double s = 0.0;
    for (double p : parts) s += p;
    return s > 0.0 ? num / s : 0.0;
  };
  out.implied_c_l1 = ratio(out.mean_abs_diff, out.l1_rhs);
  out.implied_c_l2 = ratio(out.mean_sq_diff, out.l2_rhs);

  out.w_beyond_bound = n > 1 ? th * th / static_cast<double>(n - 1)
                             : std::numeric_limits<double>::infinity();
  const PsiTable psi_table(n, theta);
  out.jk_bound = th / static_cast<double>(n);
  for (std::size_t j = 0; j < sz; ++j) {
    const double mean = static_cast<double>(total.w_beyond[j]) / m;
    const double var = std::max(0.0, static_cast<double>(total.w_beyond_sq[j]) / m - mean * mean);
    out.w_beyond_max_mean = std::max(out.w_beyond_max_mean, mean);
    if (mean > out.w_beyond_bound + 3.0 * std::sqrt(var / m) + 1e-15) out.w_beyond_holds = false;

    out.j_frequency.push_back(static_cast<double>(total.j_count[j]) / m);
    out.j_exact.push_back(th / static_cast<double>(n) * psi_table.values()[j]);

    const double p = static_cast<double>(total.jk_count[j]) / m;
    out.jk_max_frequency = std::max(out.jk_max_frequency, p);
    const double q = std::min(1.0, std::max(p, out.jk_bound));
    if (p > out.jk_bound + 3.0 * std::sqrt(q * (1.0 - q) / m) + 1e-15) out.jk_holds = false;
  }
  out.j_chi_square = chi_square_test(total.j_count, out.j_exact);
  out.inequality_violations = total.violations;
  return out;
}

bool EnumerationReport::moments_agree(double tol) const {
  auto close = [tol](double a, double b) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); };
  return close(exact_mean, enumeration_mean) && close(exact_variance, enumeration_variance);
}

EnumerationReport verify_against_enumeration(std::int64_t n, EwensParam theta, const FunctionSpec& f,
                                             std::int64_t reps, std::uint64_t master_seed, int workers) {
  if (n > kMaxVerifyN) throw Error(ErrorKind::TooLarge, "verification by enumeration needs n <= 7");
  if (reps < 1) throw Error(ErrorKind::InvalidArgument, "reps must be at least 1");
  EnumerationReport out;
  out.n = n;
  out.theta = theta.value();
  out.reps = reps;
  const ErrorSeries series = build_series(f, n);
  out.exact_mean = exact_mean(n, theta, series, f);
  out.exact_variance = exact_variance(n, theta, series, f, VarianceMethod::Direct);
  out.law = enumerate_exact_distribution(n, theta, f);
  KahanSum m1;
  for (const auto& p : out.law) m1.add(p.probability * p.value);
  out.enumeration_mean = m1.value();
  KahanSum m2;
  for (const auto& p : out.law) {
    const double d = p.value - out.enumeration_mean;
    m2.add(p.probability * d * d);
  }
  out.enumeration_variance = m2.value();

  SimulationConfig cfg;
  cfg.n = n;
  cfg.theta = theta.value();
  cfg.function = f;
  cfg.replicates = reps;
  cfg.master_seed = master_seed;
  cfg.workers = workers;
  const auto sim = run(cfg);
  out.tv = tv_distance(sim.values, out.law);
  out.tv_radius = multinomial_tv_radius(static_cast<std::int64_t>(out.law.size()), reps, kTvDelta);
  return out;
}

}  // namespace permspec
