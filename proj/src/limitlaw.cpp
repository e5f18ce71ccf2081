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

#include "permspec/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "permspec/error.hpp"
#include "permspec/numeric.hpp"

namespace permspec {
namespace {

void require_series(const ErrorSeries& series, std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (series.jmax < n)
    throw Error(ErrorKind::SeriesTooShort, "series has jmax = " + std::to_string(series.jmax) +
                                               " but n = " + std::to_string(n));
}

double plateau_sup_second_derivative(const FunctionSpec& f) {
  const auto& p = *f.as<SmoothPlateau>();
  constexpr int kNodes = 1 << 14;
  double best = 0.0;
  for (int i = 0; i <= kNodes; ++i) {
    const double x = p.a - p.eps + p.eps * static_cast<double>(i) / kNodes;
    best = std::max(best, std::abs(second_derivative(f, x)));
  }
  return best;
}

// theta * sum_{j > j_trunc} u_j^2 / j, bounded per family.
double tail_variance(const FunctionSpec& f, double theta, std::int64_t j_trunc) {
  if (f.is_trig()) {
    KahanSum acc;
    for (std::int64_t j = j_trunc + 1; j <= f.degree(); ++j) {
      const double r = rj_direct(f, j);
      acc.add(static_cast<double>(j) * r * r);
    }
    return theta * acc.value();
  }
  // |R_j| <= C omega_2(f, 1/(2j)) <= C sup|f''| / (4 j^2), so u_j^2 / j <= (C M)^2 / (16 j^3)
  // and sum_{j > J} j^-3 <= 1 / (2 J^2). The grid sup gets 5% headroom.
  const double m = 1.05 * plateau_sup_second_derivative(f);
  const double cm = kJacksonConstant * m;
  const double jt = static_cast<double>(j_trunc);
  return theta * cm * cm / (32.0 * jt * jt);
}

}  // namespace

double LimitLawSpec::variance() const {
  KahanSum acc;
  for (const auto& a : atoms) acc.add(a.mass * a.location * a.location);
  return theta * acc.value();
}

LimitLawSpec build_levy(const ErrorSeries& series, const FunctionSpec& f, EwensParam theta,
                        std::int64_t j_trunc) {
  require_series(series, j_trunc);
  const auto regime = classify_regime(series, f);
  if (regime.family_verdict == Regime::Divergent)
    throw Error(ErrorKind::WrongRegime, "sum j R_j^2 diverges for " + f.family() +
                                            "; use the Gaussian normalization instead");
  if (regime.family_verdict == Regime::Degenerate)
    throw Error(ErrorKind::DegenerateLaw, "all R_j vanish; the statistic is non-random");

  LimitLawSpec law;
  law.theta = theta.value();
  law.j_trunc = j_trunc;
  for (std::int64_t j = 1; j <= j_trunc; ++j) {
    const double u = series.uj(j);
    if (u != 0.0) law.atoms.push_back({j, u, 1.0 / static_cast<double>(j)});
  }
  law.tail_variance_bound = tail_variance(f, law.theta, j_trunc);
  if (law.atoms.empty() && law.tail_variance_bound == 0.0)
    throw Error(ErrorKind::DegenerateLaw, "no nonzero u_j: the law is a point mass");
  return law;
}

CfValue cf_mu(const LimitLawSpec& law, double t) {
  KahanSum re, im;
  for (const auto& a : law.atoms) {
    const double x = t * a.location;
    const double half = std::sin(0.5 * x);
    re.add(a.mass * (-2.0 * half * half));  // cos x - 1
    im.add(a.mass * (std::sin(x) - x));
  }
  const std::complex<double> exponent(law.theta * re.value(), law.theta * im.value());
  return {std::exp(exponent), 0.5 * t * t * law.tail_variance_bound};
}

double sample_mu(const LimitLawSpec& law, double eps, Stream& rng) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  if (!(law.tail_variance_bound < eps * eps))
    throw Error(ErrorKind::CannotMeetTolerance,
                "dropped variance bound " + std::to_string(law.tail_variance_bound) +
                    " is not below eps^2; rebuild the law with a larger j_trunc");
  KahanSum acc;
  for (const auto& a : law.atoms) {
    const double mean = law.theta * a.mass;
    acc.add(a.location * (static_cast<double>(poisson(rng, mean)) - mean));
  }
  return acc.value();
}

HnSampler::HnSampler(const ErrorSeries& series, EwensParam theta, std::int64_t n)
    : n_(n), theta_(theta.value()) {
  require_series(series, n);
  u_.assign(series.u.begin(), series.u.begin() + n);
  harmonic_.resize(static_cast<std::size_t>(n));
  KahanSum h, m, v;
  for (std::int64_t j = 1; j <= n; ++j) {
    const double inv = 1.0 / static_cast<double>(j);
    const double u = u_[static_cast<std::size_t>(j - 1)];
    h.add(inv);
    harmonic_[static_cast<std::size_t>(j - 1)] = h.value();
    m.add(u * inv);
    v.add(u * u * inv);
  }
  mean_ = theta_ * m.value();
  variance_ = theta_ * v.value();
}

double HnSampler::sample(Stream& rng, HnMode mode) const {
  KahanSum acc;
  if (mode == HnMode::Dense) {
    for (std::int64_t j = 1; j <= n_; ++j) {
      const double u = u_[static_cast<std::size_t>(j - 1)];
      if (u == 0.0) continue;
      acc.add(u * static_cast<double>(poisson(rng, theta_ / static_cast<double>(j))));
    }
  } else {
    const double total = harmonic_.back();
    const std::int64_t k = poisson(rng, theta_ * total);
    for (std::int64_t i = 0; i < k; ++i) {
      const double target = rng.uniform() * total;
      auto it = std::lower_bound(harmonic_.begin(), harmonic_.end(), target);
      if (it == harmonic_.end()) --it;
      acc.add(u_[static_cast<std::size_t>(it - harmonic_.begin())]);
    }
  }
  return acc.value() - mean_;
}

double sample_h_n(const ErrorSeries& series, EwensParam theta, std::int64_t n, Stream& rng,
                  HnMode mode) {
  return HnSampler(series, theta, n).sample(rng, mode);
}

EtaNormalization eta_normalization(const ErrorSeries& series, EwensParam theta, std::int64_t n) {
  require_series(series, n);
  return {n, theta.value() * series.partial_sum_jRj2[static_cast<std::size_t>(n - 1)]};
}

double max_u_over_eta(const ErrorSeries& series, EwensParam theta, std::int64_t n) {
  const auto eta = eta_normalization(series, theta, n);
  if (!(eta.eta_sq > 0.0))
    throw Error(ErrorKind::DegenerateLaw, "eta_N = 0: every u_j up to N vanishes");
  double m = 0.0;
  for (std::int64_t j = 1; j <= n; ++j) m = std::max(m, std::abs(series.uj(j)));
  return m / std::sqrt(eta.eta_sq);
}

}  // namespace permspec
