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

#include "permspec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "permspec/error.hpp"
#include "permspec/numeric.hpp"

namespace permspec {
namespace {

void require_nonempty(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::EmptySample, "sample is empty");
}

bool same_value(double x, double y) {
  return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y));
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf) {
  require_nonempty(sample.size());
  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  const double m = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t k = i;
    while (k < xs.size() && xs[k] == xs[i]) ++k;
    const double x = xs[i];
    const double below = static_cast<double>(i) / m;  // F_m(x-)
    const double at = static_cast<double>(k) / m;     // F_m(x)
    const double f_left = cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    d = std::max({d, std::abs(at - cdf(x)), std::abs(below - f_left)});
    i = k;
  }
  return d;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a.size());
  require_nonempty(b.size());
  std::vector<double> xa(a.begin(), a.end()), xb(b.begin(), b.end());
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  const double ma = static_cast<double>(xa.size());
  const double mb = static_cast<double>(xb.size());
  std::size_t i = 0, k = 0;
  double d = 0.0;
  while (i < xa.size() || k < xb.size()) {
    double x;
    if (k == xb.size()) x = xa[i];
    else if (i == xa.size()) x = xb[k];
    else x = std::min(xa[i], xb[k]);
    while (i < xa.size() && xa[i] == x) ++i;
    while (k < xb.size() && xb[k] == x) ++k;
    d = std::max(d, std::abs(static_cast<double>(i) / ma - static_cast<double>(k) / mb));
  }
  return d;
}

EmpiricalCf empirical_cf(std::span<const double> sample, std::span<const double> t_grid) {
  require_nonempty(sample.size());
  EmpiricalCf out;
  out.t.assign(t_grid.begin(), t_grid.end());
  const double m = static_cast<double>(sample.size());
  for (double t : t_grid) {
    KahanSum re, im;
    for (double x : sample) {
      re.add(std::cos(t * x));
      im.add(std::sin(t * x));
    }
    out.value.emplace_back(re.value() / m, im.value() / m);
  }
  out.radius = 4.0 / std::sqrt(m);
  return out;
}

double tv_distance(std::span<const double> sample, std::span<const LawPoint> law) {
  require_nonempty(sample.size());
  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  std::vector<LawPoint> empirical;
  for (double x : xs) {
    if (!empirical.empty() && same_value(x, empirical.back().value)) empirical.back().probability += 1.0;
    else empirical.push_back({x, 1.0});
  }
  for (auto& p : empirical) p.probability /= static_cast<double>(xs.size());
  return tv_distance(empirical, law);
}

double tv_distance(std::span<const LawPoint> p, std::span<const LawPoint> q) {
  std::vector<bool> q_used(q.size(), false);
  KahanSum acc;
  for (const auto& a : p) {
    double match = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (!q_used[k] && same_value(a.value, q[k].value)) {
        match = q[k].probability;
        q_used[k] = true;
        break;
      }
    }
    acc.add(std::abs(a.probability - match));
  }
  for (std::size_t k = 0; k < q.size(); ++k)
    if (!q_used[k]) acc.add(q[k].probability);
  return 0.5 * acc.value();
}

double multinomial_tv_radius(std::int64_t k, std::int64_t m, double delta) {
  if (k < 1 || m < 1 || !(delta > 0.0 && delta < 1.0))
    throw Error(ErrorKind::InvalidArgument, "need k >= 1, m >= 1, 0 < delta < 1");
  if (k == 1) return 0.0;
  // ln(2^k - 2), computed without overflow.
  const double dk = static_cast<double>(k);
  const double log_cells = dk < 60 ? std::log(std::exp2(dk) - 2.0) : dk * std::numbers::ln2;
  const double l1 = std::sqrt(2.0 * (log_cells - std::log(delta)) / static_cast<double>(m));
  return 0.5 * l1;
}

ChiSquare chi_square_test(std::span<const std::int64_t> observed, std::span<const double> probs,
                          double min_expected) {
  if (observed.size() != probs.size() || observed.empty())
    throw Error(ErrorKind::InvalidArgument, "observed and probabilities must align");
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  require_nonempty(total > 0.0 ? 1 : 0);
  std::vector<double> obs, expct;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += static_cast<double>(observed[i]);
    e_acc += probs[i] * total;
    if (e_acc >= min_expected) {
      obs.push_back(o_acc);
      expct.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (expct.empty()) {
      obs.push_back(o_acc);
      expct.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      expct.back() += e_acc;
    }
  }
  ChiSquare out;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double diff = obs[i] - expct[i];
    out.statistic += diff * diff / expct[i];
  }
  out.dof = static_cast<std::int64_t>(obs.size()) - 1;
  out.p_value = out.dof > 0 ? boost::math::gamma_q(0.5 * static_cast<double>(out.dof), 0.5 * out.statistic)
                            : 1.0;
  return out;
}

Moments sample_moments(std::span<const double> sample) {
  require_nonempty(sample.size());
  Moments out;
  out.count = static_cast<std::int64_t>(sample.size());
  const double m = static_cast<double>(sample.size());
  KahanSum s1;
  for (double x : sample) s1.add(x);
  out.mean = s1.value() / m;
  KahanSum c2, c3, c4;
  for (double x : sample) {
    const double d = x - out.mean;
    c2.add(d * d);
    c3.add(d * d * d);
    c4.add(d * d * d * d);
  }
  const double m2 = c2.value() / m;
  const double m3 = c3.value() / m;
  const double m4 = c4.value() / m;
  out.variance = sample.size() > 1 ? c2.value() / (m - 1.0) : 0.0;
  out.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  out.mean_stderr = std::sqrt(out.variance / m);
  out.variance_stderr = std::sqrt(std::max(0.0, m4 - m2 * m2) / m);
  return out;
}

}  // namespace permspec
