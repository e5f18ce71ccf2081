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

#include "permspec/ewens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "permspec/error.hpp"
#include "permspec/numeric.hpp"
#include "permspec/trapezoid.hpp"

namespace permspec {
namespace {

constexpr std::int64_t kNoLimit = std::numeric_limits<std::int64_t>::max() / 4;
constexpr std::int64_t kDirectSpan = 32;

// log P[xi_{s+1} = ... = xi_t = 0] = sum_{i=s+1}^t log((i-1)/(theta+i-1)).
double log_survival(std::int64_t s, std::int64_t t, double theta) {
  if (t - s <= kDirectSpan) {
    double acc = 0.0;
    for (std::int64_t i = s + 1; i <= t; ++i) {
      const double im1 = static_cast<double>(i - 1);
      acc += std::log(im1 / (theta + im1));
    }
    return acc;
  }
  const double ds = static_cast<double>(s);
  const double dt = static_cast<double>(t);
  return (std::lgamma(dt) - std::lgamma(ds)) - (std::lgamma(theta + dt) - std::lgamma(theta + ds));
}

void require_n(std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
}

std::vector<CycleCounts::Entry> spacings_to_entries(const std::vector<std::int64_t>& lengths) {
  std::map<std::int64_t, std::int64_t> counts;
  for (auto len : lengths) ++counts[len];
  return {counts.begin(), counts.end()};
}

}  // namespace

EwensParam::EwensParam(double theta) : theta_(theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw Error(ErrorKind::InvalidArgument, "theta must be a positive finite number");
}

CycleCounts::CycleCounts(std::int64_t n, std::vector<Entry> entries)
    : n_(n), entries_(std::move(entries)) {
  std::erase_if(entries_, [](const Entry& e) { return e.second == 0; });
  std::sort(entries_.begin(), entries_.end());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto [j, a] = entries_[i];
    if (j < 1 || a < 0 || (i > 0 && entries_[i - 1].first == j))
      throw Error(ErrorKind::InvalidCycleType, "cycle lengths must be distinct and positive");
    total += j * a;
  }
  if (n < 1 || total != n)
    throw Error(ErrorKind::InvalidCycleType,
                "sum j*alpha_j = " + std::to_string(total) + " but n = " + std::to_string(n));
}

CycleCounts CycleCounts::from_dense(std::int64_t n, const std::vector<std::int64_t>& alpha) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] != 0) entries.emplace_back(static_cast<std::int64_t>(i + 1), alpha[i]);
  return CycleCounts(n, std::move(entries));
}

std::int64_t CycleCounts::count(std::int64_t j) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{j, 0});
  return (it != entries_.end() && it->first == j) ? it->second : 0;
}

std::int64_t CycleCounts::total_cycles() const noexcept {
  std::int64_t k = 0;
  for (const auto& e : entries_) k += e.second;
  return k;
}

std::vector<std::int64_t> CycleCounts::dense() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(n_), 0);
  for (const auto& [j, a] : entries_) out[static_cast<std::size_t>(j - 1)] = a;
  return out;
}

std::int64_t next_one(std::int64_t after, double theta, Stream& rng, std::int64_t limit) {
  const double v = rng.uniform();
  if (after >= limit) return limit + 1;
  // First t with P[no one in (after, t]] < v.
  if (theta == 1.0) {
    // Survival is after/t exactly.
    const double t = std::floor(static_cast<double>(after) / v) + 1.0;
    if (t > static_cast<double>(limit)) return limit + 1;
    return std::max(after + 1, static_cast<std::int64_t>(t));
  }
  const double log_v = std::log(v);
  if (log_survival(after, limit, theta) >= log_v) return limit + 1;
  std::int64_t lo = after;  // survival(lo) >= v
  std::int64_t hi = after + 1;
  while (log_survival(after, hi, theta) >= log_v) {
    lo = hi;
    const std::int64_t step = std::max<std::int64_t>(1, hi - after);
    hi = std::min(limit, hi + step);
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (log_survival(after, mid, theta) >= log_v) lo = mid;
    else hi = mid;
  }
  return hi;
}

CycleCounts sample_cycle_counts(std::int64_t n, EwensParam theta, Stream& rng) {
  require_n(n);
  std::vector<std::int64_t> lengths;
  std::int64_t last = 1;
  while (true) {
    const std::int64_t t = next_one(last, theta.value(), rng, n);
    if (t > n) break;
    lengths.push_back(t - last);
    last = t;
  }
  lengths.push_back(n + 1 - last);
  return CycleCounts(n, spacings_to_entries(lengths));
}

CycleCounts sample_cycle_counts_bernoulli(std::int64_t n, EwensParam theta, Stream& rng) {
  require_n(n);
  const double th = theta.value();
  std::vector<std::int64_t> lengths;
  std::int64_t last = 1;
  for (std::int64_t i = 2; i <= n; ++i) {
    if (rng.uniform() < th / (th + static_cast<double>(i - 1))) {
      lengths.push_back(i - last);
      last = i;
    }
  }
  lengths.push_back(n + 1 - last);
  return CycleCounts(n, spacings_to_entries(lengths));
}

bool CouplingRealization::inequality_holds(std::int64_t j) const {
  const auto i = static_cast<std::size_t>(j - 1);
  const std::int64_t lhs = std::abs(c[i] - w[i]);
  const std::int64_t rhs = w_beyond[i] + (j_n + k_n == j + 1 ? 1 : 0) + (j_n == j ? 1 : 0);
  return lhs <= rhs;
}

bool CouplingRealization::inequality_holds() const {
  for (std::int64_t j = 1; j <= n; ++j)
    if (!inequality_holds(j)) return false;
  return true;
}

CouplingRealization sample_coupling(std::int64_t n, EwensParam theta, std::int64_t horizon,
                                    Stream& rng) {
  require_n(n);
  if (horizon < 2 * n)
    throw Error(ErrorKind::HorizonTooSmall, "horizon " + std::to_string(horizon) +
                                                " is below 2n = " + std::to_string(2 * n));
  const double th = theta.value();
  CouplingRealization out;
  out.n = n;
  out.horizon = horizon;
  out.w_tail_bound = th * th / static_cast<double>(horizon - n);
  out.ones.push_back(1);
  while (true) {
    const std::int64_t t = next_one(out.ones.back(), th, rng, horizon);
    if (t > horizon) break;
    out.ones.push_back(t);
  }

  const auto sz = static_cast<std::size_t>(n);
  out.c.assign(sz, 0);
  out.w.assign(sz, 0);
  out.w_beyond.assign(sz, 0);

  // Spacings between consecutive ones inside the horizon feed W.
  for (std::size_t k = 0; k + 1 < out.ones.size(); ++k) {
    const std::int64_t start = out.ones[k];
    const std::int64_t len = out.ones[k + 1] - start;
    if (len > n) continue;
    ++out.w[static_cast<std::size_t>(len - 1)];
    if (start > n) ++out.w_beyond[static_cast<std::size_t>(len - 1)];
  }

  // C_j(N): spacings of 1 xi_2 ... xi_N 1.
  auto last_le_n = std::upper_bound(out.ones.begin(), out.ones.end(), n);
  const std::int64_t last_one = *(last_le_n - 1);
  for (auto it = out.ones.begin(); it + 1 != last_le_n; ++it)
    ++out.c[static_cast<std::size_t>(*(it + 1) - *it - 1)];
  ++out.c[static_cast<std::size_t>(n + 1 - last_one - 1)];

  out.j_n = n - last_one + 1;
  const std::int64_t first_after =
      last_le_n != out.ones.end() ? *last_le_n : next_one(horizon, th, rng, kNoLimit);
  out.k_n = first_after - n;
  return out;
}

double log_cycle_type_pmf(std::int64_t n, EwensParam theta, const CycleCounts& alpha) {
  if (alpha.n() != n)
    throw Error(ErrorKind::InvalidCycleType, "cycle type is for a different n");
  const double th = theta.value();
  const double dn = static_cast<double>(n);
  // log N! - log theta_(N), theta_(N) = Gamma(theta+N)/Gamma(theta).
  double acc = std::lgamma(dn + 1.0) - (std::lgamma(th + dn) - std::lgamma(th));
  for (const auto& [j, a] : alpha.entries()) {
    const double da = static_cast<double>(a);
    acc += da * (std::log(th) - std::log(static_cast<double>(j))) - std::lgamma(da + 1.0);
  }
  return acc;
}

double exact_cycle_type_pmf(std::int64_t n, EwensParam theta, const CycleCounts& alpha) {
  return std::exp(log_cycle_type_pmf(n, theta, alpha));
}

std::vector<CycleCounts> enumerate_cycle_types(std::int64_t n) {
  require_n(n);
  if (n > 60) throw Error(ErrorKind::TooLarge, "partition enumeration is limited to n <= 60");
  std::vector<CycleCounts> out;
  // Partitions in reverse lexicographic order, parts stored descending.
  std::vector<std::int64_t> parts{n};
  while (true) {
    std::map<std::int64_t, std::int64_t> counts;
    for (auto p : parts) ++counts[p];
    out.emplace_back(n, std::vector<CycleCounts::Entry>(counts.begin(), counts.end()));
    // Find the rightmost part > 1.
    std::int64_t ones = 0;
    while (!parts.empty() && parts.back() == 1) {
      parts.pop_back();
      ++ones;
    }
    if (parts.empty()) break;
    const std::int64_t k = parts.back() - 1;
    parts.back() = k;
    std::int64_t rest = ones + 1;
    while (rest > k) {
      parts.push_back(k);
      rest -= k;
    }
    if (rest > 0) parts.push_back(rest);
  }
  return out;
}

double linear_statistic(const CycleCounts& alpha, double n_integral, const std::vector<double>& u) {
  KahanSum acc;
  acc.add(n_integral);
  for (const auto& [j, a] : alpha.entries())
    acc.add(static_cast<double>(a) * u.at(static_cast<std::size_t>(j - 1)));
  return acc.value();
}

std::vector<LawPoint> enumerate_exact_distribution(std::int64_t n, EwensParam theta,
                                                   const FunctionSpec& f) {
  require_n(n);
  if (n > kMaxEnumerationN)
    throw Error(ErrorKind::TooLarge, "exact enumeration is limited to n <= 8");
  const auto series = build_series(f, n);
  const double n_integral = static_cast<double>(n) * integral(f);
  std::vector<LawPoint> points;
  for (const auto& alpha : enumerate_cycle_types(n))
    points.push_back({linear_statistic(alpha, n_integral, series.u),
                      exact_cycle_type_pmf(n, theta, alpha)});
  std::sort(points.begin(), points.end(),
            [](const LawPoint& x, const LawPoint& y) { return x.value < y.value; });
  std::vector<LawPoint> merged;
  for (const auto& p : points) {
    if (!merged.empty() &&
        std::abs(p.value - merged.back().value) <= 1e-12 * std::max(1.0, std::abs(p.value))) {
      merged.back().probability += p.probability;
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

}  // namespace permspec
