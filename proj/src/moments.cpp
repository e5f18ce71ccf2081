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

#include "permspec/moments.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "fftw_support.hpp"

#include "permspec/error.hpp"
#include "permspec/numeric.hpp"

namespace permspec {
namespace {

constexpr std::int64_t kDirectVarianceMax = 4096;

void require_series(const ErrorSeries& series, std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (series.jmax < n)
    throw Error(ErrorKind::SeriesTooShort, "series has jmax = " + std::to_string(series.jmax) +
                                               " but n = " + std::to_string(n));
}

// out[s] = sum_{j + j' = s} R_j R_j' for s = 0..2n, with R indexed from 1.
std::vector<double> self_convolution(const std::vector<double>& r, std::int64_t n) {
  std::size_t size = 1;
  while (size < static_cast<std::size_t>(2 * n + 2)) size <<= 1;
  const std::size_t half = size / 2 + 1;
  double* in = fftw_alloc_real(size);
  fftw_complex* spec = fftw_alloc_complex(half);
  fftw_plan fwd, inv;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(size), in, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(size), spec, in, FFTW_ESTIMATE);
  }
  std::fill(in, in + size, 0.0);
  for (std::int64_t j = 1; j <= n; ++j) in[j] = r[static_cast<std::size_t>(j - 1)];
  fftw_execute(fwd);
  for (std::size_t k = 0; k < half; ++k) {
    const std::complex<double> z(spec[k][0], spec[k][1]);
    const auto sq = z * z;
    spec[k][0] = sq.real();
    spec[k][1] = sq.imag();
  }
  fftw_execute(inv);
  std::vector<double> out(static_cast<std::size_t>(2 * n + 1));
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = in[s] / static_cast<double>(size);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(in);
  fftw_free(spec);
  return out;
}

}  // namespace

PsiTable::PsiTable(std::int64_t n, EwensParam theta) : n_(n), theta_(theta.value()) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  values_.resize(static_cast<std::size_t>(n));
  double acc = 1.0;
  const double dn = static_cast<double>(n);
  for (std::int64_t k = 0; k < n; ++k) {
    const double dk = static_cast<double>(k);
    acc *= (dn - dk) / (theta_ + dn - dk - 1.0);
    values_[static_cast<std::size_t>(k)] = acc;
  }
}

double PsiTable::operator()(std::int64_t j) const {
  if (j < 1 || j > n_)
    throw Error(ErrorKind::OutOfRange, "Psi_N(j) needs 1 <= j <= N; got j = " + std::to_string(j));
  return values_[static_cast<std::size_t>(j - 1)];
}

double psi(std::int64_t n, EwensParam theta, std::int64_t j) {
  if (n < 1 || j < 1 || j > n)
    throw Error(ErrorKind::OutOfRange, "Psi_N(j) needs 1 <= j <= N");
  const double th = theta.value();
  const double dn = static_cast<double>(n);
  double acc = 1.0;
  for (std::int64_t k = 0; k < j; ++k) {
    const double dk = static_cast<double>(k);
    acc *= (dn - dk) / (th + dn - dk - 1.0);
  }
  return acc;
}

double falling_factorial_moment(std::int64_t n, EwensParam theta,
                                std::span<const std::pair<std::int64_t, std::int64_t>> r) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  std::int64_t m = 0;
  double product = 1.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto [j, rj] = r[i];
    if (j < 1 || rj < 0) throw Error(ErrorKind::InvalidArgument, "need j >= 1 and r_j >= 0");
    for (std::size_t k = 0; k < i; ++k)
      if (r[k].first == j) throw Error(ErrorKind::InvalidArgument, "cycle lengths must be distinct");
    m += j * rj;
    product *= std::pow(theta.value() / static_cast<double>(j), static_cast<double>(rj));
  }
  if (m > n) return 0.0;
  if (m == 0) return 1.0;
  return psi(n, theta, m) * product;
}

double exact_mean(std::int64_t n, EwensParam theta, const ErrorSeries& series,
                  const FunctionSpec& f) {
  require_series(series, n);
  const PsiTable table(n, theta);
  KahanSum acc;
  for (std::int64_t j = 1; j <= n; ++j) acc.add(table.or_zero(j) * series.rj(j));
  return static_cast<double>(n) * integral(f) + theta.value() * acc.value();
}

double exact_variance(std::int64_t n, EwensParam theta, const ErrorSeries& series,
                      const FunctionSpec& /*f*/, VarianceMethod method) {
  require_series(series, n);
  const double th = theta.value();
  const PsiTable table(n, theta);
  const auto& r = series.r;

  KahanSum diag;      // sum_j j R_j^2 Psi(j)
  KahanSum first;     // sum_j R_j Psi(j)
  for (std::int64_t j = 1; j <= n; ++j) {
    const double rj = r[static_cast<std::size_t>(j - 1)];
    diag.add(static_cast<double>(j) * rj * rj * table.or_zero(j));
    first.add(rj * table.or_zero(j));
  }

  if (method == VarianceMethod::Auto) {
    if (th == 1.0) {
      // Psi == 1: the pair sum is sum_j R_j * (R_1 + ... + R_{N-j}).
      std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
      KahanSum run;
      for (std::int64_t j = 1; j <= n; ++j) {
        run.add(r[static_cast<std::size_t>(j - 1)]);
        prefix[static_cast<std::size_t>(j)] = run.value();
      }
      KahanSum pair;
      for (std::int64_t j = 1; j < n; ++j)
        pair.add(r[static_cast<std::size_t>(j - 1)] * prefix[static_cast<std::size_t>(n - j)]);
      const double s = first.value();
      return diag.value() + pair.value() - s * s;
    }
    method = n <= kDirectVarianceMax ? VarianceMethod::Direct : VarianceMethod::Convolution;
  }

  KahanSum pair;  // sum_{j + j' <= N} R_j R_j' Psi(j + j')
  if (method == VarianceMethod::Direct) {
    for (std::int64_t j = 1; j < n; ++j) {
      const double rj = r[static_cast<std::size_t>(j - 1)];
      if (rj == 0.0) continue;
      for (std::int64_t k = 1; j + k <= n; ++k)
        pair.add(rj * r[static_cast<std::size_t>(k - 1)] * table.or_zero(j + k));
    }
  } else {
    const auto conv = self_convolution(r, n);
    for (std::int64_t s = 2; s <= n; ++s) pair.add(conv[static_cast<std::size_t>(s)] * table.or_zero(s));
  }
  const double s = first.value();
  return th * diag.value() + th * th * (pair.value() - s * s);
}

double cesaro_number(double alpha, std::int64_t n) {
  if (!(alpha > -1.0)) throw Error(ErrorKind::InvalidArgument, "Cesaro numbers need alpha > -1");
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "n must be >= 0");
  double a = 1.0;
  for (std::int64_t k = 1; k <= n; ++k) a *= (static_cast<double>(k) + alpha) / static_cast<double>(k);
  return a;
}

double cesaro_mean(std::span<const double> s, double order, std::int64_t n) {
  if (!(order > 0.0)) throw Error(ErrorKind::InvalidArgument, "Cesaro order must be positive");
  if (n < 0 || s.size() < static_cast<std::size_t>(n) + 1)
    throw Error(ErrorKind::InvalidArgument, "sequence needs at least n+1 terms");
  // A_k^{order-1} for k = 0..n by the multiplicative recurrence.
  std::vector<double> lower(static_cast<std::size_t>(n) + 1);
  lower[0] = 1.0;
  for (std::int64_t k = 1; k <= n; ++k)
    lower[static_cast<std::size_t>(k)] =
        lower[static_cast<std::size_t>(k - 1)] * (static_cast<double>(k) + order - 1.0) / static_cast<double>(k);
  const double top = cesaro_number(order, n);
  KahanSum acc;
  for (std::int64_t j = 0; j <= n; ++j)
    acc.add(lower[static_cast<std::size_t>(n - j)] / top * s[static_cast<std::size_t>(j)]);
  return acc.value();
}

std::vector<double> coupling_bound_rhs(std::int64_t n, EwensParam theta, std::span<const double> u,
                                       BoundNorm which) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (u.size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::InvalidArgument, "u must have exactly n entries");
  const double th = theta.value();
  const double dn = static_cast<double>(n);
  if (which == BoundNorm::L1) {
    const PsiTable table(n, theta);
    KahanSum plain, weighted;
    for (std::int64_t j = 1; j <= n; ++j) {
      const double a = std::abs(u[static_cast<std::size_t>(j - 1)]);
      plain.add(a);
      weighted.add(a * table.or_zero(j));
    }
    return {plain.value() / dn, th / dn * weighted.value()};
  }
  std::vector<double> abs_u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> sq_u(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t j = 1; j <= n; ++j) {
    const double v = u[static_cast<std::size_t>(j - 1)];
    abs_u[static_cast<std::size_t>(j)] = std::abs(v);
    sq_u[static_cast<std::size_t>(j)] = v * v;
  }
  const double c1_abs = cesaro_mean(abs_u, 1.0, n);
  const double c1_sq = cesaro_mean(sq_u, 1.0, n);
  const double ct_abs = cesaro_mean(abs_u, th, n);
  const double ct_sq = cesaro_mean(sq_u, th, n);
  return {c1_abs * c1_abs, c1_sq, c1_abs * ct_abs, ct_sq};
}

}  // namespace permspec
