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

#include "permspec/trapezoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "permspec/error.hpp"
#include "permspec/numeric.hpp"

namespace permspec {
namespace {

void require_positive_j(std::int64_t j) {
  if (j < 1) throw Error(ErrorKind::InvalidArgument, "j must be >= 1");
}

double indicator_rj(const Indicator& ind, std::int64_t j) {
  double r = rj_indicator_closed_form(ind.a, ind.b, j);
  if (ind.ends == Endpoints::Open && fractional_part(static_cast<double>(j) * ind.b) == 0.0)
    r -= 1.0 / static_cast<double>(j);
  return r;
}

// Tail of sum_{n > m} sin(n phi) / n with phi = 2 pi x, by Abel summation.
double sine_tail_bound(double x, std::int64_t m) {
  const double fr = fractional_part(x);
  if (fr == 0.0) return 0.0;
  return 1.0 / (static_cast<double>(m + 1) * std::abs(std::sin(std::numbers::pi * fr)));
}

double plateau_second_derivative_l1(const FunctionSpec& f) {
  const auto& p = *f.as<SmoothPlateau>();
  // Both transitions contribute the same integral of |s''|, scaled by 1/eps.
  constexpr int kNodes = 1 << 14;
  KahanSum acc;
  for (int i = 0; i < kNodes; ++i) {
    const double x = p.a - p.eps + p.eps * (i + 0.5) / kNodes;
    acc.add(std::abs(second_derivative(f, x)));
  }
  return 2.0 * acc.value() * p.eps / kNodes;
}

}  // namespace

double rj_direct(const FunctionSpec& f, std::int64_t j) {
  require_positive_j(j);
  // Nodes k and j-k are paired so that odd functions cancel exactly.
  KahanSum acc;
  acc.add(evaluate_rational(f, 0, j));
  for (std::int64_t k = 1; 2 * k < j; ++k) {
    acc.add(evaluate_rational(f, k, j) + evaluate_rational(f, j - k, j));
  }
  if (j % 2 == 0) acc.add(evaluate_rational(f, j / 2, j));
  return acc.value() / static_cast<double>(j) - integral(f);
}

double rj_indicator_closed_form(double a, double b, std::int64_t j) {
  require_positive_j(j);
  if (!(a >= 0.0 && a < b && b <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "closed form needs 0 <= a < b <= 1");
  const double dj = static_cast<double>(j);
  return (fractional_part(dj * a) - fractional_part(dj * b)) / dj;
}

PoissonSum rj_poisson(const FunctionSpec& f, std::int64_t j, std::int64_t n_terms,
                      double tolerance) {
  require_positive_j(j);
  if (n_terms < 1) throw Error(ErrorKind::InvalidArgument, "n_terms must be >= 1");
  PoissonSum out;
  KahanSum acc;
  if (const auto* p = f.as<TrigPoly>()) {
    const std::int64_t deg = f.degree();
    for (std::int64_t n = 1; j * n <= deg; ++n) {
      const auto idx = static_cast<std::size_t>(j * n - 1);
      const double a = idx < p->cos_coeffs.size() ? p->cos_coeffs[idx] : 0.0;
      if (n <= n_terms) acc.add(a);
      else out.tail_bound += std::abs(a);
    }
  } else if (const auto* ind = f.as<Indicator>()) {
    const double dj = static_cast<double>(j);
    for (std::int64_t n = 1; n <= n_terms; ++n) {
      // a_m with m = jn, written with reduced phases.
      const double m = dj * static_cast<double>(n);
      const double sb = std::sin(2.0 * std::numbers::pi * fractional_part(m * ind->b));
      const double sa = std::sin(2.0 * std::numbers::pi * fractional_part(m * ind->a));
      acc.add((sb - sa) / (std::numbers::pi * m));
    }
    out.tail_bound = (sine_tail_bound(dj * ind->b, n_terms) + sine_tail_bound(dj * ind->a, n_terms)) /
                     (std::numbers::pi * dj);
  } else {
    // Cosine coefficients are needed at j, 2j, ..., n_terms*j only.
    const auto coeffs = fourier_cos_coeffs(f, j * n_terms);
    for (std::int64_t n = 1; n <= n_terms; ++n) acc.add(coeffs[static_cast<std::size_t>(j * n - 1)]);
    // |a_m| <= 2 ||f''||_1 / (2 pi m)^2, summed over m = jn, n > n_terms.
    const double two_pi_j = 2.0 * std::numbers::pi * static_cast<double>(j);
    out.tail_bound =
        2.0 * plateau_second_derivative_l1(f) / (two_pi_j * two_pi_j * static_cast<double>(n_terms));
  }
  out.value = acc.value();
  out.truncation_warning = out.tail_bound > tolerance;
  return out;
}

std::string to_string(SeriesMethod m) {
  switch (m) {
    case SeriesMethod::Direct: return "direct";
    case SeriesMethod::ClosedForm: return "closed_form";
    case SeriesMethod::PoissonSummation: return "poisson_summation";
  }
  return "direct";
}

SeriesMethod preferred_method(const FunctionSpec& f) {
  return f.is_indicator() ? SeriesMethod::ClosedForm : SeriesMethod::Direct;
}

ErrorSeries build_series(const FunctionSpec& f, std::int64_t jmax, SeriesMethod method,
                         std::int64_t poisson_terms) {
  if (jmax < 1) throw Error(ErrorKind::InvalidArgument, "jmax must be >= 1");
  if (method == SeriesMethod::ClosedForm && !f.is_indicator())
    throw Error(ErrorKind::UnsupportedFunction, "closed form exists for indicators only");

  ErrorSeries s;
  s.jmax = jmax;
  s.method = method;
  s.r.assign(static_cast<std::size_t>(jmax), 0.0);
  const std::int64_t deg = f.degree();
  for (std::int64_t j = 1; j <= jmax; ++j) {
    if (f.is_trig() && j > deg) break;  // roots-of-unity sums vanish beyond the degree
    double rj = 0.0;
    switch (method) {
      case SeriesMethod::Direct: rj = rj_direct(f, j); break;
      case SeriesMethod::ClosedForm: rj = indicator_rj(*f.as<Indicator>(), j); break;
      case SeriesMethod::PoissonSummation: {
        const auto ps = rj_poisson(f, j, poisson_terms);
        rj = ps.value;
        s.max_tail_bound = std::max(s.max_tail_bound, ps.tail_bound);
        break;
      }
    }
    s.r[static_cast<std::size_t>(j - 1)] = rj;
  }
  s.u.resize(s.r.size());
  s.partial_sum_jRj2.resize(s.r.size());
  double running = 0.0;  // plain sum keeps the sequence monotone
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    const double j = static_cast<double>(i + 1);
    s.u[i] = j * s.r[i];
    running += s.u[i] * s.r[i];
    s.partial_sum_jRj2[i] = running;
  }
  return s;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Bounded: return "Bounded";
    case Regime::Divergent: return "Divergent";
    case Regime::Degenerate: return "Degenerate";
    case Regime::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

RegimeReport classify_regime(const ErrorSeries& series, const FunctionSpec& f) {
  RegimeReport rep;
  if (const auto* ind = f.as<Indicator>()) {
    const bool whole_circle = ind->ends == Endpoints::RightClosed && ind->a == 0.0 && ind->b == 1.0;
    rep.family_verdict = whole_circle ? Regime::Degenerate : Regime::Divergent;
  } else if (const auto* p = f.as<TrigPoly>()) {
    // The highest nonzero cosine frequency n has R_n = a_n, so the law is
    // degenerate exactly when the even part is constant.
    const bool any_cos = std::any_of(p->cos_coeffs.begin(), p->cos_coeffs.end(),
                                     [](double c) { return c != 0.0; });
    rep.family_verdict = any_cos ? Regime::Bounded : Regime::Degenerate;
  } else {
    rep.family_verdict = Regime::Bounded;
  }

  const auto n = series.jmax;
  rep.partial_sum = series.partial_sum_jRj2.empty() ? 0.0 : series.partial_sum_jRj2.back();
  const bool all_zero =
      std::all_of(series.r.begin(), series.r.end(), [](double r) { return r == 0.0; });
  if (all_zero) {
    rep.numeric_verdict = Regime::Degenerate;
    rep.evidence = "all R_j vanish up to jmax";
  } else if (n >= 16) {
    const double half = series.partial_sum_jRj2[static_cast<std::size_t>(n / 2 - 1)];
    rep.log_slope = (rep.partial_sum - half) / std::log(static_cast<double>(n) / (n / 2));
    rep.tail_fraction = rep.partial_sum > 0.0 ? (rep.partial_sum - half) / rep.partial_sum : 0.0;
    rep.numeric_verdict = rep.log_slope > 1e-3 ? Regime::Divergent : Regime::Bounded;
    rep.evidence = "partial sum " + std::to_string(rep.partial_sum) + ", growth per e-fold " +
                   std::to_string(rep.log_slope) + " over (jmax/2, jmax]";
  } else {
    rep.numeric_verdict = Regime::Undetermined;
    rep.evidence = "jmax too small for a growth fit";
  }

  if (rep.numeric_verdict == Regime::Undetermined || rep.numeric_verdict == rep.family_verdict) {
    rep.regime = rep.family_verdict;
  } else {
    rep.regime = Regime::Undetermined;
  }
  return rep;
}

JacksonReport jackson_bound_check(const FunctionSpec& f, const ErrorSeries& series,
                                  std::int64_t grid) {
  JacksonReport rep;
  std::vector<std::int64_t> js;
  for (std::int64_t j = 1; j <= series.jmax; j *= 2) js.push_back(j);
  if (js.back() != series.jmax) js.push_back(series.jmax);
  for (const auto j : js) {
    JacksonRow row;
    row.j = j;
    row.abs_rj = std::abs(series.rj(j));
    row.omega2 = modulus_of_smoothness(f, Modulus::second_difference(),
                                       1.0 / (2.0 * static_cast<double>(j)), grid);
    row.bound = kJacksonConstant * row.omega2;
    row.margin = row.abs_rj == 0.0 ? std::numeric_limits<double>::infinity() : row.bound / row.abs_rj;
    row.holds = row.abs_rj <= row.bound + 1e-14;
    rep.all_hold = rep.all_hold && row.holds;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace permspec
