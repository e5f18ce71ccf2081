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

#include "permspec/funcs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>


#include "fftw_support.hpp"
#include "permspec/error.hpp"
#include "permspec/numeric.hpp"

namespace permspec {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kParamSlack = 1e-15;

// Fractional part of x in [0,1); tiny negative inputs map to 0 rather than 1.
double reduce(double x) {
  double y = x - std::floor(x);
  return y >= 1.0 ? 0.0 : y;
}

// cos(2 pi r / j) and sin(2 pi r / j) for 0 <= r < j, folded so that r and
// j - r give identical (cos) or exactly negated (sin) values.
double cos_fraction(std::int64_t r, std::int64_t j) {
  if (r == 0) return 1.0;
  if (2 * r == j) return -1.0;
  if (4 * r == j || 4 * r == 3 * j) return 0.0;
  const std::int64_t folded = std::min(r, j - r);
  return std::cos(kTwoPi * static_cast<double>(folded) / static_cast<double>(j));
}

double sin_fraction(std::int64_t r, std::int64_t j) {
  if (r == 0 || 2 * r == j) return 0.0;
  if (4 * r == j) return 1.0;
  if (4 * r == 3 * j) return -1.0;
  if (2 * r > j) return -std::sin(kTwoPi * static_cast<double>(j - r) / static_cast<double>(j));
  return std::sin(kTwoPi * static_cast<double>(r) / static_cast<double>(j));
}

// Same folding for a real phase z in [0,1).
double cos_phase(double z) {
  if (z > 0.5) z = 1.0 - z;
  return std::cos(kTwoPi * z);
}

double sin_phase(double z) {
  if (z > 0.5) return -std::sin(kTwoPi * (1.0 - z));
  return std::sin(kTwoPi * z);
}

bool indicator_contains(const Indicator& ind, double y) {
  // y in [0,1); the point 0 is also the point 1 on the circle.
  auto inside = [&](double x) {
    if (ind.ends == Endpoints::Open) return x > ind.a && x < ind.b;
    return x > ind.a && x <= ind.b;
  };
  return inside(y) || (y == 0.0 && inside(1.0));
}

double trig_eval(const TrigPoly& p, double y) {
  double acc = p.a0;
  const auto deg = std::max(p.cos_coeffs.size(), p.sin_coeffs.size());
  for (std::size_t i = 0; i < deg; ++i) {
    const double z = reduce(static_cast<double>(i + 1) * y);
    if (i < p.cos_coeffs.size() && p.cos_coeffs[i] != 0.0) acc += p.cos_coeffs[i] * cos_phase(z);
    if (i < p.sin_coeffs.size() && p.sin_coeffs[i] != 0.0) acc += p.sin_coeffs[i] * sin_phase(z);
  }
  return acc;
}

double plateau_eval(const SmoothPlateau& p, double y) {
  const double lo = p.a - p.eps;
  const double hi = p.b + p.eps;
  if (y <= lo || y >= hi) return 0.0;
  if (y >= p.a && y <= p.b) return 1.0;
  if (y < p.a) return smooth_step((y - lo) / p.eps);
  return smooth_step((hi - y) / p.eps);
}

// s'(t) = s (1 - s) g(t), g(t) = 1/t^2 + 1/(1-t)^2.
double smooth_step_d1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double s = smooth_step(t);
  const double g = 1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t));
  return s * (1.0 - s) * g;
}

double smooth_step_d2(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double s = smooth_step(t);
  const double u = 1.0 - t;
  const double g = 1.0 / (t * t) + 1.0 / (u * u);
  const double dg = -2.0 / (t * t * t) + 2.0 / (u * u * u);
  const double d1 = s * (1.0 - s) * g;
  return d1 * (1.0 - 2.0 * s) * g + s * (1.0 - s) * dg;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, msg);
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // rho(t) / (rho(t) + rho(1-t)) with rho(t) = exp(-1/t), rewritten to avoid 0/0.
  const double z = 1.0 / t - 1.0 / (1.0 - t);
  return 1.0 / (1.0 + std::exp(z));
}

FunctionSpec FunctionSpec::indicator(double a, double b, Endpoints ends) {
  require(std::isfinite(a) && std::isfinite(b), "indicator endpoints must be finite");
  require(a >= 0.0 && a < 1.0, "indicator needs 0 <= a < 1");
  require(b > 0.0 && b <= 1.0, "indicator needs 0 < b <= 1");
  require(a < b, "indicator needs a < b");
  return FunctionSpec(Indicator{a, b, ends});
}

FunctionSpec FunctionSpec::trig(double a0, std::vector<double> cos_coeffs,
                                std::vector<double> sin_coeffs) {
  require(std::isfinite(a0), "trig constant term must be finite");
  for (double c : cos_coeffs) require(std::isfinite(c), "trig coefficients must be finite");
  for (double c : sin_coeffs) require(std::isfinite(c), "trig coefficients must be finite");
  return FunctionSpec(TrigPoly{a0, std::move(cos_coeffs), std::move(sin_coeffs)});
}

FunctionSpec FunctionSpec::plateau(double a, double b, double eps) {
  require(std::isfinite(a) && std::isfinite(b) && std::isfinite(eps),
          "plateau parameters must be finite");
  require(eps > 0.0, "plateau needs eps > 0");
  require(a < b, "plateau needs a < b");
  require(a - eps >= -kParamSlack, "plateau needs a - eps >= 0");
  require(b + eps <= 1.0 + kParamSlack, "plateau needs b + eps <= 1");
  return FunctionSpec(SmoothPlateau{a, b, eps});
}

std::int64_t FunctionSpec::degree() const noexcept {
  const auto* p = as<TrigPoly>();
  if (p == nullptr) return 0;
  std::int64_t deg = 0;
  for (std::size_t i = 0; i < p->cos_coeffs.size(); ++i)
    if (p->cos_coeffs[i] != 0.0) deg = std::max<std::int64_t>(deg, static_cast<std::int64_t>(i) + 1);
  for (std::size_t i = 0; i < p->sin_coeffs.size(); ++i)
    if (p->sin_coeffs[i] != 0.0) deg = std::max<std::int64_t>(deg, static_cast<std::int64_t>(i) + 1);
  return deg;
}

std::string FunctionSpec::family() const {
  if (is_indicator()) return "indicator";
  if (is_trig()) return "trig";
  return "plateau";
}

double evaluate(const FunctionSpec& f, double x) {
  const double y = reduce(x);
  if (const auto* ind = f.as<Indicator>()) return indicator_contains(*ind, y) ? 1.0 : 0.0;
  if (const auto* p = f.as<TrigPoly>()) return trig_eval(*p, y);
  return plateau_eval(*f.as<SmoothPlateau>(), y);
}

double evaluate_rational(const FunctionSpec& f, std::int64_t k, std::int64_t j) {
  if (j <= 0) throw Error(ErrorKind::InvalidArgument, "denominator must be positive");
  const std::int64_t m = ((k % j) + j) % j;
  if (const auto* ind = f.as<Indicator>()) {
    const double ja = snap_to_integer(static_cast<double>(j) * ind->a);
    const double jb = snap_to_integer(static_cast<double>(j) * ind->b);
    auto inside = [&](double num) {
      if (ind->ends == Endpoints::Open) return num > ja && num < jb;
      return num > ja && num <= jb;
    };
    const double num = static_cast<double>(m);
    return (inside(num) || (m == 0 && inside(static_cast<double>(j)))) ? 1.0 : 0.0;
  }
  if (const auto* p = f.as<TrigPoly>()) {
    double acc = p->a0;
    const auto deg = std::max(p->cos_coeffs.size(), p->sin_coeffs.size());
    for (std::size_t i = 0; i < deg; ++i) {
      const auto n = static_cast<std::int64_t>(i + 1);
      const std::int64_t r = static_cast<std::int64_t>((static_cast<__int128>(n) * m) % j);
      if (i < p->cos_coeffs.size() && p->cos_coeffs[i] != 0.0)
        acc += p->cos_coeffs[i] * cos_fraction(r, j);
      if (i < p->sin_coeffs.size() && p->sin_coeffs[i] != 0.0)
        acc += p->sin_coeffs[i] * sin_fraction(r, j);
    }
    return acc;
  }
  return plateau_eval(*f.as<SmoothPlateau>(), static_cast<double>(m) / static_cast<double>(j));
}

double integral(const FunctionSpec& f) {
  if (const auto* ind = f.as<Indicator>()) return ind->b - ind->a;
  if (const auto* p = f.as<TrigPoly>()) return p->a0;
  // s(t) + s(1-t) = 1, so each smooth step carries exactly eps/2.
  const auto& p = *f.as<SmoothPlateau>();
  return (p.b - p.a) + p.eps;
}

std::vector<double> fourier_cos_coeffs(const FunctionSpec& f, std::int64_t n_max) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n_max), 0.0);
  if (const auto* p = f.as<TrigPoly>()) {
    const auto take = std::min(out.size(), p->cos_coeffs.size());
    std::copy_n(p->cos_coeffs.begin(), take, out.begin());
    return out;
  }
  // Both remaining families contain a block that is 1 on an interval [lo, hi]:
  // 2 * int_lo^hi cos(2 pi n x) dx = (sin 2 pi n hi - sin 2 pi n lo) / (pi n).
  auto block = [](double lo, double hi, std::int64_t n) {
    const double dn = static_cast<double>(n);
    return (sin_phase(reduce(dn * hi)) - sin_phase(reduce(dn * lo))) / (std::numbers::pi * dn);
  };
  if (const auto* ind = f.as<Indicator>()) {
    for (std::int64_t n = 1; n <= n_max; ++n) out[n - 1] = block(ind->a, ind->b, n);
    return out;
  }
  // The plateau is smooth and periodic, so the trapezoid rule on M nodes gives
  // a_n up to aliasing from coefficients beyond M - n. Those decay like
  // exp(-c sqrt(k eps)), so M is scaled with both n_max and 1/eps.
  const auto& p = *f.as<SmoothPlateau>();
  const double want = std::max({65536.0, 16.0 * static_cast<double>(n_max), 400.0 / p.eps});
  const std::size_t nodes = std::bit_ceil(static_cast<std::size_t>(std::min(want, 4194304.0)));
  std::vector<double> samples(nodes);
  for (std::size_t k = 0; k < nodes; ++k)
    samples[k] = plateau_eval(p, static_cast<double>(k) / static_cast<double>(nodes));
  const auto sums = detail::dft_cosine_sums(samples, out.size() + 1);
  const double scale = 2.0 / static_cast<double>(nodes);
  for (std::size_t n = 1; n < sums.size(); ++n) out[n - 1] = scale * sums[n];
  return out;
}

double total_variation(const FunctionSpec& f) {
  if (const auto* ind = f.as<Indicator>()) {
    // (0,1] is the constant 1 on the circle; every other arc has two jumps
    // (the open arc (0,1) drops to 0 at the single point 0).
    if (ind->ends == Endpoints::RightClosed && ind->a == 0.0 && ind->b == 1.0) return 0.0;
    return 2.0;
  }
  if (f.is_plateau()) return 2.0;
  if (f.degree() == 0) return 0.0;
  // int_0^1 |f'| by the midpoint rule on a fine grid; |f'| is a trig
  // polynomial in absolute value, so 2^16 nodes resolve any sane degree.
  constexpr std::int64_t kNodes = std::int64_t{1} << 16;
  KahanSum acc;
  for (std::int64_t i = 0; i < kNodes; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(kNodes);
    acc.add(std::abs(derivative(f, x)));
  }
  return acc.value() / static_cast<double>(kNodes);
}

double derivative(const FunctionSpec& f, double x) {
  if (f.is_indicator()) throw Error(ErrorKind::UnsupportedFunction, "indicator has no derivative");
  const double y = reduce(x);
  if (const auto* p = f.as<TrigPoly>()) {
    double acc = 0.0;
    const auto deg = std::max(p->cos_coeffs.size(), p->sin_coeffs.size());
    for (std::size_t i = 0; i < deg; ++i) {
      const double w = kTwoPi * static_cast<double>(i + 1);
      const double z = reduce(static_cast<double>(i + 1) * y);
      if (i < p->cos_coeffs.size()) acc -= w * p->cos_coeffs[i] * sin_phase(z);
      if (i < p->sin_coeffs.size()) acc += w * p->sin_coeffs[i] * cos_phase(z);
    }
    return acc;
  }
  const auto& p = *f.as<SmoothPlateau>();
  const double lo = p.a - p.eps;
  const double hi = p.b + p.eps;
  if (y <= lo || y >= hi || (y >= p.a && y <= p.b)) return 0.0;
  if (y < p.a) return smooth_step_d1((y - lo) / p.eps) / p.eps;
  return -smooth_step_d1((hi - y) / p.eps) / p.eps;
}

double second_derivative(const FunctionSpec& f, double x) {
  if (f.is_indicator()) throw Error(ErrorKind::UnsupportedFunction, "indicator has no derivative");
  const double y = reduce(x);
  if (const auto* p = f.as<TrigPoly>()) {
    double acc = 0.0;
    const auto deg = std::max(p->cos_coeffs.size(), p->sin_coeffs.size());
    for (std::size_t i = 0; i < deg; ++i) {
      const double w = kTwoPi * static_cast<double>(i + 1);
      const double z = reduce(static_cast<double>(i + 1) * y);
      if (i < p->cos_coeffs.size()) acc -= w * w * p->cos_coeffs[i] * cos_phase(z);
      if (i < p->sin_coeffs.size()) acc -= w * w * p->sin_coeffs[i] * sin_phase(z);
    }
    return acc;
  }
  const auto& p = *f.as<SmoothPlateau>();
  const double lo = p.a - p.eps;
  const double hi = p.b + p.eps;
  if (y <= lo || y >= hi || (y >= p.a && y <= p.b)) return 0.0;
  const double e2 = p.eps * p.eps;
  if (y < p.a) return smooth_step_d2((y - lo) / p.eps) / e2;
  return smooth_step_d2((hi - y) / p.eps) / e2;
}

double modulus_of_smoothness(const FunctionSpec& f, Modulus order, double delta,
                             std::int64_t grid) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  if (grid < 2) throw Error(ErrorKind::InvalidArgument, "grid must have at least 2 points");
  if (order.kind != Modulus::Kind::SecondDifference && f.is_indicator())
    throw Error(ErrorKind::UnsupportedFunction, "derivative moduli need a differentiable function");
  if (order.kind == Modulus::Kind::LpDerivative && !(order.p >= 1.0))
    throw Error(ErrorKind::InvalidArgument, "Lp modulus needs p >= 1");

  // Step sizes h in (0, delta], always including delta itself. Negative h
  // gives the same set of differences after shifting x.
  constexpr int kSteps = 64;
  const double dg = static_cast<double>(grid);
  double best = 0.0;
  std::vector<double> d1;
  if (order.kind != Modulus::Kind::SecondDifference) {
    d1.resize(static_cast<std::size_t>(grid));
    for (std::int64_t i = 0; i < grid; ++i) d1[i] = derivative(f, static_cast<double>(i) / dg);
  }
  for (int s = 1; s <= kSteps; ++s) {
    const double h = delta * static_cast<double>(s) / kSteps;
    switch (order.kind) {
      case Modulus::Kind::SecondDifference:
        for (std::int64_t i = 0; i < grid; ++i) {
          const double x = static_cast<double>(i) / dg;
          const double v = evaluate(f, x + 2.0 * h) - 2.0 * evaluate(f, x + h) + evaluate(f, x);
          best = std::max(best, std::abs(v));
        }
        break;
      case Modulus::Kind::FirstDerivative:
        for (std::int64_t i = 0; i < grid; ++i) {
          const double x = static_cast<double>(i) / dg;
          best = std::max(best, std::abs(derivative(f, x + h) - d1[i]));
        }
        break;
      case Modulus::Kind::LpDerivative: {
        KahanSum acc;
        for (std::int64_t i = 0; i < grid; ++i) {
          const double x = static_cast<double>(i) / dg;
          acc.add(std::pow(std::abs(derivative(f, x + h) - d1[i]), order.p));
        }
        best = std::max(best, std::pow(acc.value() / dg, 1.0 / order.p));
        break;
      }
    }
  }
  return best;
}

}  // namespace permspec
