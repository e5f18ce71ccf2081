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
#include <string_view>
#include <variant>
#include <vector>

namespace permspec {

/// How an Indicator treats its two endpoints.
enum class Endpoints {
  Open,        ///< 1 on (a,b); f(a) = f(b) = 0. Default.
  RightClosed, ///< 1 on (a,b]; matches the closed form ({ja}-{jb})/j.
};

struct Indicator {
  double a = 0.0;
  double b = 1.0;
  Endpoints ends = Endpoints::Open;

  bool operator==(const Indicator&) const = default;
};

/// f(x) = a0 + sum_n cos_coeffs[n-1] cos(2 pi n x) + sin_coeffs[n-1] sin(2 pi n x).
struct TrigPoly {
  double a0 = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  bool operator==(const TrigPoly&) const = default;
};

/// C-infinity plateau: 1 on [a,b], 0 outside (a-eps, b+eps), smooth steps between.
struct SmoothPlateau {
  double a = 0.0;
  double b = 0.0;
  double eps = 0.0;

  bool operator==(const SmoothPlateau&) const = default;
};

/// A closed-form 1-periodic test function. Construction validates parameters,
/// so every FunctionSpec in circulation is well formed.
class FunctionSpec {
 public:
  using Variant = std::variant<Indicator, TrigPoly, SmoothPlateau>;

  static FunctionSpec indicator(double a, double b, Endpoints ends = Endpoints::Open);
  static FunctionSpec trig(double a0, std::vector<double> cos_coeffs,
                           std::vector<double> sin_coeffs = {});
  static FunctionSpec plateau(double a, double b, double eps);

  const Variant& get() const noexcept { return spec_; }
  template <class T>
  const T* as() const noexcept { return std::get_if<T>(&spec_); }

  bool is_indicator() const noexcept { return as<Indicator>() != nullptr; }
  bool is_trig() const noexcept { return as<TrigPoly>() != nullptr; }
  bool is_plateau() const noexcept { return as<SmoothPlateau>() != nullptr; }

  /// Highest frequency with a nonzero coefficient (TrigPoly only, else 0).
  std::int64_t degree() const noexcept;

  std::string family() const;

  friend bool operator==(const FunctionSpec&, const FunctionSpec&) = default;

 private:
  explicit FunctionSpec(Variant v) : spec_(std::move(v)) {}
  Variant spec_;
};

/// Value of the periodic extension at x.
double evaluate(const FunctionSpec& f, double x);

/// Value at the rational point k/j, computed without forming k/j where the
/// family allows it (integer angle reduction for TrigPoly, integer endpoint
/// comparison for Indicator).
double evaluate_rational(const FunctionSpec& f, std::int64_t k, std::int64_t j);

/// Exact integral over one period.
double integral(const FunctionSpec& f);

/// Cosine coefficients a_1..a_{n_max} of f = a0 + sum a_n cos(2 pi n x) + ...
std::vector<double> fourier_cos_coeffs(const FunctionSpec& f, std::int64_t n_max);

/// Total variation over one period. Finite for every family.
double total_variation(const FunctionSpec& f);

/// First and second derivatives (TrigPoly, SmoothPlateau only).
double derivative(const FunctionSpec& f, double x);
double second_derivative(const FunctionSpec& f, double x);

struct Modulus {
  enum class Kind { FirstDerivative, SecondDifference, LpDerivative };
  Kind kind = Kind::SecondDifference;
  double p = 2.0;  // used by LpDerivative

  static Modulus first_derivative() { return {Kind::FirstDerivative, 0.0}; }
  static Modulus second_difference() { return {Kind::SecondDifference, 0.0}; }
  static Modulus lp_derivative(double p) { return {Kind::LpDerivative, p}; }
};

inline constexpr std::int64_t kDefaultModulusGrid = std::int64_t{1} << 14;

/// Grid estimate of omega(f', delta), omega_2(f, delta) or omega^(p)(f', delta).
/// This is a lower estimate of the supremum and is meant for diagnostics.
double modulus_of_smoothness(const FunctionSpec& f, Modulus order, double delta,
                             std::int64_t grid = kDefaultModulusGrid);

/// Text syntax: `indicator:a=0,b=0.5[,ends=open|right]`,
/// `trig:a0=0;cos=1,0,0.25;sin=0`, `plateau:a=0.2,b=0.4,eps=0.1`.
/// Throws Error(ParseError) naming the position and the expected token.
FunctionSpec parse_function(std::string_view text);

/// Canonical text form; parse_function(to_string(f)) == f.
std::string to_string(const FunctionSpec& f);

/// The smooth step s(t) = rho(t) / (rho(t) + rho(1-t)), rho(t) = exp(-1/t).
double smooth_step(double t);

}  // namespace permspec
