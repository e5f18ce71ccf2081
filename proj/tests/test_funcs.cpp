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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "permspec/error.hpp"
#include "permspec/funcs.hpp"

namespace permspec {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Evaluate, IndicatorInteriorAndEndpoints) {
  const auto f = FunctionSpec::indicator(0.0, 0.5);
  EXPECT_EQ(evaluate(f, 0.25), 1.0);
  EXPECT_EQ(evaluate(f, 0.5), 0.0);
  EXPECT_EQ(evaluate(f, 0.0), 0.0);
  const auto g = FunctionSpec::indicator(0.0, 0.5, Endpoints::RightClosed);
  EXPECT_EQ(evaluate(g, 0.5), 1.0);
  EXPECT_EQ(evaluate(g, 0.0), 0.0);
}

TEST(Evaluate, TrigAtZero) {
  EXPECT_EQ(evaluate(FunctionSpec::trig(0.0, {1.0}), 0.0), 1.0);
  EXPECT_NEAR(evaluate(FunctionSpec::trig(0.5, {0.0, 2.0}, {1.0}), 0.125), 0.5 + 0.0 + std::sin(kPi / 4), 1e-15);
}

TEST(Evaluate, PlateauShape) {
  const auto f = FunctionSpec::plateau(0.2, 0.4, 0.1);
  EXPECT_EQ(evaluate(f, 0.3), 1.0);
  EXPECT_EQ(evaluate(f, 0.05), 0.0);
  EXPECT_EQ(evaluate(f, 0.7), 0.0);
  EXPECT_NEAR(evaluate(f, 0.15), 0.5, 1e-15);
  EXPECT_NEAR(evaluate(f, 0.45), 0.5, 1e-15);
}

TEST(Evaluate, Periodicity) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> x_dist(-2.0, 3.0);
  const auto ind = FunctionSpec::indicator(0.1, 0.65);
  const auto trig = FunctionSpec::trig(0.3, {0.5, -0.25}, {0.125});
  const auto plat = FunctionSpec::plateau(0.3, 0.6, 0.15);
  for (int i = 0; i < 1000; ++i) {
    const double x = x_dist(gen);
    const double r = x - std::floor(x);
    EXPECT_EQ(evaluate(ind, x), evaluate(ind, r)) << x;
    EXPECT_EQ(evaluate(trig, x), evaluate(trig, r)) << x;
    EXPECT_NEAR(evaluate(plat, x), evaluate(plat, r), 1e-12) << x;
  }
}

TEST(Evaluate, OddTrigIsAntisymmetric) {
  const auto f = FunctionSpec::trig(0.0, {0.0, 0.0}, {1.0, -0.3, 0.7});
  // Dyadic points keep 1 - x and every n * x exact.
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<std::int64_t> k_dist(1, (std::int64_t{1} << 40) - 1);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::ldexp(static_cast<double>(k_dist(gen)), -40);
    EXPECT_EQ(evaluate(f, x), -evaluate(f, 1.0 - x)) << x;
  }
}

TEST(Evaluate, RationalMatchesDecimal) {
  const auto f = FunctionSpec::trig(0.1, {0.4, 0.0, -0.6}, {0.2});
  for (std::int64_t j = 1; j <= 40; ++j)
    for (std::int64_t k = 0; k < j; ++k)
      EXPECT_NEAR(evaluate_rational(f, k, j), evaluate(f, static_cast<double>(k) / j), 1e-13);
}

TEST(Integral, Examples) {
  EXPECT_EQ(integral(FunctionSpec::indicator(0.0, 0.5)), 0.5);
  EXPECT_EQ(integral(FunctionSpec::trig(0.0, {1.0})), 0.0);
  EXPECT_EQ(integral(FunctionSpec::trig(2.5, {})), 2.5);
}

TEST(Integral, PlateauMatchesQuadrature) {
  for (const auto& f : {FunctionSpec::plateau(0.2, 0.4, 0.1), FunctionSpec::plateau(0.55, 0.8, 0.1),
                        FunctionSpec::plateau(0.3, 0.35, 0.3)}) {
    const double q = oracle::simpson([&](double x) { return evaluate(f, x); }, 0.0, 1.0, 1 << 16);
    EXPECT_NEAR(integral(f), q, 1e-12) << to_string(f);
  }
}

TEST(Integral, TrapezoidalConsistency) {
  const std::int64_t j = 100000;
  for (const auto& f : {FunctionSpec::indicator(0.13, 0.71), FunctionSpec::trig(0.2, {0.3}, {0.4}),
                        FunctionSpec::plateau(0.2, 0.4, 0.1)}) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < j; ++k) acc += evaluate(f, static_cast<double>(k) / j);
    const double tol = f.is_indicator() ? 1e-4 : 1e-10;
    EXPECT_NEAR(acc / j, integral(f), tol) << to_string(f);
  }
}

TEST(FourierCos, Examples) {
  EXPECT_EQ(fourier_cos_coeffs(FunctionSpec::trig(0.0, {1.0}), 3), (std::vector<double>{1.0, 0.0, 0.0}));
  EXPECT_EQ(fourier_cos_coeffs(FunctionSpec::trig(0.0, {0.0, 0.5}), 2), (std::vector<double>{0.0, 0.5}));
  EXPECT_NEAR(fourier_cos_coeffs(FunctionSpec::indicator(0.0, 0.5), 1)[0], 0.0, 1e-15);
}

TEST(FourierCos, MatchQuadrature) {
  for (const auto& f : {FunctionSpec::indicator(0.1, 0.35), FunctionSpec::plateau(0.2, 0.4, 0.1)}) {
    const auto a = fourier_cos_coeffs(f, 8);
    for (int n = 1; n <= 8; ++n) {
      double q = 0.0;
      if (const auto* ind = f.as<Indicator>()) {
        q = oracle::simpson([n](double x) { return 2.0 * std::cos(2 * kPi * n * x); }, ind->a, ind->b, 4096);
      } else {
        q = oracle::simpson([&](double x) { return 2.0 * evaluate(f, x) * std::cos(2 * kPi * n * x); }, 0.0,
                            1.0, 1 << 16);
      }
      EXPECT_NEAR(a[static_cast<std::size_t>(n - 1)], q, 1e-10) << to_string(f) << " n=" << n;
    }
  }
}

TEST(Modulus, CosineSecondDifferenceBound) {
  const auto f = FunctionSpec::trig(0.0, {1.0});
  for (double delta : {1e-3, 1e-2, 0.05}) {
    const double bound = std::pow(2 * kPi * delta, 2);
    EXPECT_LE(modulus_of_smoothness(f, Modulus::second_difference(), delta), bound * (1 + 1e-9));
  }
}

TEST(Modulus, ConstantsVanish) {
  const auto f = FunctionSpec::trig(1.0, {});
  for (double delta : {0.01, 0.3}) {
    EXPECT_EQ(modulus_of_smoothness(f, Modulus::second_difference(), delta), 0.0);
    EXPECT_EQ(modulus_of_smoothness(f, Modulus::first_derivative(), delta), 0.0);
    EXPECT_EQ(modulus_of_smoothness(f, Modulus::lp_derivative(2.0), delta), 0.0);
  }
}

TEST(Modulus, IndicatorJump) {
  const auto f = FunctionSpec::indicator(0.0, 0.5);
  EXPECT_EQ(modulus_of_smoothness(f, Modulus::second_difference(), 0.1), 1.0);
  EXPECT_THROW(modulus_of_smoothness(f, Modulus::first_derivative(), 0.1), Error);
}

TEST(Modulus, DerivativeMatchesFiniteDifference) {
  const auto f = FunctionSpec::plateau(0.2, 0.4, 0.1);
  for (double x : {0.12, 0.15, 0.18, 0.43, 0.47}) {
    const double h = 1e-6;
    EXPECT_NEAR(derivative(f, x), (evaluate(f, x + h) - evaluate(f, x - h)) / (2 * h), 1e-4);
    EXPECT_NEAR(second_derivative(f, x), (derivative(f, x + h) - derivative(f, x - h)) / (2 * h), 1e-2);
  }
}

TEST(SmoothStep, Symmetry) {
  for (double t = 0.0; t <= 1.0; t += 1.0 / 64)
    EXPECT_NEAR(smooth_step(t) + smooth_step(1.0 - t), 1.0, 1e-15) << t;
  EXPECT_EQ(smooth_step(0.0), 0.0);
  EXPECT_EQ(smooth_step(1.0), 1.0);
}

TEST(TotalVariation, Families) {
  EXPECT_EQ(total_variation(FunctionSpec::indicator(0.1, 0.4)), 2.0);
  EXPECT_EQ(total_variation(FunctionSpec::plateau(0.2, 0.4, 0.1)), 2.0);
  EXPECT_NEAR(total_variation(FunctionSpec::trig(0.0, {1.0})), 4.0, 1e-6);
}

TEST(Construction, RejectsBadParameters) {
  EXPECT_THROW(FunctionSpec::indicator(0.5, 0.2), Error);
  EXPECT_THROW(FunctionSpec::indicator(0.0, 1.5), Error);
  EXPECT_THROW(FunctionSpec::plateau(0.2, 0.4, 0.0), Error);
  EXPECT_THROW(FunctionSpec::plateau(0.2, 0.9, 0.2), Error);
  EXPECT_THROW(FunctionSpec::trig(std::nan(""), {}), Error);
}

TEST(Text, RoundTrip) {
  const std::vector<FunctionSpec> specs{
      FunctionSpec::indicator(0.0, 0.5), FunctionSpec::indicator(0.1, 0.3, Endpoints::RightClosed),
      FunctionSpec::trig(0.1, {1.0 / 3.0, 0.0, 0.25}, {0.0, 2.0}), FunctionSpec::trig(0.0, {}),
      FunctionSpec::plateau(0.2, 0.4, 0.1)};
  for (const auto& f : specs) EXPECT_EQ(parse_function(to_string(f)), f) << to_string(f);
}

TEST(Text, ParsesDocumentedForms) {
  EXPECT_EQ(parse_function("indicator:a=0,b=0.5"), FunctionSpec::indicator(0.0, 0.5));
  EXPECT_EQ(parse_function("indicator:a=0,b=0.5,ends=right"),
            FunctionSpec::indicator(0.0, 0.5, Endpoints::RightClosed));
  EXPECT_EQ(parse_function("trig:cos=0.7,0,0.4"), FunctionSpec::trig(0.0, {0.7, 0.0, 0.4}));
  EXPECT_EQ(parse_function("trig:a0=2;sin=1"), FunctionSpec::trig(2.0, {}, {1.0}));
  EXPECT_EQ(parse_function("plateau:a=0.2,b=0.4,eps=0.1"), FunctionSpec::plateau(0.2, 0.4, 0.1));
}

TEST(Text, ErrorsNameTheProblem) {
  try {
    parse_function("indicator:a=0");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("'b'"), std::string::npos);
  }
  EXPECT_THROW(parse_function("sawtooth:a=1"), Error);
  EXPECT_THROW(parse_function("trig:cos=1,,2"), Error);
  EXPECT_THROW(parse_function("indicator:a=0,b=0.5,ends=left"), Error);
}

}  // namespace
}  // namespace permspec
