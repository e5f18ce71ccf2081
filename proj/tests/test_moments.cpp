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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "permspec/error.hpp"
#include "permspec/moments.hpp"

namespace permspec {
namespace {

const FunctionSpec kCos = FunctionSpec::trig(0.0, {1.0});
const FunctionSpec kOdd = FunctionSpec::trig(0.0, {}, {1.0});
const FunctionSpec kHalf = FunctionSpec::indicator(0.0, 0.5);
const FunctionSpec kPlateau = FunctionSpec::plateau(0.2, 0.4, 0.1);

TEST(Psi, Examples) {
  EXPECT_EQ(psi(5, EwensParam(1.0), 3), 1.0);
  EXPECT_NEAR(psi(2, EwensParam(2.0), 2), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(psi(4, EwensParam(2.0), 1), 0.8, 1e-15);
  EXPECT_THROW(psi(4, EwensParam(2.0), 5), Error);
  EXPECT_THROW(psi(4, EwensParam(2.0), 0), Error);
}

TEST(Psi, MatchesProductOracle) {
  for (double theta : {0.3, 2.0, 7.5}) {
    const PsiTable t(300, EwensParam(theta));
    // A j-factor product in double carries at most ~3j roundings.
    for (std::int64_t j = 1; j <= 300; ++j) {
      const double tol = 4.0 * static_cast<double>(j) * std::numeric_limits<double>::epsilon();
      EXPECT_NEAR(t(j), oracle::psi_product(300, theta, j), tol * t(j) + 1e-300);
    }
  }
}

TEST(Psi, Normalization) {
  for (double theta : {0.3, 1.0, 2.0, 7.5}) {
    for (std::int64_t n : {1, 2, 10, 1000}) {
      const PsiTable t(n, EwensParam(theta));
      double s = 0.0;
      for (double v : t.values()) s += v;
      EXPECT_NEAR(theta / n * s, 1.0, 1e-12) << theta << ' ' << n;
    }
  }
}

TEST(FallingFactorial, Examples) {
  using R = std::vector<std::pair<std::int64_t, std::int64_t>>;
  EXPECT_NEAR(falling_factorial_moment(7, EwensParam(1.0), R{{1, 1}}), 1.0, 1e-15);
  EXPECT_NEAR(falling_factorial_moment(4, EwensParam(2.0), R{{2, 1}}), 0.6, 1e-15);
  EXPECT_EQ(falling_factorial_moment(4, EwensParam(2.0), R{{3, 1}, {2, 1}}), 0.0);
}

TEST(FallingFactorial, ThetaOneAgainstEnumeration) {
  using R = std::vector<std::pair<std::int64_t, std::int64_t>>;
  const std::int64_t n = 7;
  const auto law = oracle::brute_force_ewens(static_cast<int>(n), 1.0);
  for (const R& r : {R{{1, 2}}, R{{1, 1}, {2, 1}}, R{{2, 2}}, R{{3, 1}, {1, 3}}, R{{2, 1}, {5, 1}}}) {
    double expected = 0.0;
    for (const auto& [alpha, p] : law) {
      double prod = 1.0;
      for (const auto& [j, k] : r) {
        double ff = 1.0;
        for (std::int64_t i = 0; i < k; ++i) ff *= static_cast<double>(alpha[static_cast<std::size_t>(j - 1)] - i);
        prod *= ff;
      }
      expected += p * prod;
    }
    std::int64_t m = 0;
    double formula = 1.0;
    for (const auto& [j, k] : r) {
      m += j * k;
      formula *= std::pow(1.0 / j, static_cast<double>(k));
    }
    if (m > n) formula = 0.0;
    EXPECT_NEAR(falling_factorial_moment(n, EwensParam(1.0), r), expected, 1e-12);
    EXPECT_NEAR(formula, expected, 1e-12);
  }
}

TEST(ExactMean, Examples) {
  EXPECT_NEAR(exact_mean(5, EwensParam(1.0), build_series(kCos, 5), kCos), 1.0, 1e-15);
  EXPECT_NEAR(exact_mean(3, EwensParam(2.0), build_series(kCos, 3), kCos), 1.5, 1e-15);
  EXPECT_EQ(exact_mean(4, EwensParam(1.0), build_series(kOdd, 4), kOdd), 0.0);
  EXPECT_THROW(exact_mean(6, EwensParam(1.0), build_series(kCos, 5), kCos), Error);
}

TEST(ExactVariance, Examples) {
  EXPECT_NEAR(exact_variance(4, EwensParam(1.0), build_series(kCos, 4), kCos), 1.0, 1e-14);
  for (double theta : {0.5, 3.0})
    EXPECT_EQ(exact_variance(40, EwensParam(theta), build_series(kOdd, 40), kOdd), 0.0);
  const auto ref = oracle::brute_force_statistic(6, 0.5, kHalf);
  EXPECT_NEAR(exact_variance(6, EwensParam(0.5), build_series(kHalf, 6), kHalf), ref.variance, 1e-10);
}

TEST(ExactMoments, MatchBruteForceEnumeration) {
  for (int n = 1; n <= 7; ++n) {
    for (double theta : {0.5, 1.0, 2.0}) {
      for (const auto& f : {kCos, kHalf, kPlateau}) {
        const auto s = build_series(f, n);
        const auto ref = oracle::brute_force_statistic(n, theta, f);
        EXPECT_NEAR(exact_mean(n, EwensParam(theta), s, f), ref.mean, 1e-9) << to_string(f) << n << theta;
        for (auto m : {VarianceMethod::Direct, VarianceMethod::Convolution, VarianceMethod::Auto})
          EXPECT_NEAR(exact_variance(n, EwensParam(theta), s, f, m), ref.variance, 1e-9)
              << to_string(f) << " n=" << n << " theta=" << theta;
      }
    }
  }
}

TEST(ExactVariance, MethodsAgreeAtModerateN) {
  for (double theta : {0.5, 1.0, 2.0}) {
    for (const auto& f : {kHalf, FunctionSpec::trig(0.0, {0.7, 0.0, 0.4})}) {
      const std::int64_t n = 3000;
      const auto s = build_series(f, n);
      const double d = exact_variance(n, EwensParam(theta), s, f, VarianceMethod::Direct);
      const double c = exact_variance(n, EwensParam(theta), s, f, VarianceMethod::Convolution);
      const double a = exact_variance(n, EwensParam(theta), s, f, VarianceMethod::Auto);
      EXPECT_NEAR(c, d, 1e-9 * std::max(1.0, d)) << theta;
      EXPECT_NEAR(a, d, 1e-9 * std::max(1.0, d)) << theta;
    }
  }
}

TEST(Cesaro, Numbers) {
  EXPECT_NEAR(cesaro_number(1.0, 5), 6.0, 1e-14);
  EXPECT_EQ(cesaro_number(0.0, 7), 1.0);
  EXPECT_NEAR(cesaro_number(0.5, 2), 1.875, 1e-15);
  EXPECT_THROW(cesaro_number(-1.5, 2), Error);
}

TEST(Cesaro, AllOnesMapToOne) {
  for (double order : {0.5, 1.0, 3.0})
    for (std::int64_t n : {0, 1, 7, 100, 5000}) {
      const std::vector<double> ones(static_cast<std::size_t>(n + 1), 1.0);
      EXPECT_NEAR(cesaro_mean(ones, order, n), 1.0, 1e-12) << order << ' ' << n;
    }
}

TEST(Cesaro, ClassicalAverage) {
  const std::vector<double> s{0, 1, 2, 3};
  EXPECT_NEAR(cesaro_mean(s, 1.0, 3), 1.5, 1e-15);
}

TEST(Cesaro, JnRepresentation) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  for (double theta : {0.5, 1.0, 2.5}) {
    for (std::int64_t n : {1, 5, 64}) {
      std::vector<double> s(static_cast<std::size_t>(n + 1));
      s[0] = 0.0;
      for (std::int64_t j = 1; j <= n; ++j) s[j] = val(gen);
      double rhs = 0.0;
      for (std::int64_t j = 1; j <= n; ++j)
        rhs += s[j] * theta / n * oracle::psi_product(n, theta, j);
      rhs *= static_cast<double>(n) / (n + theta);
      EXPECT_NEAR(cesaro_mean(s, theta, n), rhs, 1e-12);
    }
  }
}

TEST(Cesaro, NormalizedIndicatorMeansDecrease) {
  // |u_j| itself does not tend to 0 for an arc, so the sequence is taken
  // with the Gaussian normalization u_j / eta_N (theta = 1).
  const auto s = build_series(kHalf, 100000);
  for (double order : {1.0, 2.0}) {
    double prev = INFINITY, first = 0.0;
    for (std::int64_t n : {100, 1000, 10000, 100000}) {
      const double eta = std::sqrt(s.partial_sum_jRj2[static_cast<std::size_t>(n - 1)]);
      std::vector<double> seq{0.0};
      for (std::int64_t j = 1; j <= n; ++j) seq.push_back(std::abs(s.uj(j)) / eta);
      const double v = cesaro_mean(seq, order, n);
      EXPECT_LT(v, prev) << order << ' ' << n;
      if (n == 100) first = v;
      prev = v;
    }
    EXPECT_LT(prev, 0.8 * first);
  }
}

TEST(CouplingRhs, Examples) {
  const std::int64_t n = 50;
  for (double theta : {0.5, 1.0, 2.0}) {
    const std::vector<double> zero(n, 0.0), ones(n, 1.0);
    for (double c : coupling_bound_rhs(n, EwensParam(theta), zero, BoundNorm::L1)) EXPECT_EQ(c, 0.0);
    for (double c : coupling_bound_rhs(n, EwensParam(theta), zero, BoundNorm::L2)) EXPECT_EQ(c, 0.0);
    const auto l1 = coupling_bound_rhs(n, EwensParam(theta), ones, BoundNorm::L1);
    EXPECT_NEAR(l1[0], 1.0, 1e-14);
    EXPECT_NEAR(l1[1], 1.0, 1e-12);
  }
  std::vector<double> u(n);
  for (std::int64_t j = 0; j < n; ++j) u[j] = std::sin(static_cast<double>(j));
  const auto l2 = coupling_bound_rhs(n, EwensParam(1.0), u, BoundNorm::L2);
  EXPECT_NEAR(l2[0], l2[2], 1e-15);
  EXPECT_NEAR(l2[1], l2[3], 1e-15);
  const auto l1 = coupling_bound_rhs(n, EwensParam(1.0), u, BoundNorm::L1);
  EXPECT_NEAR(l1[0], l1[1], 1e-15);
}

}  // namespace
}  // namespace permspec
