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
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "permspec/error.hpp"
#include "permspec/trapezoid.hpp"

namespace permspec {
namespace {

const FunctionSpec kCos = FunctionSpec::trig(0.0, {1.0});
const FunctionSpec kHalf = FunctionSpec::indicator(0.0, 0.5);
const FunctionSpec kHalfRight = FunctionSpec::indicator(0.0, 0.5, Endpoints::RightClosed);
const FunctionSpec kPlateau = FunctionSpec::plateau(0.2, 0.4, 0.1);

TEST(RjDirect, Examples) {
  EXPECT_NEAR(rj_direct(kHalf, 3), -1.0 / 6.0, 1e-15);
  EXPECT_EQ(rj_direct(kCos, 1), 1.0);
  EXPECT_EQ(rj_direct(FunctionSpec::trig(0.0, {}, {1.0}), 7), 0.0);
}

TEST(RjDirect, MatchesLongDoubleOracle) {
  for (const auto& f : {kHalf, kPlateau, FunctionSpec::trig(0.3, {0.2, -0.7, 0.1}, {0.5})})
    for (std::int64_t j = 1; j <= 200; ++j)
      EXPECT_NEAR(rj_direct(f, j), oracle::rj_long_double(f, j, integral(f)), 1e-13) << to_string(f) << j;
}

TEST(ClosedForm, Examples) {
  EXPECT_NEAR(rj_indicator_closed_form(0.0, 0.5, 3), -1.0 / 6.0, 1e-15);
  EXPECT_EQ(rj_indicator_closed_form(0.0, 0.5, 2), 0.0);
  EXPECT_EQ(rj_indicator_closed_form(0.25, 0.75, 2), 0.0);
  EXPECT_NEAR(rj_direct(FunctionSpec::indicator(0.25, 0.75, Endpoints::RightClosed), 2), 0.0, 1e-15);
}

TEST(ClosedForm, AgreesWithDirectOnRandomArcs) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> jd(1, 500);
  for (int trial = 0; trial < 200; ++trial) {
    double a = unit(gen), b = unit(gen);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3) continue;
    const auto j = jd(gen);
    const double closed = rj_indicator_closed_form(a, b, j);
    EXPECT_NEAR(closed, rj_direct(FunctionSpec::indicator(a, b, Endpoints::RightClosed), j), 1e-12);
    const auto open = build_series(FunctionSpec::indicator(a, b), j, SeriesMethod::ClosedForm);
    EXPECT_NEAR(open.rj(j), rj_direct(FunctionSpec::indicator(a, b), j), 1e-12);
  }
}

TEST(ClosedForm, RationalEndpointsRespectConvention) {
  for (std::int64_t j = 1; j <= 60; ++j) {
    for (const auto& [a, b] : {std::pair{0.0, 0.5}, {0.25, 0.75}, {0.1, 0.6}, {1.0 / 3.0, 1.0}}) {
      for (auto ends : {Endpoints::Open, Endpoints::RightClosed}) {
        const auto f = FunctionSpec::indicator(a, b, ends);
        EXPECT_NEAR(build_series(f, j, SeriesMethod::ClosedForm).rj(j), rj_direct(f, j), 1e-12)
            << to_string(f) << " j=" << j;
      }
    }
  }
}

TEST(Poisson, Examples) {
  EXPECT_EQ(rj_poisson(kCos, 1, 1).value, 1.0);
  EXPECT_EQ(rj_poisson(kCos, 2, 10).value, 0.0);
  EXPECT_EQ(rj_poisson(FunctionSpec::trig(0.0, {0.0, 0.0, 1.0}), 3, 1).value, 1.0);
  EXPECT_NEAR(rj_direct(FunctionSpec::trig(0.0, {0.0, 0.0, 1.0}), 3), 1.0, 1e-15);
}

TEST(Poisson, AgreesWithDirectForRandomTrig) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(1, 16);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = deg(gen);
    std::vector<double> c(static_cast<std::size_t>(d)), s(static_cast<std::size_t>(d));
    for (auto& x : c) x = coef(gen);
    for (auto& x : s) x = coef(gen);
    const auto f = FunctionSpec::trig(coef(gen), c, s);
    for (std::int64_t j = 1; j <= 64; ++j) {
      const auto ps = rj_poisson(f, j, 64);
      EXPECT_NEAR(ps.value, rj_direct(f, j), 1e-12) << to_string(f) << " j=" << j;
      EXPECT_FALSE(ps.truncation_warning);
    }
  }
}

TEST(Poisson, PlateauConvergesWithTailBound) {
  for (std::int64_t j : {1, 3, 8}) {
    const auto ps = rj_poisson(kPlateau, j, 256);
    EXPECT_LE(std::abs(ps.value - rj_direct(kPlateau, j)), ps.tail_bound + 1e-12) << j;
  }
}

TEST(Poisson, IndicatorAwayFromJumps) {
  // Irrational-looking endpoints keep every jb and ja off the lattice.
  const auto f = FunctionSpec::indicator(0.1234567, 0.4567891);
  for (std::int64_t j : {1, 2, 5, 11}) {
    const auto ps = rj_poisson(f, j, 200000);
    EXPECT_LE(std::abs(ps.value - rj_direct(f, j)), ps.tail_bound + 1e-12) << j;
  }
}

TEST(BuildSeries, Examples) {
  const auto s = build_series(kCos, 5, SeriesMethod::Direct);
  EXPECT_EQ(s.r, (std::vector<double>{1, 0, 0, 0, 0}));
  EXPECT_EQ(build_series(FunctionSpec::trig(3.0, {}), 4).r, (std::vector<double>{0, 0, 0, 0}));
  const auto h = build_series(kHalfRight, 4);
  ASSERT_EQ(h.r.size(), 4u);
  EXPECT_NEAR(h.r[0], -0.5, 1e-15);
  EXPECT_NEAR(h.r[1], 0.0, 1e-15);
  EXPECT_NEAR(h.r[2], -1.0 / 6.0, 1e-15);
  EXPECT_NEAR(h.r[3], 0.0, 1e-15);
  // The open arc drops f(1/2) = 1 from every even-j node set.
  const auto o = build_series(kHalf, 4);
  EXPECT_NEAR(o.r[1], -0.5, 1e-15);
  EXPECT_NEAR(o.r[3], -0.25, 1e-15);
}

TEST(BuildSeries, OddTrigIsExactlyZero) {
  const auto s = build_series(FunctionSpec::trig(0.0, {0.0, 0.0}, {0.3, -1.0, 0.25}), 50, SeriesMethod::Direct);
  for (double r : s.r) EXPECT_EQ(r, 0.0);
  const auto p = build_series(FunctionSpec::trig(0.0, {}, {0.3, -1.0}), 50, SeriesMethod::PoissonSummation);
  for (double r : p.r) EXPECT_EQ(r, 0.0);
}

TEST(BuildSeries, IndicatorUIsBoundedByVariation) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double a = unit(gen), b = unit(gen);
    if (a > b) std::swap(a, b);
    if (a == b) continue;
    const auto s = build_series(FunctionSpec::indicator(a, b), 2000);
    for (double u : s.u) EXPECT_LE(std::abs(u), 2.0);
  }
}

TEST(BuildSeries, ClosedFormRejectsSmoothFamilies) {
  EXPECT_THROW(build_series(kCos, 3, SeriesMethod::ClosedForm), Error);
  EXPECT_THROW(build_series(kCos, 0), Error);
}

TEST(Regime, Families) {
  EXPECT_EQ(classify_regime(build_series(kCos, 64), kCos).regime, Regime::Bounded);
  const auto odd = FunctionSpec::trig(0.0, {}, {1.0});
  EXPECT_EQ(classify_regime(build_series(odd, 64), odd).regime, Regime::Degenerate);
  EXPECT_EQ(classify_regime(build_series(kHalf, 4096), kHalf).regime, Regime::Divergent);
  EXPECT_EQ(classify_regime(build_series(kPlateau, 512), kPlateau).regime, Regime::Bounded);
}

TEST(Regime, IndicatorPartialSumsGrowLogarithmically) {
  // sum_{j<=J} j R_j^2 = sum_{odd j<=J} 1/(4j) for the (0,1/2] arc: slope 1/8 in log J.
  const auto s = build_series(kHalfRight, 1000000);
  const double lo = s.partial_sum_jRj2[9999], hi = s.partial_sum_jRj2[999999];
  EXPECT_NEAR((hi - lo) / std::log(100.0), 0.125, 1e-3);
  const auto report = classify_regime(s, kHalfRight);
  EXPECT_EQ(report.regime, Regime::Divergent);
  EXPECT_NEAR(report.log_slope, 0.125, 1e-3);
}

TEST(Jackson, ConstantFunction) {
  const auto f = FunctionSpec::trig(2.0, {});
  const auto rep = jackson_bound_check(f, build_series(f, 64));
  EXPECT_TRUE(rep.all_hold);
  for (const auto& row : rep.rows) {
    EXPECT_EQ(row.abs_rj, 0.0);
    EXPECT_EQ(row.bound, 0.0);
  }
}

TEST(Jackson, CosineAtFour) {
  const auto rep = jackson_bound_check(kCos, build_series(kCos, 4));
  EXPECT_TRUE(rep.all_hold);
  EXPECT_EQ(rep.rows.back().j, 4);
  EXPECT_EQ(rep.rows.back().abs_rj, 0.0);
}

TEST(Jackson, PlateauMargins) {
  const auto rep = jackson_bound_check(kPlateau, build_series(kPlateau, 32));
  EXPECT_TRUE(rep.all_hold);
  for (const auto& row : rep.rows)
    if (row.j == 8 || row.j == 16 || row.j == 32) EXPECT_GE(row.margin, 1.0) << row.j;
}

TEST(Jackson, HoldsAcrossFamilies) {
  for (const auto& f : {kHalf, kHalfRight, kCos, FunctionSpec::trig(0.1, {0.3, 0.0, -0.8}, {0.2}),
                        FunctionSpec::plateau(0.5, 0.6, 0.2)}) {
    const auto rep = jackson_bound_check(f, build_series(f, 256));
    EXPECT_TRUE(rep.all_hold) << to_string(f);
  }
}

}  // namespace
}  // namespace permspec
