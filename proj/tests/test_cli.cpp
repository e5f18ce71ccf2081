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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "permspec/cli.hpp"
#include "permspec/funcs.hpp"

namespace permspec {
namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args, std::optional<std::string> env = std::nullopt) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err, env);
  return {code, out.str(), err.str()};
}

/// Data lines and metadata of CSV output.
struct Csv {
  std::vector<std::string> rows;
  std::map<std::string, std::string> meta;
};

Csv parse_csv(const std::string& text) {
  Csv c;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      c.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
    } else {
      c.rows.push_back(line);
    }
  }
  return c;
}

std::vector<double> column(const Csv& c, int index) {
  std::vector<double> out;
  for (std::size_t i = 1; i < c.rows.size(); ++i) {
    std::istringstream ss(c.rows[i]);
    std::string cell;
    for (int k = 0; k <= index; ++k) std::getline(ss, cell, ',');
    out.push_back(std::stod(cell));
  }
  return out;
}

TEST(Cli, RjIndicatorRightClosed) {
  const auto r = invoke({"rj", "--function", "indicator:a=0,b=0.5,ends=right", "--jmax", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = parse_csv(r.out);
  EXPECT_EQ(csv.rows.front(), "j,R_j,u_j,partial_sum_jRj2");
  const auto rj = column(csv, 1);
  ASSERT_EQ(rj.size(), 4u);
  EXPECT_DOUBLE_EQ(rj[0], -0.5);
  EXPECT_DOUBLE_EQ(rj[1], 0.0);
  EXPECT_DOUBLE_EQ(rj[2], -1.0 / 6.0);
  EXPECT_DOUBLE_EQ(rj[3], 0.0);
  EXPECT_EQ(csv.meta.at("function.endpoint_convention"), "right-closed (a,b]");
}

TEST(Cli, RjIndicatorDefaultIsOpen) {
  const auto r = invoke({"rj", "--function", "indicator:a=0,b=0.5", "--jmax", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = parse_csv(r.out);
  const auto rj = column(csv, 1);
  EXPECT_DOUBLE_EQ(rj[1], -0.5);
  EXPECT_DOUBLE_EQ(rj[3], -0.25);
  EXPECT_EQ(csv.meta.at("function.endpoint_convention"), "open (a,b)");
}

TEST(Cli, MetadataFunctionReparses) {
  for (const std::string text : {"indicator:a=0.1,b=0.7", "trig:a0=0.5;cos=0.1,0.2;sin=0.3",
                                 "plateau:a=0.2,b=0.4,eps=0.1"}) {
    const auto r = invoke({"rj", "--function", text, "--jmax", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto meta = parse_csv(r.out).meta;
    EXPECT_EQ(parse_function(meta.at("function.text")), parse_function(text));
  }
}

TEST(Cli, MomentsJson) {
  const auto r = invoke({"moments", "--function", "trig:cos=1", "--n", "5", "--theta", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("exact_mean").get<double>(), 1.0);
  EXPECT_NEAR(j.at("exact_variance").get<double>(), 1.0, 1e-14);
  EXPECT_EQ(j.at("regime").get<std::string>(), "Bounded");
  for (const char* key : {"n", "theta", "function", "integral", "eta_squared", "sum_Rj", "config"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Cli, MissingParameterIsUsageError) {
  const auto r = invoke({"rj", "--function", "indicator:a=0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--function"), std::string::npos);
  EXPECT_NE(r.err.find("'b'"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UnknownAndMalformedFlags) {
  auto r = invoke({"rj", "--bogus", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--bogus"), std::string::npos);
  r = invoke({"moments", "--n", "many"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--n"), std::string::npos);
  r = invoke({"moments", "--format", "csv"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--format"), std::string::npos);
  r = invoke({});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, RuntimeErrorsCarryTheirName) {
  auto r = invoke({"verify", "--n", "9"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("TooLarge", 0), 0u) << r.err;
  r = invoke({"moments", "--theta", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("InvalidArgument", 0), 0u) << r.err;
  r = invoke({"limit-cf", "--function", "indicator:a=0,b=0.5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("WrongRegime", 0), 0u) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, SeedPrecedence) {
  const std::vector<std::string> base{"sample", "--n", "50", "--reps", "20"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  const auto flag5 = invoke(with({"--seed", "5"}));
  const auto env5 = invoke(base, "5");
  const auto flag_wins = invoke(with({"--seed", "5"}), "9");
  const auto dflt = invoke(base);
  const auto zero = invoke(with({"--seed", "0"}));
  EXPECT_EQ(parse_csv(flag5.out).rows, parse_csv(env5.out).rows);
  EXPECT_EQ(parse_csv(flag5.out).rows, parse_csv(flag_wins.out).rows);
  EXPECT_EQ(parse_csv(dflt.out).rows, parse_csv(zero.out).rows);
  EXPECT_NE(parse_csv(flag5.out).rows, parse_csv(zero.out).rows);
  EXPECT_EQ(parse_csv(env5.out).meta.at("seed_source"), "env");
  EXPECT_EQ(parse_csv(flag_wins.out).meta.at("seed_source"), "flag");
  EXPECT_EQ(invoke(base, "abc").code, 2);
}

TEST(Cli, ConfigFileUnderFlags) {
  const auto path = std::filesystem::temp_directory_path() / "permspec_cli_test.conf";
  {
    std::ofstream os(path);
    os << "# recipe\nfunction = indicator:a=0,b=0.5,ends=right\njmax=3\n";
  }
  auto r = invoke({"rj", "--config", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(column(parse_csv(r.out), 1).size(), 3u);
  r = invoke({"rj", "--config", path.string(), "--jmax", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = parse_csv(r.out);
  EXPECT_EQ(column(csv, 1).size(), 6u);
  EXPECT_EQ(csv.meta.at("function.text"), "indicator:a=0,b=0.5,ends=right");
  {
    std::ofstream os(path);
    os << "colour=blue\n";
  }
  r = invoke({"rj", "--config", path.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--colour"), std::string::npos);
  std::filesystem::remove(path);
  EXPECT_EQ(invoke({"rj", "--config", "/nonexistent/permspec.conf"}).code, 2);
}

TEST(Cli, SampleFormats) {
  auto r = invoke({"sample", "--n", "6", "--reps", "4", "--seed", "3"});
  ASSERT_EQ(r.code, 0);
  auto csv = parse_csv(r.out);
  EXPECT_EQ(csv.rows.front(), "replicate,I_value");
  EXPECT_EQ(csv.rows.size(), 5u);
  r = invoke({"sample", "--n", "6", "--reps", "4", "--seed", "3", "--cycle-counts"});
  ASSERT_EQ(r.code, 0);
  csv = parse_csv(r.out);
  EXPECT_EQ(csv.rows.front(), "replicate,j,alpha_j");
  std::vector<std::int64_t> mass(4, 0);
  for (std::size_t i = 1; i < csv.rows.size(); ++i) {
    std::istringstream ss(csv.rows[i]);
    std::int64_t rep, j, a;
    char c;
    ss >> rep >> c >> j >> c >> a;
    mass[static_cast<std::size_t>(rep)] += j * a;
  }
  for (auto m : mass) EXPECT_EQ(m, 6);
}

TEST(Cli, LimitCfAndSample) {
  auto r = invoke({"limit-cf", "--function", "trig:cos=1", "--t-min", "0", "--t-max", "1", "--t-step", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto csv = parse_csv(r.out);
  EXPECT_EQ(csv.rows.front(), "t,re_cf,im_cf,exponent_tail_bound");
  EXPECT_EQ(csv.rows.size(), 4u);
  EXPECT_EQ(csv.rows[1], "0,1,0,0");
  r = invoke({"limit-sample", "--function", "trig:cos=1", "--reps", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  csv = parse_csv(r.out);
  EXPECT_EQ(csv.rows.size(), 7u);
  for (const auto& line : csv.rows) EXPECT_EQ(std::stod(line) + 1.0, std::round(std::stod(line) + 1.0));
}

TEST(Cli, ReportsAndPlotData) {
  const auto dir = std::filesystem::temp_directory_path() / "permspec_cli_plots";
  std::filesystem::remove_all(dir);
  auto r = invoke({"simulate", "--n", "20", "--reps", "500", "--emit-plot-data", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("plot_files").size(), 4u);
  for (const char* name : {"histogram.dat", "ecdf.dat", "cf_re.dat", "cf_im.dat"}) {
    std::ifstream in(dir / name);
    ASSERT_TRUE(in) << name;
    double x, y;
    EXPECT_TRUE(static_cast<bool>(in >> x >> y)) << name;
  }
  std::filesystem::remove_all(dir);
  r = invoke({"simulate", "--mode", "sideways"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--mode"), std::string::npos);
  r = invoke({"coupling", "--n", "100", "--reps", "200", "--format", "text"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("report.inequality_violations"), std::string::npos);
  r = invoke({"verify", "--n", "3", "--reps", "2000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out).at("report").at("moments_agree").get<bool>());
}

TEST(Cli, HelpDocumentsEndpoints) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ends=right"), std::string::npos);
  EXPECT_NE(r.out.find("PERMSPEC_SEED"), std::string::npos);
}

}  // namespace
}  // namespace permspec
