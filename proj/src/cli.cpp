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

#include "permspec/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "permspec/error.hpp"
#include "permspec/funcs.hpp"
#include "permspec/limitlaw.hpp"
#include "permspec/moments.hpp"
#include "permspec/numeric.hpp"
#include "permspec/montecarlo.hpp"
#include "permspec/report.hpp"
#include "permspec/trapezoid.hpp"

namespace permspec {
namespace {

constexpr const char* kFunctionHelp =
    "Test function on the unit circle:\n"
    "  indicator:a=A,b=B[,ends=open|right]  1 on (a,b) by default; ends=right uses (a,b]\n"
    "  trig:a0=C;cos=c1,c2,...;sin=s1,s2,...  a0 + sum c_k cos 2pi k x + s_k sin 2pi k x\n"
    "  plateau:a=A,b=B,eps=E                 C-infinity bump equal to 1 on [a,b]";

constexpr std::int64_t kDefaultLimitTruncation = 1000;

/// Raised for problems the user can fix by changing a flag.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string subcommand;
  std::string function = "trig:cos=1";
  std::int64_t n = 10;
  double theta = 1.0;
  std::int64_t jmax = 10;
  std::int64_t reps = 1000;
  std::uint64_t seed = 0;
  std::string seed_source = "default";
  int workers = 1;
  double horizon_factor = kDefaultHorizonFactor;
  std::string format;
  std::string emit_plot_data;
  std::string method = "auto";
  bool cycle_counts = false;
  std::int64_t j_trunc = 0;
  double eps = 1e-3;
  double t_min = -5.0;
  double t_max = 5.0;
  double t_step = 0.5;
  std::string mode = "statistic";
  std::string hn_mode = "sparse";
  std::string config;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config: requires a file argument");
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

/// Turns key=value lines into leading flags. Every option keeps its last
/// value, so flags given on the command line override the file.
std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot read '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("--config: line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "config") throw UsageError("--config: line " + std::to_string(lineno) + ": nested config");
    if (key == "cycle-counts") {
      if (value == "true" || value == "1") out.push_back("--cycle-counts");
      else if (value != "false" && value != "0")
        throw UsageError("--cycle-counts: expected true or false in config, got '" + value + "'");
      continue;
    }
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

std::uint64_t parse_env_seed(const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw UsageError("PERMSPEC_SEED: expected an unsigned 64-bit integer, got '" + text + "'");
  return v;
}

FunctionSpec resolve_function(const std::string& text) {
  try {
    return parse_function(text);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::InvalidArgument)
      throw UsageError("--function: " + std::string(e.what()));
    throw;
  }
}

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (o.format == a) return;
  throw UsageError("--format: '" + o.format + "' is not available for " + o.subcommand);
}

nlohmann::json resolved_config(const Options& o, const FunctionSpec& f) {
  nlohmann::json j;
  j["subcommand"] = o.subcommand;
  j["function"] = function_metadata(f);
  j["n"] = o.n;
  j["theta"] = o.theta;
  j["jmax"] = o.jmax;
  j["reps"] = o.reps;
  j["seed"] = o.seed;
  j["seed_source"] = o.seed_source;
  j["workers"] = o.workers;
  j["horizon_factor"] = o.horizon_factor;
  j["format"] = o.format;
  j["method"] = o.method;
  j["cycle_counts"] = o.cycle_counts;
  j["j_trunc"] = o.j_trunc;
  j["eps"] = o.eps;
  j["t_min"] = o.t_min;
  j["t_max"] = o.t_max;
  j["t_step"] = o.t_step;
  j["mode"] = o.mode;
  j["hn_mode"] = o.hn_mode;
  j["emit_plot_data"] = o.emit_plot_data;
  j["config"] = o.config;
  return j;
}

/// CSV metadata: one "# key=value" line per resolved setting.
void write_csv_metadata(std::ostream& os, const nlohmann::json& config) {
  std::vector<std::pair<std::string, std::string>> rows;
  std::istringstream lines(to_text(config));
  std::string line;
  while (std::getline(lines, line)) {
    const auto sp = line.find(' ');
    os << "# " << line.substr(0, sp) << '=' << trim(line.substr(sp)) << '\n';
  }
}

void emit_report(std::ostream& os, const Options& o, nlohmann::json body) {
  if (o.format == "text") os << to_text(body);
  else os << body.dump(2) << '\n';
}

SeriesMethod series_method(const Options& o, const FunctionSpec& f) {
  if (o.method == "direct") return SeriesMethod::Direct;
  if (o.method == "closed-form") return SeriesMethod::ClosedForm;
  if (o.method == "poisson") return SeriesMethod::PoissonSummation;
  return preferred_method(f);
}

void cmd_rj(const Options& o, const FunctionSpec& f, std::ostream& os) {
  require_format(o, {"csv", "json"});
  if (o.jmax < 1) throw UsageError("--jmax: must be at least 1");
  const auto series = build_series(f, o.jmax, series_method(o, f));
  auto config = resolved_config(o, f);
  config["resolved_method"] = to_string(series.method);
  if (o.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (std::int64_t j = 1; j <= o.jmax; ++j) {
      const auto k = static_cast<std::size_t>(j - 1);
      rows.push_back({{"j", j}, {"R_j", series.r[k]}, {"u_j", series.u[k]},
                      {"partial_sum_jRj2", series.partial_sum_jRj2[k]}});
    }
    os << nlohmann::json{{"config", config}, {"rows", rows}}.dump(2) << '\n';
    return;
  }
  write_csv_metadata(os, config);
  os << "j,R_j,u_j,partial_sum_jRj2\n";
  for (std::int64_t j = 1; j <= o.jmax; ++j) {
    const auto k = static_cast<std::size_t>(j - 1);
    os << j << ',' << format_double(series.r[k]) << ',' << format_double(series.u[k]) << ','
       << format_double(series.partial_sum_jRj2[k]) << '\n';
  }
}

void cmd_moments(const Options& o, const FunctionSpec& f, std::ostream& os) {
  require_format(o, {"json", "text"});
  const EwensParam theta(o.theta);
  const auto series = build_series(f, o.n);
  KahanSum sum_r;
  for (std::int64_t j = 1; j <= o.n; ++j) sum_r.add(series.rj(j));
  nlohmann::json j;
  j["n"] = o.n;
  j["theta"] = o.theta;
  j["function"] = to_string(f);
  j["integral"] = integral(f);
  j["exact_mean"] = exact_mean(o.n, theta, series, f);
  j["exact_variance"] = exact_variance(o.n, theta, series, f);
  j["eta_squared"] = eta_normalization(series, theta, o.n).eta_sq;
  j["sum_Rj"] = sum_r.value();
  j["regime"] = to_string(classify_regime(series, f).regime);
  j["config"] = resolved_config(o, f);
  emit_report(os, o, j);
}

SimulationConfig simulation_config(const Options& o, const FunctionSpec& f) {
  SimulationConfig c;
  c.n = o.n;
  c.theta = o.theta;
  c.function = f;
  c.replicates = o.reps;
  c.master_seed = o.seed;
  c.workers = o.workers;
  c.mode = parse_simulation_mode(o.mode);
  c.horizon_factor = o.horizon_factor;
  c.hn_mode = o.hn_mode == "dense" ? HnMode::Dense : HnMode::Sparse;
  c.mu_eps = o.eps;
  return c;
}

void cmd_sample(const Options& o, const FunctionSpec& f, std::ostream& os) {
  require_format(o, {"csv"});
  auto c = simulation_config(o, f);
  c.mode = o.cycle_counts ? SimulationMode::CycleCounts : SimulationMode::Statistic;
  const auto result = run(c);
  write_csv_metadata(os, resolved_config(o, f));
  if (o.cycle_counts) {
    os << "replicate,j,alpha_j\n";
    for (std::size_t i = 0; i < result.cycle_counts.size(); ++i)
      for (const auto& [j, a] : result.cycle_counts[i].entries()) os << i << ',' << j << ',' << a << '\n';
  } else {
    os << "replicate,I_value\n";
    for (std::size_t i = 0; i < result.values.size(); ++i) os << i << ',' << format_double(result.values[i]) << '\n';
  }
}

LimitLawSpec limit_law(const Options& o, const FunctionSpec& f) {
  std::int64_t j_trunc = o.j_trunc;
  if (j_trunc == 0) j_trunc = f.is_trig() ? std::max<std::int64_t>(1, f.degree()) : kDefaultLimitTruncation;
  if (j_trunc < 1) throw UsageError("--j-trunc: must be at least 1");
  return build_levy(build_series(f, j_trunc), f, EwensParam(o.theta), j_trunc);
}

void cmd_limit_cf(const Options& o, const FunctionSpec& f, std::ostream& os) {
  require_format(o, {"csv"});
  if (!(o.t_step > 0.0)) throw UsageError("--t-step: must be positive");
  if (o.t_max < o.t_min) throw UsageError("--t-max: must not be below --t-min");
  const auto law = limit_law(o, f);
  auto config = resolved_config(o, f);
  config["resolved_j_trunc"] = law.j_trunc;
  config["tail_variance_bound"] = law.tail_variance_bound;
  write_csv_metadata(os, config);
  os << "t,re_cf,im_cf,exponent_tail_bound\n";
  const auto steps = static_cast<std::int64_t>(std::floor((o.t_max - o.t_min) / o.t_step + 1e-9));
  for (std::int64_t k = 0; k <= steps; ++k) {
    const double t = o.t_min + static_cast<double>(k) * o.t_step;
    const auto v = cf_mu(law, t);
    os << format_double(t) << ',' << format_double(v.value.real()) << ',' << format_double(v.value.imag())
       << ',' << format_double(v.exponent_tail_bound) << '\n';
  }
}

void cmd_limit_sample(const Options& o, const FunctionSpec& f, std::ostream& os) {
  require_format(o, {"csv"});
  if (o.reps < 1) throw UsageError("--reps: must be at least 1");
  const auto law = limit_law(o, f);
  std::vector<double> values(static_cast<std::size_t>(o.reps));
  parallel_for(o.reps, o.workers, [&](std::int64_t i) {
    Stream rng = replicate_stream(o.seed, static_cast<std::uint64_t>(i));
    values[static_cast<std::size_t>(i)] = sample_mu(law, o.eps, rng);
  });
  auto config = resolved_config(o, f);
  config["resolved_j_trunc"] = law.j_trunc;
  write_csv_metadata(os, config);
  for (double v : values) os << format_double(v) << '\n';
}

void cmd_coupling(const Options& o, const FunctionSpec& f, std::ostream& os) {
  require_format(o, {"json", "text"});
  const auto series = build_series(f, o.n);
  const auto report = coupling_experiment(o.n, EwensParam(o.theta), series.u, o.reps, o.horizon_factor,
                                          o.seed, o.workers);
  emit_report(os, o, {{"config", resolved_config(o, f)}, {"report", to_json(report)}});
}

void cmd_verify(const Options& o, const FunctionSpec& f, std::ostream& os) {
  require_format(o, {"json", "text"});
  const auto report = verify_against_enumeration(o.n, EwensParam(o.theta), f, o.reps, o.seed, o.workers);
  emit_report(os, o, {{"config", resolved_config(o, f)}, {"report", to_json(report)}});
}

void cmd_simulate(const Options& o, const FunctionSpec& f, std::ostream& os) {
  require_format(o, {"json", "text"});
  const auto result = run(simulation_config(o, f));
  auto body = to_json(result);
  body["cli"] = resolved_config(o, f);
  if (!o.emit_plot_data.empty()) {
    std::vector<std::string> files;
    for (const auto& p : write_plot_data(result, o.emit_plot_data)) files.push_back(p.string());
    body["plot_files"] = files;
  }
  emit_report(os, o, body);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::optional<std::string>& env_seed) {
  Options o;
  CLI::App app{"Linear statistics of Ewens random permutations", "permspec"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  app.add_option("--function", o.function, kFunctionHelp)->capture_default_str();
  app.add_option("--n", o.n, "Permutation size N")->capture_default_str();
  app.add_option("--theta", o.theta, "Ewens parameter theta > 0")->capture_default_str();
  app.add_option("--jmax", o.jmax, "Largest j for rj")->capture_default_str();
  app.add_option("--reps", o.reps, "Replicates")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", o.seed,
                                  "Master seed; precedence: flag > PERMSPEC_SEED > 0");
  app.add_option("--workers", o.workers, "Worker threads; results do not depend on it")
      ->capture_default_str();
  app.add_option("--horizon-factor", o.horizon_factor,
                 "Coupling horizon = factor * N, capped at 1e7")
      ->capture_default_str();
  app.add_option("--format", o.format, "csv, json or text; the default depends on the subcommand")
      ->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_option("--emit-plot-data", o.emit_plot_data,
                 "simulate: directory for two-column 'x y' plot files");
  app.add_option("--method", o.method, "rj engine: auto, direct, closed-form or poisson")
      ->check(CLI::IsMember({"auto", "direct", "closed-form", "poisson"}))
      ->capture_default_str();
  app.add_flag("--cycle-counts", o.cycle_counts, "sample: emit replicate,j,alpha_j rows");
  app.add_option("--j-trunc", o.j_trunc,
                 "Limit law truncation; 0 picks the degree for trig and 1000 otherwise")
      ->capture_default_str();
  app.add_option("--eps", o.eps, "limit-sample / mu_limit: bound on the dropped standard deviation")
      ->capture_default_str();
  app.add_option("--t-min", o.t_min, "limit-cf grid start")->capture_default_str();
  app.add_option("--t-max", o.t_max, "limit-cf grid end")->capture_default_str();
  app.add_option("--t-step", o.t_step, "limit-cf grid step")->capture_default_str();
  app.add_option("--mode", o.mode, "simulate: statistic, cycle_counts, coupling, h_n or mu_limit")
      ->check(CLI::IsMember({"statistic", "cycle_counts", "coupling", "h_n", "mu_limit"}))
      ->capture_default_str();
  app.add_option("--hn-mode", o.hn_mode, "h_n sampler: sparse or dense")
      ->check(CLI::IsMember({"sparse", "dense"}))
      ->capture_default_str();
  app.add_option("--config", o.config, "File of key=value lines (keys are flag names); flags win");

  const std::vector<std::pair<const char*, const char*>> commands{
      {"rj", "Trapezoid errors R_j, u_j = j R_j and partial sums of j R_j^2 (CSV)"},
      {"moments", "Exact mean and variance of the linear statistic (JSON)"},
      {"sample", "Sampled linear statistics or cycle counts (CSV)"},
      {"limit-cf", "Characteristic function of the bounded-regime limit law (CSV)"},
      {"limit-sample", "Draws from the bounded-regime limit law, one per line"},
      {"coupling", "Feller coupling experiment (JSON)"},
      {"verify", "Cross-check against full enumeration, n <= 7 (JSON)"},
      {"simulate", "Monte Carlo run with an empirical report (JSON)"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  std::ostringstream buffer;
  try {
    std::vector<std::string> all;
    if (const auto path = config_path(args)) all = config_arguments(*path);
    all.insert(all.end(), args.begin(), args.end());
    std::reverse(all.begin(), all.end());  // CLI11 consumes from the back
    app.parse(all);

    o.subcommand = app.get_subcommands().front()->get_name();
    if (seed_opt->count() > 0) {
      o.seed_source = "flag";
    } else if (env_seed) {
      o.seed = parse_env_seed(*env_seed);
      o.seed_source = "env";
    }
    if (o.format.empty()) {
      const bool tabular = o.subcommand == "rj" || o.subcommand == "sample" ||
                           o.subcommand == "limit-cf" || o.subcommand == "limit-sample";
      o.format = tabular ? "csv" : "json";
    }
    const FunctionSpec f = resolve_function(o.function);

    if (o.subcommand == "rj") cmd_rj(o, f, buffer);
    else if (o.subcommand == "moments") cmd_moments(o, f, buffer);
    else if (o.subcommand == "sample") cmd_sample(o, f, buffer);
    else if (o.subcommand == "limit-cf") cmd_limit_cf(o, f, buffer);
    else if (o.subcommand == "limit-sample") cmd_limit_sample(o, f, buffer);
    else if (o.subcommand == "coupling") cmd_coupling(o, f, buffer);
    else if (o.subcommand == "verify") cmd_verify(o, f, buffer);
    else cmd_simulate(o, f, buffer);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "InternalError: " << e.what() << '\n';
    return kExitRuntime;
  }
  out << buffer.str();
  return kExitOk;
}

}  // namespace permspec
