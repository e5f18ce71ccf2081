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

#include "permspec/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "permspec/error.hpp"

namespace permspec {
namespace {

void put_optional(nlohmann::json& j, const char* key, const std::optional<double>& v) {
  j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += scalar_text(v[i]);
    }
    return s + "]";
  }
  return v.dump();
}

void flatten(const nlohmann::json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else {
    rows.emplace_back(prefix, scalar_text(j));
  }
}

std::filesystem::path write_columns(const std::filesystem::path& path, const std::vector<double>& x,
                                    const std::vector<double>& y) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  for (std::size_t i = 0; i < x.size(); ++i) os << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
  return path;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json function_metadata(const FunctionSpec& f) {
  nlohmann::json j;
  j["text"] = to_string(f);
  j["family"] = f.family();
  if (f.is_indicator()) {
    j["endpoint_convention"] = f.as<Indicator>()->ends == Endpoints::Open ? "open (a,b)" : "right-closed (a,b]";
  } else {
    j["endpoint_convention"] = "n/a";
  }
  return j;
}

nlohmann::json to_json(const SimulationConfig& c) {
  nlohmann::json j;
  j["n"] = c.n;
  j["theta"] = c.theta;
  j["function"] = function_metadata(c.function);
  j["replicates"] = c.replicates;
  j["master_seed"] = c.master_seed;
  j["workers"] = c.workers;
  j["mode"] = to_string(c.mode);
  j["horizon_factor"] = c.horizon_factor;
  j["horizon"] = coupling_horizon(c.n, c.horizon_factor);
  j["hn_mode"] = c.hn_mode == HnMode::Sparse ? "sparse" : "dense";
  j["mu_eps"] = c.mu_eps;
  j["cf_grid"] = c.cf_grid.empty() ? default_cf_grid() : c.cf_grid;
  return j;
}

nlohmann::json to_json(const SimulationResult& r) {
  const auto& rep = r.report;
  nlohmann::json j;
  j["config"] = to_json(r.config);
  auto& m = j["moments"];
  m["count"] = rep.moments.count;
  m["mean"] = rep.moments.mean;
  m["mean_stderr"] = rep.moments.mean_stderr;
  m["variance"] = rep.moments.variance;
  m["variance_stderr"] = rep.moments.variance_stderr;
  m["skewness"] = rep.moments.skewness;
  auto& h = j["histogram"];
  h["lattice"] = rep.histogram.lattice;
  h["offset"] = rep.histogram.offset;
  h["edges"] = rep.histogram.edges;
  h["mass"] = rep.histogram.mass;
  auto& cf = j["empirical_cf"];
  cf["t"] = rep.cf.t;
  std::vector<double> re, im;
  for (const auto& z : rep.cf.value) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  cf["re"] = re;
  cf["im"] = im;
  cf["radius"] = rep.cf.radius;
  auto& ref = j["reference"];
  ref["description"] = rep.reference;
  put_optional(ref, "mean", rep.reference_mean);
  put_optional(ref, "variance", rep.reference_variance);
  put_optional(ref, "ks", rep.ks);
  put_optional(ref, "ks_radius", rep.ks_radius);
  put_optional(ref, "tv", rep.tv);
  put_optional(ref, "tv_radius", rep.tv_radius);
  put_optional(ref, "cf_max_deviation", rep.cf_max_deviation);
  return j;
}

nlohmann::json to_json(const CouplingReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["theta"] = r.theta;
  j["reps"] = r.reps;
  j["horizon"] = r.horizon;
  j["w_tail_bound"] = r.w_tail_bound;
  j["mean_abs_diff"] = r.mean_abs_diff;
  j["mean_abs_diff_stderr"] = r.mean_abs_diff_stderr;
  j["mean_sq_diff"] = r.mean_sq_diff;
  j["mean_sq_diff_stderr"] = r.mean_sq_diff_stderr;
  j["l1_rhs"] = r.l1_rhs;
  j["l2_rhs"] = r.l2_rhs;
  j["implied_c_l1"] = r.implied_c_l1;
  j["implied_c_l2"] = r.implied_c_l2;
  j["w_beyond"] = {{"bound", r.w_beyond_bound}, {"max_mean", r.w_beyond_max_mean}, {"holds", r.w_beyond_holds}};
  j["j_n"] = {{"frequency", r.j_frequency},
              {"exact", r.j_exact},
              {"chi_square", r.j_chi_square.statistic},
              {"dof", r.j_chi_square.dof},
              {"p_value", r.j_chi_square.p_value}};
  j["j_plus_k"] = {{"bound", r.jk_bound}, {"max_frequency", r.jk_max_frequency}, {"holds", r.jk_holds}};
  j["inequality_violations"] = r.inequality_violations;
  return j;
}

nlohmann::json to_json(const EnumerationReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["theta"] = r.theta;
  j["reps"] = r.reps;
  j["exact_mean"] = r.exact_mean;
  j["enumeration_mean"] = r.enumeration_mean;
  j["exact_variance"] = r.exact_variance;
  j["enumeration_variance"] = r.enumeration_variance;
  j["moments_agree"] = r.moments_agree();
  std::vector<double> values, probs;
  for (const auto& p : r.law) {
    values.push_back(p.value);
    probs.push_back(p.probability);
  }
  j["law"] = {{"values", values}, {"probabilities", probs}};
  j["tv"] = r.tv;
  j["tv_radius"] = r.tv_radius;
  j["tv_within_radius"] = r.tv_within_radius();
  return j;
}

std::string to_text(const nlohmann::json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  std::ostringstream os;
  for (const auto& [k, v] : rows) os << k << std::string(width - k.size() + 2, ' ') << v << '\n';
  return os.str();
}

std::vector<std::filesystem::path> write_plot_data(const SimulationResult& r,
                                                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  const auto& h = r.report.histogram;
  std::vector<double> centres;
  for (std::size_t b = 0; b + 1 < h.edges.size(); ++b) centres.push_back(0.5 * (h.edges[b] + h.edges[b + 1]));
  out.push_back(write_columns(dir / "histogram.dat", centres, h.mass));

  std::vector<double> xs = r.values, ys;
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 0; i < xs.size(); ++i)
    ys.push_back(static_cast<double>(i + 1) / static_cast<double>(xs.size()));
  out.push_back(write_columns(dir / "ecdf.dat", xs, ys));

  std::vector<double> re, im;
  for (const auto& z : r.report.cf.value) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  out.push_back(write_columns(dir / "cf_re.dat", r.report.cf.t, re));
  out.push_back(write_columns(dir / "cf_im.dat", r.report.cf.t, im));
  return out;
}

}  // namespace permspec
