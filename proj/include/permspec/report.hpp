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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "permspec/funcs.hpp"
#include "permspec/montecarlo.hpp"

namespace permspec {

/// %.17g; every floating-point number the tools print goes through this.
std::string format_double(double x);

/// Resolved function metadata: the canonical text and the endpoint
/// convention in force.
nlohmann::json function_metadata(const FunctionSpec& f);

nlohmann::json to_json(const SimulationConfig& c);
/// Config echo and report; raw replicate values are left out.
nlohmann::json to_json(const SimulationResult& r);
nlohmann::json to_json(const CouplingReport& r);
nlohmann::json to_json(const EnumerationReport& r);

/// Aligned "key  value" lines with dotted paths for nested objects and
/// arrays printed inline.
std::string to_text(const nlohmann::json& j);

/// Writes histogram.dat, ecdf.dat, cf_re.dat and cf_im.dat (two columns,
/// "x y") into `dir`, creating it if needed. Returns the paths written.
std::vector<std::filesystem::path> write_plot_data(const SimulationResult& r,
                                                   const std::filesystem::path& dir);

}  // namespace permspec
