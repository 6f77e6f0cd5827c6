#pragma once

// Command-line front end. Exit codes: 0 success, 1 failed property check,
// 2 invalid configuration or arguments, 3 numerical-domain error.

#include "rigidlab/geometry_fields.hpp"
#include "rigidlab/map_fields.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace rigidlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;

int run_cli(int argc, char** argv);
/// args excludes the program name.
int run_cli(const std::vector<std::string>& args);

// Config helpers, shared with the tests.

/// {"lower": [..], "upper": [..], "nodes": n | [..]}; missing keys fall back to `fallback`.
ChartGrid grid_from_config(const nlohmann::json& j, const ChartGrid& fallback);
/// "euclidean" or {"tag": ..., "radius", "n", "epsilon", "sigma"}.
BuiltinMetric metric_spec_from_config(const nlohmann::json& j);
ChartPolicy parse_chart_policy(const std::string& name);

}  // namespace rigidlab
