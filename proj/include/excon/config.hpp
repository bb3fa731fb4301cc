#pragma once

// Flat key = value scenario files for the table and simulation commands.
//
//   # comments start with '#'
//   columns = t1, t2, tc, naive
//   reps = 10000
//   seed = 20240101
//   theta0 = 0
//   delta_star = 0.2
//   ratio = 2:1:3          # n1 : n0 : ne
//   w = 0.25
//
//   [grid]
//   theta_star = 0
//   delta0 = 0.2, 0.3
//   n1 = 50, 100
//
// Keys before the first [grid] are defaults; each [grid] block starts from
// them and may override any scenario key. columns, reps and seed are global.
// A file without [grid] blocks is a single block.

#include "excon/power.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace excon {

struct ScenarioConfig {
    std::vector<DesignGrid> blocks;
    std::vector<PowerColumn> columns;
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> seed;
};

ScenarioConfig parse_config(std::istream& in, const std::string& origin = "<config>");
ScenarioConfig load_config(const std::string& path);

/// Canonical text that parse_config reads back to an identical config.
std::string to_config_text(const ScenarioConfig& config);

/// Every scenario of every block, in block order.
std::vector<PowerScenario> expand(const ScenarioConfig& config);

/// The built-in power grid with columns t1, t2, t2opt, tc, tcopt.
ScenarioConfig power_table_config();

/// The built-in type I error grid with columns t1, t2, tc, naive.
ScenarioConfig type1_table_config();

} // namespace excon
