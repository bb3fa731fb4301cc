#pragma once

// One function per CLI subcommand. Each takes parsed inputs and returns a
// Report; argument parsing and file output stay in the caller.

#include "excon/config.hpp"
#include "excon/dataset.hpp"
#include "excon/matching.hpp"
#include "excon/report.hpp"
#include "excon/simulator.hpp"
#include "excon/tests_core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace excon {

enum class TestMethod { kT1, kT2, kCombined };
enum class TippingMethod { kPooled, kCombined, kBoth };

TestMethod parse_test_method(const std::string& name);
TippingMethod parse_tipping_method(const std::string& name);
Direction parse_direction(const std::string& name);
const char* direction_name(Direction d);

/// Directed single-statistic test. Statistics are oriented so that large
/// values favour the alternative; two-sided runs both orientations at alpha/2.
struct DirectedResult {
    double statistic = 0.0;
    double p = 1.0;
    bool reject = false;
    Direction side = Direction::kGreater;
};

DirectedResult directed_single_test(const TrialSummaries& data, TestMethod method, const TestConfig& config);

Report run_test(const TrialDataset& data, const std::string& data_label, TestMethod method, const TestConfig& config);

Report run_tipping(const TrialDataset& data, const std::string& data_label, TippingMethod method,
                   const TestConfig& config);

/// Closed-form table. type1 only changes the report title.
Report run_power_table(const ScenarioConfig& config, const std::string& config_label, bool type1);

/// Monte Carlo rejection rates for every scenario and column of config.
/// Every row uses the same seed, so rows share random numbers where sizes agree.
Report run_simulate(const ScenarioConfig& config, const std::string& config_label, std::uint64_t seed,
                    std::size_t reps, unsigned threads);

Report run_subsample(const TrialDataset& data, const std::string& data_label, const std::vector<PairRecord>& pairs,
                     const std::string& pairs_label, const SubsampleOptions& options);

struct MatchRun {
    Report report;
    std::vector<PairRecord> pairs;
};

MatchRun run_match(const TrialDataset& data, const std::string& data_label, const MatchOptions& options);

Report run_balance(const TrialDataset& data, const std::string& data_label, const std::vector<PairRecord>& pairs,
                   const std::string& pairs_label);

/// covariates empty means every covariate in the dataset.
Report run_benchmark(const TrialDataset& data, const std::string& data_label, const std::vector<std::string>& covariates,
                     const MatchOptions& options);

} // namespace excon
