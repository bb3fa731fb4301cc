#pragma once

// Trial data ingestion. CSV layout:
//
//   subject_id,source,arm,outcome,<covariate>...
//
// source is internal|external, arm is treated|control (both case-insensitive).
// External rows must be controls. Matched pairs files use
//
//   treated_id,external_id,distance

#include "excon/matching.hpp"
#include "excon/simulator.hpp"
#include "excon/tests_core.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace excon {

enum class Source { kInternal, kExternal };
enum class Arm { kTreated, kControl };

struct TrialRecord {
    std::string subject_id;
    Source source = Source::kInternal;
    Arm arm = Arm::kControl;
    double outcome = 0.0;
    std::vector<double> covariates;
};

struct TrialDataset {
    std::vector<std::string> covariate_names;
    std::vector<TrialRecord> records;
};

TrialDataset parse_dataset(std::istream& in, const std::string& origin = "<input>");
TrialDataset load_dataset(const std::string& path);

struct ArmOutcomes {
    std::vector<double> treated;
    std::vector<double> internal;
    std::vector<double> external;
};

ArmOutcomes arm_outcomes(const TrialDataset& data);

struct DatasetSummaries {
    ArmSummary treated;
    ArmSummary internal;
    ArmSummary external;
};

DatasetSummaries summarize_arms(const TrialDataset& data);

/// Internal treated rows followed by every external row, in file order.
struct MatchingInput {
    CovariateMatrix matrix;
    std::vector<std::size_t> record_index;  // matrix row -> dataset record
};

MatchingInput matching_input(const TrialDataset& data);

struct PairRecord {
    std::string treated_id;
    std::string external_id;
    double distance = 0.0;
};

std::vector<PairRecord> parse_pairs(std::istream& in, const std::string& origin = "<input>");
std::vector<PairRecord> load_pairs(const std::string& path);
void write_pairs(std::ostream& out, const std::vector<PairRecord>& pairs);

/// Keeps internal records and only those external records that appear in pairs.
TrialDataset restrict_to_matched(const TrialDataset& data, const std::vector<PairRecord>& pairs);

/// Resampling input: RCT outcomes and, per treated subject, its matched external outcomes.
SubsampleData subsample_data(const TrialDataset& data, const std::vector<PairRecord>& pairs);

} // namespace excon
