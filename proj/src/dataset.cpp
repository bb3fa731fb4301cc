#include "excon/dataset.hpp"

#include "excon/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace excon {

namespace {

const std::vector<std::string> kRequiredColumns = {"subject_id", "source", "arm", "outcome"};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Comma-separated fields; double quotes group commas and "" escapes a quote.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(field));
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(trim(field));
    return out;
}

[[noreturn]] void parse_error(const std::string& origin, std::size_t line, const std::string& what) {
    fail(ErrorCode::kParse, origin + ":" + std::to_string(line) + ": " + what);
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) return true;
    }
    return false;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
    return in;
}

} // namespace

TrialDataset parse_dataset(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t line_no = 0;
    if (!next_data_line(in, line, line_no)) parse_error(origin, 1, "empty file (expected a header)");

    std::vector<std::string> header = split_csv(line);
    if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
    if (header.size() < kRequiredColumns.size() ||
        !std::equal(kRequiredColumns.begin(), kRequiredColumns.end(), header.begin()))
        parse_error(origin, line_no, "header must start with subject_id,source,arm,outcome");

    TrialDataset data;
    data.covariate_names.assign(header.begin() + 4, header.end());
    std::unordered_set<std::string> seen_names;
    for (const std::string& name : data.covariate_names)
        if (name.empty() || !seen_names.insert(name).second)
            parse_error(origin, line_no, "covariate names must be nonempty and unique");

    std::unordered_set<std::string> ids;
    while (next_data_line(in, line, line_no)) {
        const std::vector<std::string> f = split_csv(line);
        if (f.size() != header.size())
            parse_error(origin, line_no, "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(f.size()));
        TrialRecord r;
        r.subject_id = f[0];
        if (r.subject_id.empty()) parse_error(origin, line_no, "empty subject_id");
        if (!ids.insert(r.subject_id).second) parse_error(origin, line_no, "duplicate subject_id '" + r.subject_id + "'");

        const std::string source = lower(f[1]);
        if (source == "internal") r.source = Source::kInternal;
        else if (source == "external") r.source = Source::kExternal;
        else parse_error(origin, line_no, "source must be internal or external, got '" + f[1] + "'");

        const std::string arm = lower(f[2]);
        if (arm == "treated") r.arm = Arm::kTreated;
        else if (arm == "control") r.arm = Arm::kControl;
        else parse_error(origin, line_no, "arm must be treated or control, got '" + f[2] + "'");

        if (r.source == Source::kExternal && r.arm == Arm::kTreated)
            parse_error(origin, line_no, "external subject '" + r.subject_id + "' has arm=treated (external records must be controls)");

        if (!parse_double(f[3], r.outcome) || !std::isfinite(r.outcome))
            parse_error(origin, line_no, "outcome '" + f[3] + "' is not a finite number");

        for (std::size_t j = 4; j < f.size(); ++j) {
            double v = 0.0;
            if (!parse_double(f[j], v) || !std::isfinite(v))
                parse_error(origin, line_no, "covariate " + header[j] + " value '" + f[j] + "' is missing or not numeric");
            r.covariates.push_back(v);
        }
        data.records.push_back(std::move(r));
    }
    if (data.records.empty()) parse_error(origin, line_no, "no data rows");
    return data;
}

TrialDataset load_dataset(const std::string& path) {
    std::ifstream in = open_input(path);
    return parse_dataset(in, path);
}

ArmOutcomes arm_outcomes(const TrialDataset& data) {
    ArmOutcomes out;
    for (const TrialRecord& r : data.records) {
        if (r.source == Source::kExternal) out.external.push_back(r.outcome);
        else if (r.arm == Arm::kTreated) out.treated.push_back(r.outcome);
        else out.internal.push_back(r.outcome);
    }
    return out;
}

DatasetSummaries summarize_arms(const TrialDataset& data) {
    const ArmOutcomes o = arm_outcomes(data);
    auto arm = [](const std::vector<double>& v, const char* name) {
        if (v.size() < 2) fail(ErrorCode::kInsufficientData, std::string("dataset has fewer than 2 ") + name + " subjects");
        return summarize(v);
    };
    return {arm(o.treated, "internal treated"), arm(o.internal, "internal control"), arm(o.external, "external control")};
}

MatchingInput matching_input(const TrialDataset& data) {
    if (data.covariate_names.empty()) fail(ErrorCode::kData, "matching needs at least one covariate column");
    MatchingInput out;
    for (std::size_t i = 0; i < data.records.size(); ++i)
        if (data.records[i].source == Source::kInternal && data.records[i].arm == Arm::kTreated) out.record_index.push_back(i);
    const std::size_t n_treated = out.record_index.size();
    for (std::size_t i = 0; i < data.records.size(); ++i)
        if (data.records[i].source == Source::kExternal) out.record_index.push_back(i);

    const auto p = static_cast<Eigen::Index>(data.covariate_names.size());
    out.matrix.names = data.covariate_names;
    out.matrix.values.resize(static_cast<Eigen::Index>(out.record_index.size()), p);
    for (std::size_t k = 0; k < out.record_index.size(); ++k) {
        const TrialRecord& r = data.records[out.record_index[k]];
        for (Eigen::Index j = 0; j < p; ++j) out.matrix.values(static_cast<Eigen::Index>(k), j) = r.covariates[static_cast<std::size_t>(j)];
        out.matrix.group.push_back(k < n_treated ? Group::kRctTreated : Group::kExternalPool);
    }
    return out;
}

std::vector<PairRecord> parse_pairs(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t line_no = 0;
    if (!next_data_line(in, line, line_no)) parse_error(origin, 1, "empty pairs file");
    const auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "treated_id" || header[1] != "external_id")
        parse_error(origin, line_no, "pairs header must start with treated_id,external_id");
    std::vector<PairRecord> out;
    std::unordered_set<std::string> used;
    while (next_data_line(in, line, line_no)) {
        const auto f = split_csv(line);
        if (f.size() != header.size()) parse_error(origin, line_no, "wrong number of fields");
        PairRecord p{f[0], f[1], 0.0};
        if (header.size() > 2 && !parse_double(f[2], p.distance)) parse_error(origin, line_no, "distance is not numeric");
        if (!used.insert(p.external_id).second) parse_error(origin, line_no, "external '" + p.external_id + "' matched twice");
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<PairRecord> load_pairs(const std::string& path) {
    std::ifstream in = open_input(path);
    return parse_pairs(in, path);
}

void write_pairs(std::ostream& out, const std::vector<PairRecord>& pairs) {
    out << "treated_id,external_id,distance\n";
    char buf[64];
    for (const PairRecord& p : pairs) {
        std::snprintf(buf, sizeof buf, "%.17g", p.distance);
        out << p.treated_id << ',' << p.external_id << ',' << buf << '\n';
    }
}

TrialDataset restrict_to_matched(const TrialDataset& data, const std::vector<PairRecord>& pairs) {
    std::unordered_set<std::string> keep;
    for (const PairRecord& p : pairs) keep.insert(p.external_id);
    std::unordered_set<std::string> present;
    TrialDataset out;
    out.covariate_names = data.covariate_names;
    for (const TrialRecord& r : data.records) {
        if (r.source == Source::kExternal && !keep.count(r.subject_id)) continue;
        if (r.source == Source::kExternal) present.insert(r.subject_id);
        out.records.push_back(r);
    }
    for (const PairRecord& p : pairs)
        if (!present.count(p.external_id))
            fail(ErrorCode::kData, "pairs reference external subject '" + p.external_id + "' not in the dataset");
    return out;
}

SubsampleData subsample_data(const TrialDataset& data, const std::vector<PairRecord>& pairs) {
    std::unordered_map<std::string, double> external_outcome;
    for (const TrialRecord& r : data.records)
        if (r.source == Source::kExternal) external_outcome[r.subject_id] = r.outcome;
    std::unordered_map<std::string, std::vector<double>> matched;
    for (const PairRecord& p : pairs) {
        const auto it = external_outcome.find(p.external_id);
        if (it == external_outcome.end())
            fail(ErrorCode::kData, "pairs reference external subject '" + p.external_id + "' not in the dataset");
        matched[p.treated_id].push_back(it->second);
    }
    SubsampleData out;
    for (const TrialRecord& r : data.records) {
        if (r.source != Source::kInternal) continue;
        if (r.arm == Arm::kTreated) {
            out.treated.push_back(r.outcome);
            const auto it = matched.find(r.subject_id);
            out.matched_external.push_back(it == matched.end() ? std::vector<double>{} : it->second);
        } else {
            out.control.push_back(r.outcome);
        }
    }
    return out;
}

} // namespace excon
