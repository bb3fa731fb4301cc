#include "excon/commands.hpp"

#include "excon/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

namespace excon {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

const char* method_name(TestMethod m) {
    switch (m) {
    case TestMethod::kT1: return "t1";
    case TestMethod::kT2: return "t2";
    case TestMethod::kCombined: return "combined";
    }
    return "?";
}

const char* tipping_method_name(TippingMethod m) {
    switch (m) {
    case TippingMethod::kPooled: return "pooled";
    case TippingMethod::kCombined: return "combined";
    case TippingMethod::kBoth: return "both";
    }
    return "?";
}

Cell weight_cell(const std::optional<double>& w) { return w ? Cell::exact(*w) : Cell::str("auto"); }

void echo_test_config(Report& r, const TestConfig& c) {
    r.inputs.emplace_back("direction", Cell::str(direction_name(c.direction)));
    r.inputs.emplace_back("alpha", Cell::exact(c.alpha));
    r.inputs.emplace_back("theta0", Cell::exact(c.theta0));
    r.inputs.emplace_back("w", weight_cell(c.w));
}

void add_arm_results(Report& r, const DatasetSummaries& s) {
    auto arm = [&](const char* name, const ArmSummary& a) {
        r.results.emplace_back(std::string("n_") + name, Cell::integer_value(static_cast<long long>(a.n)));
        r.results.emplace_back(std::string("mean_") + name, Cell::num(a.mean, 4));
        r.results.emplace_back(std::string("sd_") + name, Cell::num(std::sqrt(a.var), 4));
    };
    arm("treated", s.treated);
    arm("internal", s.internal);
    arm("external", s.external);
}

double one_sided_statistic(const TrialSummaries& d, TestMethod method, double w, double delta0) {
    if (method == TestMethod::kT1) return t1_statistic(d.treated, d.internal, d.theta0);
    return pooled_statistic(d.treated, d.internal, d.external, d.theta0, w, delta0);
}

Cell tipping_cell(const TippingValue& v) { return v.insensitive ? Cell::str("insensitive") : Cell::num(v.delta0, 4); }

Cell percent_se(double se) { return Cell::num(100.0 * se, 2); }

std::vector<std::string> scenario_columns() { return {"delta0", "n1", "n0", "ne", "theta_star"}; }

std::vector<Cell> scenario_cells(const PowerScenario& s) {
    return {Cell::num(s.delta0, 2), Cell::integer_value(static_cast<long long>(treated_count(s))),
            Cell::integer_value(static_cast<long long>(internal_count(s))),
            Cell::integer_value(static_cast<long long>(external_count(s))), Cell::num(s.theta_star, 2)};
}

std::string label_for(const ScenarioConfig& config, PowerColumn c) {
    const double w = config.blocks.front().w;
    const bool mixed = std::any_of(config.blocks.begin(), config.blocks.end(), [&](const DesignGrid& g) { return g.w != w; });
    if (!mixed) return column_label(c, w);
    // Blocks disagree on w, so the header names it generically.
    switch (c) {
    case PowerColumn::kT2: return "T2(w)";
    case PowerColumn::kTc: return "Tc(w)";
    case PowerColumn::kNaive: return "naiveTc(w)";
    default: return column_label(c, w);
    }
}

void echo_config(Report& r, const ScenarioConfig& config, const std::string& label) {
    r.inputs.emplace_back("config", Cell::str(label));
    r.config_text = to_config_text(config);
}

SimTest sim_test_for(PowerColumn c, const PowerScenario& s) {
    switch (c) {
    case PowerColumn::kT1: return {SimTestKind::kT1, 1.0, 0.0};
    case PowerColumn::kT2: return {SimTestKind::kT2, s.w, s.delta0};
    case PowerColumn::kT2Opt: return {SimTestKind::kT2, optimal_w(s), s.delta0};
    case PowerColumn::kTc: return {SimTestKind::kTc, s.w, s.delta0};
    case PowerColumn::kTcOpt: return {SimTestKind::kTc, optimal_w(s), s.delta0};
    case PowerColumn::kNaive: return {SimTestKind::kNaive, s.w, s.delta0};
    }
    return {};
}

MatchingInput checked_matching_input(const TrialDataset& data) {
    MatchingInput in = matching_input(data);
    validate(in.matrix);
    return in;
}

std::vector<double> column_means(const Eigen::MatrixXd& m) {
    std::vector<double> out;
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m.rows() ? m.col(j).mean() : 0.0);
    return out;
}

Eigen::MatrixXd rows_of(const TrialDataset& data, const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(data.covariate_names.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t j = 0; j < data.covariate_names.size(); ++j)
            m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = data.records[idx[k]].covariates[j];
    return m;
}

} // namespace

TestMethod parse_test_method(const std::string& name) {
    const std::string n = lower(name);
    if (n == "t1") return TestMethod::kT1;
    if (n == "t2") return TestMethod::kT2;
    if (n == "combined" || n == "tc") return TestMethod::kCombined;
    fail(ErrorCode::kInvalidArgument, "unknown test method '" + name + "' (expected t1, t2 or combined)");
}

TippingMethod parse_tipping_method(const std::string& name) {
    const std::string n = lower(name);
    if (n == "pooled" || n == "t2") return TippingMethod::kPooled;
    if (n == "combined" || n == "tc") return TippingMethod::kCombined;
    if (n == "both") return TippingMethod::kBoth;
    fail(ErrorCode::kInvalidArgument, "unknown tipping method '" + name + "' (expected pooled, combined or both)");
}

Direction parse_direction(const std::string& name) {
    const std::string n = lower(name);
    if (n == "greater") return Direction::kGreater;
    if (n == "less") return Direction::kLess;
    if (n == "two-sided") return Direction::kTwoSided;
    fail(ErrorCode::kInvalidArgument, "unknown direction '" + name + "' (expected greater, less or two-sided)");
}

const char* direction_name(Direction d) {
    switch (d) {
    case Direction::kGreater: return "greater";
    case Direction::kLess: return "less";
    case Direction::kTwoSided: return "two-sided";
    }
    return "?";
}

DirectedResult directed_single_test(const TrialSummaries& data, TestMethod method, const TestConfig& config) {
    validate(config);
    if (method == TestMethod::kCombined) fail(ErrorCode::kInvalidArgument, "directed_single_test: use combined_test");
    const double w = config.w.value_or(default_weight(data.internal, data.external));
    auto side = [&](Direction d, double alpha) {
        const TrialSummaries o = d == Direction::kLess ? negate_transform(data) : data;
        const double stat = one_sided_statistic(o, method, w, config.delta0);
        const SingleTestResult r = single_test(stat, alpha);
        return DirectedResult{stat, r.p, r.reject, d};
    };
    if (config.direction != Direction::kTwoSided) return side(config.direction, config.alpha);
    const DirectedResult up = side(Direction::kGreater, 0.5 * config.alpha);
    const DirectedResult down = side(Direction::kLess, 0.5 * config.alpha);
    DirectedResult out = down.p < up.p ? down : up;
    out.p = std::min(1.0, 2.0 * out.p);
    out.reject = up.reject || down.reject;
    return out;
}

Report run_test(const TrialDataset& data, const std::string& data_label, TestMethod method, const TestConfig& config) {
    validate(config);
    Report r;
    r.command = "test";
    r.inputs.emplace_back("data", Cell::str(data_label));
    r.inputs.emplace_back("method", Cell::str(method_name(method)));
    echo_test_config(r, config);
    if (method != TestMethod::kT1) r.inputs.emplace_back("delta0", Cell::exact(config.delta0));

    const DatasetSummaries s = summarize_arms(data);
    add_arm_results(r, s);
    const double w = config.w.value_or(default_weight(s.internal, s.external));

    if (method == TestMethod::kCombined) {
        const TestOutcome o = combined_test(s.treated, s.internal, s.external, config);
        r.results.emplace_back("w_used", Cell::num(o.w_used, 4));
        r.results.emplace_back("t1", Cell::num(o.t1, 4));
        r.results.emplace_back("t2_adj", Cell::num(o.t2_adj, 4));
        r.results.emplace_back("rho_hat", Cell::num(o.rho_hat, 4));
        r.results.emplace_back("critical_value", Cell::num(o.critical_value, 4));
        r.results.emplace_back("adjusted_p", Cell::sci(o.adjusted_p));
        r.results.emplace_back("reject", Cell::boolean(o.reject));
        if (config.direction == Direction::kTwoSided) r.results.emplace_back("side", Cell::str(direction_name(o.side)));
        if (config.direction != Direction::kGreater)
            r.notes.push_back("statistics are oriented so that large values favour the alternative");
        return r;
    }

    const DirectedResult d = directed_single_test({s.treated, s.internal, s.external, config.theta0}, method, config);
    if (method == TestMethod::kT2) r.results.emplace_back("w_used", Cell::num(w, 4));
    r.results.emplace_back("statistic", Cell::num(d.statistic, 4));
    r.results.emplace_back("p_value", Cell::sci(d.p));
    r.results.emplace_back("reject", Cell::boolean(d.reject));
    if (config.direction == Direction::kTwoSided) r.results.emplace_back("side", Cell::str(direction_name(d.side)));
    if (config.direction != Direction::kGreater)
        r.notes.push_back("statistics are oriented so that large values favour the alternative");
    return r;
}

Report run_tipping(const TrialDataset& data, const std::string& data_label, TippingMethod method,
                   const TestConfig& config) {
    Report r;
    r.command = "tipping";
    r.inputs.emplace_back("data", Cell::str(data_label));
    r.inputs.emplace_back("method", Cell::str(tipping_method_name(method)));
    echo_test_config(r, config);

    const DatasetSummaries s = summarize_arms(data);
    const TippingResult t = tipping_point(s.treated, s.internal, s.external, config);
    const double w = config.w.value_or(default_weight(s.internal, s.external));
    TestConfig at_zero = config;
    at_zero.delta0 = 0.0;
    const TestOutcome o = combined_test(s.treated, s.internal, s.external, at_zero);

    r.results.emplace_back("w_used", Cell::num(w, 4));
    r.results.emplace_back("t1", Cell::num(o.t1, 4));
    r.results.emplace_back("t2", Cell::num(o.t2_adj, 4));
    r.results.emplace_back("rho_hat", Cell::num(o.rho_hat, 4));
    if (method != TippingMethod::kCombined) r.results.emplace_back("tipping_pooled", tipping_cell(t.pooled));
    if (method != TippingMethod::kPooled) {
        r.results.emplace_back("tipping_combined", tipping_cell(t.combined));
        r.results.emplace_back("plateau_p", Cell::sci(t.plateau_p));
    }
    if (method != TippingMethod::kPooled && t.combined.insensitive)
        r.notes.push_back("the combined test rejects on T1 alone, so no value of delta0 overturns it");
    return r;
}

Report run_power_table(const ScenarioConfig& config, const std::string& config_label, bool type1) {
    Report r;
    r.command = type1 ? "type1-table" : "power-table";
    echo_config(r, config, config_label);
    const std::vector<PowerScenario> grid = expand(config);
    const PowerTable table = generate_table(grid, config.columns);

    ReportTable out;
    out.name = type1 ? "theoretical type I error (%)" : "theoretical power (%)";
    out.columns = scenario_columns();
    for (PowerColumn c : config.columns) out.columns.push_back(label_for(config, c));
    for (const PowerRow& row : table.rows) {
        std::vector<Cell> cells = scenario_cells(row.scenario);
        for (double v : row.values) cells.push_back(Cell::percent(v));
        out.rows.push_back(std::move(cells));
    }
    r.results.emplace_back("rows", Cell::integer_value(static_cast<long long>(out.rows.size())));
    r.tables.push_back(std::move(out));
    return r;
}

Report run_simulate(const ScenarioConfig& config, const std::string& config_label, std::uint64_t seed,
                    std::size_t reps, unsigned threads) {
    if (reps == 0) fail(ErrorCode::kInvalidArgument, "simulate needs reps >= 1");
    ScenarioConfig echoed = config;
    echoed.seed = seed;
    echoed.reps = reps;
    Report r;
    r.command = "simulate";
    echo_config(r, echoed, config_label);
    r.inputs.emplace_back("seed", Cell::integer_value(static_cast<long long>(seed)));
    r.inputs.emplace_back("reps", Cell::integer_value(static_cast<long long>(reps)));

    ReportTable out;
    out.name = "empirical rejection rate (%) with Monte Carlo standard error";
    out.columns = scenario_columns();
    for (PowerColumn c : config.columns) {
        const std::string label = label_for(config, c);
        out.columns.push_back(label);
        out.columns.push_back(label + " mc_se");
    }
    for (const PowerScenario& s : expand(config)) {
        SimSpec spec;
        spec.scenario = s;
        spec.n_reps = reps;
        spec.seed = seed;
        for (PowerColumn c : config.columns) spec.tests.push_back(sim_test_for(c, s));
        const auto est = estimate_rejection(spec, threads);
        std::vector<Cell> cells = scenario_cells(s);
        for (const RejectionEstimate& e : est) {
            cells.push_back(Cell::percent(e.rate));
            cells.push_back(percent_se(e.mc_se));
        }
        out.rows.push_back(std::move(cells));
    }
    r.results.emplace_back("rows", Cell::integer_value(static_cast<long long>(out.rows.size())));
    r.tables.push_back(std::move(out));
    return r;
}

Report run_subsample(const TrialDataset& data, const std::string& data_label, const std::vector<PairRecord>& pairs,
                     const std::string& pairs_label, const SubsampleOptions& options) {
    Report r;
    r.command = "simulate";
    r.inputs.emplace_back("data", Cell::str(data_label));
    r.inputs.emplace_back("pairs", Cell::str(pairs_label));
    r.inputs.emplace_back("n_sub", Cell::integer_value(static_cast<long long>(options.n_sub)));
    r.inputs.emplace_back("treated_ratio", Cell::exact(options.treated_ratio));
    r.inputs.emplace_back("reps", Cell::integer_value(static_cast<long long>(options.n_reps)));
    r.inputs.emplace_back("seed", Cell::integer_value(static_cast<long long>(options.seed)));
    r.inputs.emplace_back("direction", Cell::str(direction_name(options.direction)));
    r.inputs.emplace_back("alpha", Cell::exact(options.alpha));
    r.inputs.emplace_back("theta0", Cell::exact(options.theta0));
    r.inputs.emplace_back("w", weight_cell(options.w));

    const SubsampleResult res = subsample_power_study(subsample_data(data, pairs), options);
    ReportTable out;
    out.name = "subsample rejection rate (%) with Monte Carlo standard error";
    out.columns = {"delta0", "T1", "T1 mc_se", "T2", "T2 mc_se", "Tc", "Tc mc_se"};
    for (std::size_t j = 0; j < res.delta0s.size(); ++j) {
        out.rows.push_back({Cell::num(res.delta0s[j], 2), Cell::percent(res.t1.rate), percent_se(res.t1.mc_se),
                            Cell::percent(res.t2[j].rate), percent_se(res.t2[j].mc_se), Cell::percent(res.tc[j].rate),
                            percent_se(res.tc[j].mc_se)});
    }
    r.results.emplace_back("redraws", Cell::integer_value(static_cast<long long>(res.redraws)));
    r.tables.push_back(std::move(out));
    return r;
}

MatchRun run_match(const TrialDataset& data, const std::string& data_label, const MatchOptions& options) {
    const MatchingInput in = checked_matching_input(data);
    const PropensityModel model = fit_propensity(in.matrix);
    const DistanceMatrix raw = robust_mahalanobis(in.matrix);
    const MatchResult m = match_pipeline(in.matrix, options);

    MatchRun run;
    Report& r = run.report;
    r.command = "match";
    r.inputs.emplace_back("data", Cell::str(data_label));
    r.inputs.emplace_back("caliper_sd", Cell::exact(options.caliper_sd));

    const auto treated_rows = rows_in(in.matrix, Group::kRctTreated);
    const auto external_rows = rows_in(in.matrix, Group::kExternalPool);
    r.results.emplace_back("n_treated", Cell::integer_value(static_cast<long long>(treated_rows.size())));
    r.results.emplace_back("n_external_pool", Cell::integer_value(static_cast<long long>(external_rows.size())));
    r.results.emplace_back("n_pairs", Cell::integer_value(static_cast<long long>(m.pairs.size())));
    r.results.emplace_back("caliper_violations", Cell::integer_value(static_cast<long long>(m.caliper_violations)));
    r.results.emplace_back("propensity_converged", Cell::boolean(model.converged));
    r.results.emplace_back("propensity_iterations", Cell::integer_value(static_cast<long long>(model.n_iterations)));

    ReportTable coef;
    coef.name = "propensity model (logit)";
    coef.columns = {"term", "coefficient", "std_error"};
    coef.rows.push_back({Cell::str("(intercept)"), Cell::num(model.intercept, 4), Cell::null()});
    for (std::size_t j = 0; j < in.matrix.names.size(); ++j)
        coef.rows.push_back({Cell::str(in.matrix.names[j]), Cell::num(model.coefficients[j], 4), Cell::num(model.std_errors[j], 4)});
    r.tables.push_back(std::move(coef));

    std::vector<Eigen::Index> t_idx, e_idx;
    for (std::size_t k : treated_rows) t_idx.push_back(static_cast<Eigen::Index>(k));
    for (std::size_t k : external_rows) e_idx.push_back(static_cast<Eigen::Index>(k));
    const auto before = standardized_mean_difference(in.matrix.values(t_idx, Eigen::all), in.matrix.values(e_idx, Eigen::all));
    ReportTable balance;
    balance.name = "standardized mean differences (treated vs external)";
    balance.columns = {"covariate", "smd_before", "smd_after"};
    for (std::size_t j = 0; j < in.matrix.names.size(); ++j)
        balance.rows.push_back({Cell::str(in.matrix.names[j]), Cell::num(before[j], 2), Cell::num(m.balance[j], 2)});
    r.tables.push_back(std::move(balance));

    std::unordered_map<std::size_t, Eigen::Index> ext_col;
    for (std::size_t c = 0; c < raw.external_rows.size(); ++c) ext_col[raw.external_rows[c]] = static_cast<Eigen::Index>(c);
    double total = 0.0;
    ReportTable pairs;
    pairs.name = "matched pairs";
    pairs.columns = {"treated_id", "external_id", "distance", "within_caliper"};
    for (std::size_t k = 0; k < m.pairs.size(); ++k) {
        const MatchPair& p = m.pairs[k];
        const double d = raw.values(static_cast<Eigen::Index>(k), ext_col.at(p.external_row));
        const PairRecord rec{data.records[in.record_index[p.treated_row]].subject_id,
                             data.records[in.record_index[p.external_row]].subject_id, d};
        pairs.rows.push_back({Cell::str(rec.treated_id), Cell::str(rec.external_id), Cell::num(d, 4),
                              Cell::boolean(p.distance == d)});
        run.pairs.push_back(rec);
        total += d;
    }
    r.results.emplace_back("total_distance", Cell::num(total, 4));
    r.tables.push_back(std::move(pairs));
    return run;
}

Report run_balance(const TrialDataset& data, const std::string& data_label, const std::vector<PairRecord>& pairs,
                   const std::string& pairs_label) {
    if (data.covariate_names.empty()) fail(ErrorCode::kData, "balance needs at least one covariate column");
    Report r;
    r.command = "balance";
    r.inputs.emplace_back("data", Cell::str(data_label));
    r.inputs.emplace_back("pairs", Cell::str(pairs_label));

    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < data.records.size(); ++i) by_id[data.records[i].subject_id] = i;
    std::vector<std::size_t> treated, internal, external_all, external_matched;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const TrialRecord& rec = data.records[i];
        if (rec.source == Source::kExternal) external_all.push_back(i);
        else if (rec.arm == Arm::kTreated) treated.push_back(i);
        else internal.push_back(i);
    }
    for (const PairRecord& p : pairs) {
        const auto t = by_id.find(p.treated_id);
        const auto e = by_id.find(p.external_id);
        if (t == by_id.end() || data.records[t->second].source != Source::kInternal || data.records[t->second].arm != Arm::kTreated)
            fail(ErrorCode::kData, "pairs: '" + p.treated_id + "' is not an internal treated subject");
        if (e == by_id.end() || data.records[e->second].source != Source::kExternal)
            fail(ErrorCode::kData, "pairs: '" + p.external_id + "' is not an external subject");
        external_matched.push_back(e->second);
    }

    const Eigen::MatrixXd xt = rows_of(data, treated);
    const Eigen::MatrixXd xi = rows_of(data, internal);
    const Eigen::MatrixXd xa = rows_of(data, external_all);
    const Eigen::MatrixXd xm = rows_of(data, external_matched);
    const auto smd_internal = standardized_mean_difference(xt, xi);
    const auto smd_all = standardized_mean_difference(xt, xa);
    const auto smd_matched = standardized_mean_difference(xt, xm);
    const auto mt = column_means(xt), mi = column_means(xi), ma = column_means(xa), mm = column_means(xm);

    r.results.emplace_back("n_treated", Cell::integer_value(static_cast<long long>(treated.size())));
    r.results.emplace_back("n_internal", Cell::integer_value(static_cast<long long>(internal.size())));
    r.results.emplace_back("n_external_pool", Cell::integer_value(static_cast<long long>(external_all.size())));
    r.results.emplace_back("n_external_matched", Cell::integer_value(static_cast<long long>(external_matched.size())));

    ReportTable t;
    t.name = "covariate balance (means and SMD against internal treated)";
    t.columns = {"covariate", "mean_treated", "mean_internal", "mean_external_matched", "mean_external_pool",
                 "smd_internal", "smd_matched", "smd_pool"};
    for (std::size_t j = 0; j < data.covariate_names.size(); ++j)
        t.rows.push_back({Cell::str(data.covariate_names[j]), Cell::num(mt[j], 3), Cell::num(mi[j], 3), Cell::num(mm[j], 3),
                          Cell::num(ma[j], 3), Cell::num(smd_internal[j], 2), Cell::num(smd_matched[j], 2),
                          Cell::num(smd_all[j], 2)});
    r.tables.push_back(std::move(t));
    return r;
}

Report run_benchmark(const TrialDataset& data, const std::string& data_label, const std::vector<std::string>& covariates,
                     const MatchOptions& options) {
    const MatchingInput in = checked_matching_input(data);
    const std::vector<std::string> names = covariates.empty() ? data.covariate_names : covariates;
    std::vector<double> outcomes;
    for (std::size_t idx : in.record_index) outcomes.push_back(data.records[idx].outcome);
    const DatasetSummaries s = summarize_arms(data);
    const auto entries = omit_one_benchmark(in.matrix, outcomes, s.internal.mean, names, options);

    Report r;
    r.command = "benchmark-omit";
    r.inputs.emplace_back("data", Cell::str(data_label));
    r.inputs.emplace_back("caliper_sd", Cell::exact(options.caliper_sd));

    std::vector<std::size_t> order(entries.size() - 1);
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k + 1;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(entries[a].bias) > std::abs(entries[b].bias); });
    std::vector<std::size_t> rank(entries.size(), 0);
    for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k + 1;

    r.results.emplace_back("internal_control_mean", Cell::num(s.internal.mean, 4));
    r.results.emplace_back("baseline_difference", Cell::num(entries[0].bias, 4));
    if (!order.empty()) r.results.emplace_back("largest_omission", Cell::str(entries[order[0]].omitted));

    ReportTable t;
    t.name = "internal control mean minus matched external mean, omitting one covariate";
    t.columns = {"omitted", "difference", "change", "rank"};
    for (std::size_t k = 0; k < entries.size(); ++k) {
        t.rows.push_back({Cell::str(k == 0 ? "(none)" : entries[k].omitted), Cell::num(entries[k].bias, 4),
                          Cell::num(entries[k].bias - entries[0].bias, 4),
                          k == 0 ? Cell::null() : Cell::integer_value(static_cast<long long>(rank[k]))});
    }
    r.tables.push_back(std::move(t));
    return r;
}

} // namespace excon
