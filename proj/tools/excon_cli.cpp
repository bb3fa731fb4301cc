// Command-line front end. Talks to the library only through excon.h.
//
// Exit codes: 0 success, 1 runtime or data error, 2 usage error.

#include "excon/excon.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError {
    std::string message;
};

struct RuntimeError {
    std::string message;
};

void check(excon_status status) {
    if (status != EXCON_OK) throw RuntimeError{excon_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};

using DatasetPtr = std::unique_ptr<excon_dataset, Deleter<excon_dataset, excon_dataset_free>>;
using PairsPtr = std::unique_ptr<excon_pairs, Deleter<excon_pairs, excon_pairs_free>>;
using ConfigPtr = std::unique_ptr<excon_config, Deleter<excon_config, excon_config_free>>;
using ReportPtr = std::unique_ptr<excon_report, Deleter<excon_report, excon_report_free>>;

DatasetPtr load_dataset(const std::string& path) {
    excon_dataset* d = nullptr;
    check(excon_dataset_load(path.c_str(), &d));
    return DatasetPtr(d);
}

PairsPtr load_pairs(const std::string& path) {
    excon_pairs* p = nullptr;
    check(excon_pairs_load(path.c_str(), &p));
    return PairsPtr(p);
}

ConfigPtr load_config(const std::string& path, int builtin_type1) {
    excon_config* c = nullptr;
    if (path.empty()) check(excon_config_builtin(builtin_type1, &c));
    else check(excon_config_load(path.c_str(), &c));
    return ConfigPtr(c);
}

// Shared options of the data-driven tests.
struct TestOptions {
    std::string direction = "greater";
    double alpha = 0.025;
    double theta0 = 0.0;
    std::string w = "auto";
    double delta0 = 0.0;

    excon_test_config to_config() const {
        excon_test_config c = excon_test_config_default();
        c.alpha = alpha;
        c.theta0 = theta0;
        c.direction = direction == "less" ? EXCON_LESS : direction == "two-sided" ? EXCON_TWO_SIDED : EXCON_GREATER;
        c.delta0 = delta0;
        if (w != "auto") {
            c.w_auto = 0;
            c.w = std::stod(w);
        }
        return c;
    }
};

const CLI::Validator kWeight(
    [](std::string& value) -> std::string {
        if (CLI::detail::to_lower(value) == "auto") {
            value = "auto";
            return {};
        }
        try {
            std::size_t used = 0;
            const double w = std::stod(value, &used);
            if (used == value.size() && w >= 0.0 && w <= 1.0) return {};
        } catch (const std::exception&) {
        }
        return "w must be 'auto' or a number in [0, 1], got '" + value + "'";
    },
    "auto|[0,1]");

void add_direction(CLI::App* cmd, TestOptions& t) {
    cmd->add_option("--direction", t.direction, "Alternative hypothesis")
        ->transform(CLI::IsMember({"greater", "less", "two-sided"}, CLI::ignore_case))
        ->capture_default_str();
}

void add_alpha_theta(CLI::App* cmd, TestOptions& t) {
    cmd->add_option("--alpha", t.alpha, "One-sided significance level")->check(CLI::Range(0.0, 0.5))->capture_default_str();
    cmd->add_option("--theta0", t.theta0, "Null margin for the treatment effect")->capture_default_str();
}

void add_weight(CLI::App* cmd, TestOptions& t) {
    cmd->add_option("--w", t.w, "Weight on the internal control mean, or auto for n0/(n0+ne)")
        ->check(kWeight)
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Treatment-effect tests that borrow matched external controls"};
    app.set_version_flag("--version", std::string("excon ") + excon_version());
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "Output format")
        ->transform(CLI::IsMember({"text", "tsv", "json"}, CLI::ignore_case))
        ->capture_default_str();
    app.fallthrough();

    // test
    TestOptions test_opts;
    std::string test_data, test_method = "combined";
    auto* test = app.add_subcommand("test", "Run T1, the bias-adjusted pooled test T2, or the combined test");
    test->add_option("--data", test_data, "Trial CSV")->required();
    test->add_option("--method", test_method, "t1, t2 or combined")
        ->transform(CLI::IsMember({"t1", "t2", "combined"}, CLI::ignore_case))
        ->capture_default_str();
    add_direction(test, test_opts);
    add_alpha_theta(test, test_opts);
    add_weight(test, test_opts);
    test->add_option("--delta0", test_opts.delta0, "Assumed bound on the external-control bias")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    // tipping
    TestOptions tip_opts;
    std::string tip_data, tip_method = "both";
    auto* tipping = app.add_subcommand("tipping", "Smallest delta0 that overturns the pooled or combined rejection");
    tipping->add_option("--data", tip_data, "Trial CSV")->required();
    tipping->add_option("--method", tip_method, "pooled, combined or both")
        ->transform(CLI::IsMember({"pooled", "combined", "both"}, CLI::ignore_case))
        ->capture_default_str();
    add_direction(tipping, tip_opts);
    add_alpha_theta(tipping, tip_opts);
    add_weight(tipping, tip_opts);

    // power-table / type1-table
    std::string power_config, type1_config;
    auto* power = app.add_subcommand("power-table", "Closed-form power over a scenario grid");
    power->add_option("--config", power_config, "Scenario config (default: built-in power grid)");
    auto* type1 = app.add_subcommand("type1-table", "Closed-form type I error over a scenario grid");
    type1->add_option("--config", type1_config, "Scenario config (default: built-in type I grid)");

    // simulate
    std::string sim_config, sim_data, sim_pairs;
    std::uint64_t sim_seed = 0;
    std::size_t sim_reps = 0;
    unsigned sim_threads = 0;
    std::size_t sim_n_sub = 100;
    double sim_ratio = 0.8;
    std::vector<double> sim_delta0s = {0.0, 0.1, 0.2, 0.3};
    TestOptions sim_opts;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo rejection rates (parametric grid or RCT subsampling)");
    auto* sim_config_opt = simulate->add_option("--config", sim_config, "Scenario config for the parametric study");
    auto* sim_data_opt = simulate->add_option("--data", sim_data, "Trial CSV for the subsampling study");
    auto* sim_pairs_opt = simulate->add_option("--pairs", sim_pairs, "Matched pairs CSV for the subsampling study");
    sim_config_opt->excludes(sim_data_opt)->excludes(sim_pairs_opt);
    sim_data_opt->needs(sim_pairs_opt);
    sim_pairs_opt->needs(sim_data_opt);
    auto* seed_opt = simulate->add_option("--seed", sim_seed, "Random seed (required unless the config sets one)");
    auto* reps_opt = simulate->add_option("--reps", sim_reps, "Replications per cell")->check(CLI::PositiveNumber);
    simulate->add_option("--threads", sim_threads, "Worker threads, 0 for all cores (results do not depend on it)")
        ->capture_default_str();
    simulate->add_option("--n-sub", sim_n_sub, "Subsample size")->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--treated-ratio", sim_ratio, "Treated share of each subsample")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    simulate->add_option("--delta0", sim_delta0s, "Comma-separated delta0 values for the subsampling study")
        ->delimiter(',')
        ->check(CLI::NonNegativeNumber);
    add_direction(simulate, sim_opts);
    add_alpha_theta(simulate, sim_opts);
    add_weight(simulate, sim_opts);

    // match
    std::string match_data, match_out;
    double match_caliper = 0.2;
    bool match_no_caliper = false;
    auto* match = app.add_subcommand("match", "Optimal 1:1 matching of external controls to treated RCT subjects");
    match->add_option("--data", match_data, "Trial CSV with covariate columns")->required();
    auto* caliper_opt = match->add_option("--caliper", match_caliper, "Caliper width in SDs of the logit propensity")
                            ->check(CLI::PositiveNumber)
                            ->capture_default_str();
    match->add_flag("--no-caliper", match_no_caliper, "Disable the propensity caliper")->excludes(caliper_opt);
    match->add_option("--pairs-out", match_out, "Write matched pairs CSV here");

    // balance
    std::string bal_data, bal_pairs;
    auto* balance = app.add_subcommand("balance", "Covariate balance before and after matching");
    balance->add_option("--data", bal_data, "Trial CSV with covariate columns")->required();
    balance->add_option("--pairs", bal_pairs, "Matched pairs CSV")->required();

    // benchmark-omit
    std::string bench_data;
    std::vector<std::string> bench_covariates;
    double bench_caliper = 0.2;
    auto* bench = app.add_subcommand("benchmark-omit", "Re-match omitting one covariate at a time");
    bench->add_option("--data", bench_data, "Trial CSV with covariate columns")->required();
    bench->add_option("--covariates", bench_covariates, "Covariates to omit (default: all)")->delimiter(',');
    bench->add_option("--caliper", bench_caliper, "Caliper width in SDs of the logit propensity")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const excon_format fmt = format == "json" ? EXCON_FORMAT_JSON : format == "tsv" ? EXCON_FORMAT_TSV : EXCON_FORMAT_TEXT;
    try {
        excon_report* raw = nullptr;
        if (*test) {
            auto data = load_dataset(test_data);
            const excon_test_config cfg = test_opts.to_config();
            check(excon_run_test(data.get(), test_method.c_str(), &cfg, &raw));
        } else if (*tipping) {
            auto data = load_dataset(tip_data);
            const excon_test_config cfg = tip_opts.to_config();
            check(excon_run_tipping(data.get(), tip_method.c_str(), &cfg, &raw));
        } else if (*power) {
            auto cfg = load_config(power_config, 0);
            check(excon_run_power_table(cfg.get(), 0, &raw));
        } else if (*type1) {
            auto cfg = load_config(type1_config, 1);
            check(excon_run_power_table(cfg.get(), 1, &raw));
        } else if (*simulate) {
            if (!sim_data.empty()) {
                if (!seed_opt->count()) throw UsageError{"simulate needs --seed"};
                auto data = load_dataset(sim_data);
                auto pairs = load_pairs(sim_pairs);
                excon_subsample_options o{};
                o.n_sub = sim_n_sub;
                o.treated_ratio = sim_ratio;
                o.reps = reps_opt->count() ? sim_reps : 1000;
                o.seed = sim_seed;
                o.delta0s = sim_delta0s.data();
                o.n_delta0s = sim_delta0s.size();
                o.test = sim_opts.to_config();
                check(excon_run_subsample(data.get(), pairs.get(), &o, &raw));
            } else {
                if (sim_config.empty()) throw UsageError{"simulate needs --config, or --data with --pairs"};
                auto cfg = load_config(sim_config, 0);
                int has_seed = 0, has_reps = 0;
                std::uint64_t seed = 0;
                std::size_t reps = 0;
                check(excon_config_seed(cfg.get(), &has_seed, &seed));
                check(excon_config_reps(cfg.get(), &has_reps, &reps));
                if (seed_opt->count()) seed = sim_seed;
                else if (!has_seed) throw UsageError{"simulate needs --seed (or seed = ... in the config)"};
                if (reps_opt->count()) reps = sim_reps;
                else if (!has_reps) reps = 10000;
                check(excon_run_simulate(cfg.get(), seed, reps, sim_threads, &raw));
            }
        } else if (*match) {
            auto data = load_dataset(match_data);
            const double caliper = match_no_caliper ? std::numeric_limits<double>::infinity() : match_caliper;
            excon_pairs* pairs_raw = nullptr;
            check(excon_run_match(data.get(), caliper, &raw, match_out.empty() ? nullptr : &pairs_raw));
            PairsPtr pairs(pairs_raw);
            if (pairs) check(excon_pairs_save(pairs.get(), match_out.c_str()));
        } else if (*balance) {
            auto data = load_dataset(bal_data);
            auto pairs = load_pairs(bal_pairs);
            check(excon_run_balance(data.get(), pairs.get(), &raw));
        } else if (*bench) {
            auto data = load_dataset(bench_data);
            std::vector<const char*> names;
            for (const std::string& n : bench_covariates) names.push_back(n.c_str());
            check(excon_run_benchmark(data.get(), names.data(), names.size(), bench_caliper, &raw));
        }
        ReportPtr report(raw);
        const char* text = nullptr;
        check(excon_report_render(report.get(), fmt, &text));
        std::fputs(text, stdout);
        return 0;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "excon: usage error: %s\nRun with --help for more information.\n", e.message.c_str());
        return kExitUsage;
    } catch (const RuntimeError& e) {
        std::fprintf(stderr, "excon: error: %s\n", e.message.c_str());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "excon: error: %s\n", e.what());
        return kExitRuntime;
    }
}
