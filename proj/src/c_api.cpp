#include "excon/excon.h"

#include "excon/commands.hpp"
#include "excon/config.hpp"
#include "excon/dataset.hpp"
#include "excon/error.hpp"
#include "excon/power.hpp"
#include "excon/report.hpp"
#include "excon/tests_core.hpp"

#include <fstream>
#include <memory>
#include <new>
#include <string>

struct excon_dataset {
    excon::TrialDataset data;
    std::string label;
};

struct excon_pairs {
    std::vector<excon::PairRecord> pairs;
    std::string label;
};

struct excon_config {
    excon::ScenarioConfig config;
    std::string label;
};

struct excon_report {
    excon::Report report;
    std::string rendered;
};

namespace {

thread_local std::string g_last_error;

excon_status set_error(excon_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <typename F>
excon_status guarded(F&& body) {
    g_last_error.clear();
    try {
        body();
        return EXCON_OK;
    } catch (const excon::Error& e) {
        return set_error(static_cast<excon_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(EXCON_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(EXCON_E_INTERNAL, e.what());
    } catch (...) {
        return set_error(EXCON_E_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* what) {
    if (!p) excon::fail(excon::ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

excon::ArmSummary to_cpp(const excon_arm_summary& a) { return {a.n, a.mean, a.var}; }

excon_arm_summary to_c(const excon::ArmSummary& a) { return {a.n, a.mean, a.var}; }

excon::Direction to_cpp(excon_direction d) {
    switch (d) {
    case EXCON_GREATER: return excon::Direction::kGreater;
    case EXCON_LESS: return excon::Direction::kLess;
    case EXCON_TWO_SIDED: return excon::Direction::kTwoSided;
    }
    excon::fail(excon::ErrorCode::kInvalidArgument, "unknown direction");
}

excon_direction to_c(excon::Direction d) {
    switch (d) {
    case excon::Direction::kGreater: return EXCON_GREATER;
    case excon::Direction::kLess: return EXCON_LESS;
    case excon::Direction::kTwoSided: return EXCON_TWO_SIDED;
    }
    return EXCON_GREATER;
}

excon::TestConfig to_cpp(const excon_test_config& c) {
    excon::TestConfig out;
    out.alpha = c.alpha;
    out.theta0 = c.theta0;
    out.direction = to_cpp(c.direction);
    if (!c.w_auto) out.w = c.w;
    out.delta0 = c.delta0;
    return out;
}

excon::PowerScenario to_cpp(const excon_power_scenario& s) {
    excon::PowerScenario out;
    out.theta_star = s.theta_star;
    out.theta0 = s.theta0;
    out.delta_star = s.delta_star;
    out.delta0 = s.delta0;
    out.n_r = s.n_r;
    out.pi1 = s.pi1;
    out.n_e = s.n_e;
    out.sigma1 = s.sigma1;
    out.sigma0 = s.sigma0;
    out.sigma_e = s.sigma_e;
    out.w = s.w;
    out.alpha = s.alpha;
    return out;
}

excon::Format to_cpp(excon_format f) {
    switch (f) {
    case EXCON_FORMAT_TEXT: return excon::Format::kText;
    case EXCON_FORMAT_TSV: return excon::Format::kTsv;
    case EXCON_FORMAT_JSON: return excon::Format::kJson;
    }
    excon::fail(excon::ErrorCode::kInvalidArgument, "unknown format");
}

template <typename Fn>
excon_status scalar(double* out, Fn fn) {
    return guarded([&] {
        require(out, "out");
        *out = fn();
    });
}

void emit(excon::Report report, excon_report** out) {
    *out = new excon_report{std::move(report), {}};
}

} // namespace

extern "C" {

const char* excon_version(void) { return excon::tool_version(); }

const char* excon_last_error(void) { return g_last_error.c_str(); }

const char* excon_status_name(excon_status status) {
    switch (status) {
    case EXCON_OK: return "ok";
    case EXCON_E_DOMAIN: return "domain error";
    case EXCON_E_INSUFFICIENT_DATA: return "insufficient data";
    case EXCON_E_DATA: return "data error";
    case EXCON_E_DEGENERATE_VARIANCE: return "degenerate variance";
    case EXCON_E_COMPUTATION: return "computation error";
    case EXCON_E_CONFIGURATION: return "configuration error";
    case EXCON_E_SEPARATION: return "separation";
    case EXCON_E_COLLINEARITY: return "collinearity";
    case EXCON_E_INFEASIBLE: return "infeasible";
    case EXCON_E_PARSE: return "parse error";
    case EXCON_E_IO: return "i/o error";
    case EXCON_E_INVALID_ARGUMENT: return "invalid argument";
    case EXCON_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

excon_status excon_normal_cdf(double x, double* out) {
    return scalar(out, [&] { return excon::std_normal_cdf(x); });
}

excon_status excon_normal_quantile(double p, double* out) {
    return scalar(out, [&] { return excon::std_normal_quantile(p); });
}

excon_status excon_bvn_lower_cdf(double x, double y, double rho, double* out) {
    return scalar(out, [&] { return excon::bvn_lower_cdf(x, y, excon::Correlation(rho)); });
}

excon_status excon_bvn_upper_cdf(double x, double y, double rho, double* out) {
    return scalar(out, [&] { return excon::bvn_upper_cdf(x, y, excon::Correlation(rho)); });
}

excon_status excon_critical_value(double alpha, double rho, double* out) {
    return scalar(out, [&] { return excon::equicoordinate_quantile(alpha, excon::Correlation(rho)); });
}

excon_test_config excon_test_config_default(void) { return {0.025, 0.0, EXCON_GREATER, 1, 0.0, 0.0}; }

excon_status excon_combined_test(const excon_arm_summary* treated, const excon_arm_summary* internal,
                                 const excon_arm_summary* external, const excon_test_config* config,
                                 excon_test_outcome* out) {
    return guarded([&] {
        require(treated, "treated");
        require(internal, "internal");
        require(external, "external");
        require(config, "config");
        require(out, "out");
        const excon::TestOutcome o =
            excon::combined_test(to_cpp(*treated), to_cpp(*internal), to_cpp(*external), to_cpp(*config));
        *out = {o.t1, o.t2_adj, o.rho_hat, o.critical_value, o.adjusted_p, o.reject ? 1 : 0, o.w_used, to_c(o.side)};
    });
}

excon_status excon_tipping_point(const excon_arm_summary* treated, const excon_arm_summary* internal,
                                 const excon_arm_summary* external, const excon_test_config* config,
                                 excon_tipping* out) {
    return guarded([&] {
        require(treated, "treated");
        require(internal, "internal");
        require(external, "external");
        require(config, "config");
        require(out, "out");
        const excon::TippingResult t =
            excon::tipping_point(to_cpp(*treated), to_cpp(*internal), to_cpp(*external), to_cpp(*config));
        *out = {t.pooled.insensitive ? 1 : 0, t.pooled.delta0, t.combined.insensitive ? 1 : 0, t.combined.delta0,
                t.plateau_p};
    });
}

excon_status excon_power_t1(const excon_power_scenario* s, double* out) {
    return scalar(out, [&] {
        require(s, "scenario");
        return excon::power_t1(to_cpp(*s));
    });
}

excon_status excon_power_t2(const excon_power_scenario* s, double* out) {
    return scalar(out, [&] {
        require(s, "scenario");
        return excon::power_t2(to_cpp(*s));
    });
}

excon_status excon_power_combined(const excon_power_scenario* s, int naive, double* out) {
    return scalar(out, [&] {
        require(s, "scenario");
        return excon::power_combined(to_cpp(*s), naive ? excon::CriticalKind::kNaive : excon::CriticalKind::kCorrected);
    });
}

excon_status excon_optimal_w(const excon_power_scenario* s, double* out) {
    return scalar(out, [&] {
        require(s, "scenario");
        return excon::optimal_w(to_cpp(*s));
    });
}

excon_status excon_design_sensitivity(double theta_star, double theta0, double delta_star, double w, double* out) {
    return scalar(out, [&] { return excon::design_sensitivity(theta_star, theta0, delta_star, w); });
}

excon_status excon_dataset_load(const char* path, excon_dataset** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        auto d = std::make_unique<excon_dataset>(excon_dataset{excon::load_dataset(path), path});
        *out = d.release();
    });
}

void excon_dataset_free(excon_dataset* data) { delete data; }

excon_status excon_dataset_size(const excon_dataset* data, size_t* n_records, size_t* n_covariates) {
    return guarded([&] {
        require(data, "data");
        if (n_records) *n_records = data->data.records.size();
        if (n_covariates) *n_covariates = data->data.covariate_names.size();
    });
}

excon_status excon_dataset_summaries(const excon_dataset* data, excon_arm_summary out[3]) {
    return guarded([&] {
        require(data, "data");
        require(out, "out");
        const excon::DatasetSummaries s = excon::summarize_arms(data->data);
        out[0] = to_c(s.treated);
        out[1] = to_c(s.internal);
        out[2] = to_c(s.external);
    });
}

excon_status excon_pairs_load(const char* path, excon_pairs** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        auto p = std::make_unique<excon_pairs>(excon_pairs{excon::load_pairs(path), path});
        *out = p.release();
    });
}

excon_status excon_pairs_save(const excon_pairs* pairs, const char* path) {
    return guarded([&] {
        require(pairs, "pairs");
        require(path, "path");
        std::ofstream f(path);
        if (!f) excon::fail(excon::ErrorCode::kIo, std::string("cannot write '") + path + "'");
        excon::write_pairs(f, pairs->pairs);
        f.flush();
        if (!f) excon::fail(excon::ErrorCode::kIo, std::string("write failed for '") + path + "'");
    });
}

excon_status excon_pairs_size(const excon_pairs* pairs, size_t* out) {
    return guarded([&] {
        require(pairs, "pairs");
        require(out, "out");
        *out = pairs->pairs.size();
    });
}

void excon_pairs_free(excon_pairs* pairs) { delete pairs; }

excon_status excon_config_load(const char* path, excon_config** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        auto c = std::make_unique<excon_config>(excon_config{excon::load_config(path), path});
        *out = c.release();
    });
}

excon_status excon_config_builtin(int type1, excon_config** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        auto c = type1 ? std::make_unique<excon_config>(excon_config{excon::type1_table_config(), "(built-in type I grid)"})
                       : std::make_unique<excon_config>(excon_config{excon::power_table_config(), "(built-in power grid)"});
        *out = c.release();
    });
}

excon_status excon_config_seed(const excon_config* config, int* has_seed, uint64_t* seed) {
    return guarded([&] {
        require(config, "config");
        require(has_seed, "has_seed");
        *has_seed = config->config.seed.has_value() ? 1 : 0;
        if (seed && config->config.seed) *seed = *config->config.seed;
    });
}

excon_status excon_config_reps(const excon_config* config, int* has_reps, size_t* reps) {
    return guarded([&] {
        require(config, "config");
        require(has_reps, "has_reps");
        *has_reps = config->config.reps.has_value() ? 1 : 0;
        if (reps && config->config.reps) *reps = *config->config.reps;
    });
}

void excon_config_free(excon_config* config) { delete config; }

excon_status excon_report_render(excon_report* report, excon_format format, const char** text) {
    return guarded([&] {
        require(report, "report");
        require(text, "text");
        report->rendered = excon::render(report->report, to_cpp(format));
        *text = report->rendered.c_str();
    });
}

void excon_report_free(excon_report* report) { delete report; }

excon_status excon_run_test(const excon_dataset* data, const char* method, const excon_test_config* config,
                            excon_report** out) {
    return guarded([&] {
        require(data, "data");
        require(config, "config");
        require(out, "out");
        const auto m = excon::parse_test_method(method ? method : "combined");
        emit(excon::run_test(data->data, data->label, m, to_cpp(*config)), out);
    });
}

excon_status excon_run_tipping(const excon_dataset* data, const char* method, const excon_test_config* config,
                               excon_report** out) {
    return guarded([&] {
        require(data, "data");
        require(config, "config");
        require(out, "out");
        const auto m = excon::parse_tipping_method(method ? method : "both");
        emit(excon::run_tipping(data->data, data->label, m, to_cpp(*config)), out);
    });
}

excon_status excon_run_power_table(const excon_config* config, int type1, excon_report** out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        emit(excon::run_power_table(config->config, config->label, type1 != 0), out);
    });
}

excon_status excon_run_simulate(const excon_config* config, uint64_t seed, size_t reps, unsigned threads,
                                excon_report** out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        emit(excon::run_simulate(config->config, config->label, seed, reps, threads), out);
    });
}

excon_status excon_run_subsample(const excon_dataset* data, const excon_pairs* pairs,
                                 const excon_subsample_options* options, excon_report** out) {
    return guarded([&] {
        require(data, "data");
        require(pairs, "pairs");
        require(options, "options");
        require(out, "out");
        if (options->n_delta0s > 0) require(options->delta0s, "delta0s");
        const excon::TestConfig test = to_cpp(options->test);
        excon::SubsampleOptions o;
        o.n_sub = options->n_sub;
        o.treated_ratio = options->treated_ratio;
        o.n_reps = options->reps;
        o.seed = options->seed;
        o.alpha = test.alpha;
        o.theta0 = test.theta0;
        o.direction = test.direction;
        o.w = test.w;
        o.delta0s.assign(options->delta0s, options->delta0s + options->n_delta0s);
        emit(excon::run_subsample(data->data, data->label, pairs->pairs, pairs->label, o), out);
    });
}

excon_status excon_run_match(const excon_dataset* data, double caliper_sd, excon_report** out,
                             excon_pairs** pairs_out) {
    return guarded([&] {
        require(data, "data");
        require(out, "out");
        excon::MatchOptions options;
        options.caliper_sd = caliper_sd;
        excon::MatchRun run = excon::run_match(data->data, data->label, options);
        std::unique_ptr<excon_pairs> pairs;
        if (pairs_out) pairs = std::make_unique<excon_pairs>(excon_pairs{std::move(run.pairs), "(match)"});
        emit(std::move(run.report), out);
        if (pairs_out) *pairs_out = pairs.release();
    });
}

excon_status excon_run_balance(const excon_dataset* data, const excon_pairs* pairs, excon_report** out) {
    return guarded([&] {
        require(data, "data");
        require(pairs, "pairs");
        require(out, "out");
        emit(excon::run_balance(data->data, data->label, pairs->pairs, pairs->label), out);
    });
}

excon_status excon_run_benchmark(const excon_dataset* data, const char* const* covariates, size_t n_covariates,
                                 double caliper_sd, excon_report** out) {
    return guarded([&] {
        require(data, "data");
        require(out, "out");
        if (n_covariates > 0) require(covariates, "covariates");
        std::vector<std::string> names;
        for (size_t k = 0; k < n_covariates; ++k) {
            require(covariates[k], "covariate name");
            names.emplace_back(covariates[k]);
        }
        excon::MatchOptions options;
        options.caliper_sd = caliper_sd;
        emit(excon::run_benchmark(data->data, data->label, names, options), out);
    });
}

} // extern "C"
