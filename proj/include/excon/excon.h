/* C interface to the excon library.
 *
 * Every function returns an excon_status. On failure the message is
 * available from excon_last_error() on the same thread until the next call.
 * Objects are opaque handles released with their matching _free function;
 * passing NULL to a _free function is a no-op.
 */
#ifndef EXCON_EXCON_H
#define EXCON_EXCON_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EXCON_BUILDING)
#    define EXCON_API __declspec(dllexport)
#  else
#    define EXCON_API __declspec(dllimport)
#  endif
#else
#  define EXCON_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum excon_status {
    EXCON_OK = 0,
    EXCON_E_DOMAIN = 1,
    EXCON_E_INSUFFICIENT_DATA = 2,
    EXCON_E_DATA = 3,
    EXCON_E_DEGENERATE_VARIANCE = 4,
    EXCON_E_COMPUTATION = 5,
    EXCON_E_CONFIGURATION = 6,
    EXCON_E_SEPARATION = 7,
    EXCON_E_COLLINEARITY = 8,
    EXCON_E_INFEASIBLE = 9,
    EXCON_E_PARSE = 10,
    EXCON_E_IO = 11,
    EXCON_E_INVALID_ARGUMENT = 12,
    EXCON_E_INTERNAL = 99
} excon_status;

typedef enum excon_direction {
    EXCON_GREATER = 0,
    EXCON_LESS = 1,
    EXCON_TWO_SIDED = 2
} excon_direction;

typedef enum excon_format {
    EXCON_FORMAT_TEXT = 0,
    EXCON_FORMAT_TSV = 1,
    EXCON_FORMAT_JSON = 2
} excon_format;

EXCON_API const char* excon_version(void);
EXCON_API const char* excon_last_error(void);
EXCON_API const char* excon_status_name(excon_status status);

/* Normal distribution functions. */
EXCON_API excon_status excon_normal_cdf(double x, double* out);
EXCON_API excon_status excon_normal_quantile(double p, double* out);
EXCON_API excon_status excon_bvn_lower_cdf(double x, double y, double rho, double* out);
EXCON_API excon_status excon_bvn_upper_cdf(double x, double y, double rho, double* out);
/* c with P(X <= c, Y <= c) = 1 - alpha under correlation rho. */
EXCON_API excon_status excon_critical_value(double alpha, double rho, double* out);

/* Tests on arm summaries. */
typedef struct excon_arm_summary {
    size_t n;
    double mean;
    double var; /* unbiased sample variance */
} excon_arm_summary;

typedef struct excon_test_config {
    double alpha;
    double theta0;
    excon_direction direction;
    int w_auto; /* nonzero: w = n0 / (n0 + ne) */
    double w;
    double delta0;
} excon_test_config;

/* alpha 0.025, theta0 0, greater, automatic w, delta0 0. */
EXCON_API excon_test_config excon_test_config_default(void);

typedef struct excon_test_outcome {
    double t1;
    double t2_adj;
    double rho_hat;
    double critical_value;
    double adjusted_p;
    int reject;
    double w_used;
    excon_direction side;
} excon_test_outcome;

EXCON_API excon_status excon_combined_test(const excon_arm_summary* treated, const excon_arm_summary* internal,
                                           const excon_arm_summary* external, const excon_test_config* config,
                                           excon_test_outcome* out);

typedef struct excon_tipping {
    int pooled_insensitive;
    double pooled;
    int combined_insensitive;
    double combined;
    double plateau_p;
} excon_tipping;

/* config->delta0 is ignored. */
EXCON_API excon_status excon_tipping_point(const excon_arm_summary* treated, const excon_arm_summary* internal,
                                           const excon_arm_summary* external, const excon_test_config* config,
                                           excon_tipping* out);

/* Closed-form power. */
typedef struct excon_power_scenario {
    double theta_star;
    double theta0;
    double delta_star;
    double delta0;
    double n_r;
    double pi1;
    double n_e;
    double sigma1;
    double sigma0;
    double sigma_e;
    double w;
    double alpha;
} excon_power_scenario;

EXCON_API excon_status excon_power_t1(const excon_power_scenario* s, double* out);
EXCON_API excon_status excon_power_t2(const excon_power_scenario* s, double* out);
/* naive nonzero: critical value z_{1-alpha} instead of the corrected one. */
EXCON_API excon_status excon_power_combined(const excon_power_scenario* s, int naive, double* out);
EXCON_API excon_status excon_optimal_w(const excon_power_scenario* s, double* out);
EXCON_API excon_status excon_design_sensitivity(double theta_star, double theta0, double delta_star, double w,
                                                double* out);

/* Datasets and matched pairs. */
typedef struct excon_dataset excon_dataset;
typedef struct excon_pairs excon_pairs;

EXCON_API excon_status excon_dataset_load(const char* path, excon_dataset** out);
EXCON_API void excon_dataset_free(excon_dataset* data);
EXCON_API excon_status excon_dataset_size(const excon_dataset* data, size_t* n_records, size_t* n_covariates);
/* out[0] treated, out[1] internal control, out[2] external control. */
EXCON_API excon_status excon_dataset_summaries(const excon_dataset* data, excon_arm_summary out[3]);

EXCON_API excon_status excon_pairs_load(const char* path, excon_pairs** out);
EXCON_API excon_status excon_pairs_save(const excon_pairs* pairs, const char* path);
EXCON_API excon_status excon_pairs_size(const excon_pairs* pairs, size_t* out);
EXCON_API void excon_pairs_free(excon_pairs* pairs);

/* Scenario configs. */
typedef struct excon_config excon_config;

EXCON_API excon_status excon_config_load(const char* path, excon_config** out);
/* type1 nonzero: the built-in type I error grid, otherwise the power grid. */
EXCON_API excon_status excon_config_builtin(int type1, excon_config** out);
EXCON_API excon_status excon_config_seed(const excon_config* config, int* has_seed, uint64_t* seed);
EXCON_API excon_status excon_config_reps(const excon_config* config, int* has_reps, size_t* reps);
EXCON_API void excon_config_free(excon_config* config);

/* Reports. The rendered text is owned by the report and stays valid until
 * the next render or excon_report_free. */
typedef struct excon_report excon_report;

EXCON_API excon_status excon_report_render(excon_report* report, excon_format format, const char** text);
EXCON_API void excon_report_free(excon_report* report);

/* Subcommands. Labels are echoed in the report; NULL echoes the file path. */
EXCON_API excon_status excon_run_test(const excon_dataset* data, const char* method, const excon_test_config* config,
                                      excon_report** out);
EXCON_API excon_status excon_run_tipping(const excon_dataset* data, const char* method,
                                         const excon_test_config* config, excon_report** out);
EXCON_API excon_status excon_run_power_table(const excon_config* config, int type1, excon_report** out);
/* threads 0 uses the hardware concurrency; results do not depend on it. */
EXCON_API excon_status excon_run_simulate(const excon_config* config, uint64_t seed, size_t reps, unsigned threads,
                                          excon_report** out);

typedef struct excon_subsample_options {
    size_t n_sub;
    double treated_ratio;
    size_t reps;
    uint64_t seed;
    const double* delta0s;
    size_t n_delta0s;
    excon_test_config test; /* delta0 is ignored */
} excon_subsample_options;

EXCON_API excon_status excon_run_subsample(const excon_dataset* data, const excon_pairs* pairs,
                                           const excon_subsample_options* options, excon_report** out);
/* pairs_out may be NULL. */
EXCON_API excon_status excon_run_match(const excon_dataset* data, double caliper_sd, excon_report** out,
                                       excon_pairs** pairs_out);
EXCON_API excon_status excon_run_balance(const excon_dataset* data, const excon_pairs* pairs, excon_report** out);
/* n_covariates 0 omits every covariate in turn. */
EXCON_API excon_status excon_run_benchmark(const excon_dataset* data, const char* const* covariates,
                                           size_t n_covariates, double caliper_sd, excon_report** out);

#ifdef __cplusplus
}
#endif

#endif /* EXCON_EXCON_H */
