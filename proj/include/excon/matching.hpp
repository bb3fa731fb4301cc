#pragma once

// Matched external-control construction: a logistic propensity model, a
// rank-based robust Mahalanobis distance, a soft propensity caliper,
// optimal one-to-one pair matching and covariate balance diagnostics.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace excon {

enum class Group { kRctTreated, kExternalPool };

struct CovariateMatrix {
    std::vector<std::string> names;  // one per column
    Eigen::MatrixXd values;          // rows: subjects
    std::vector<Group> group;        // one per row
};

/// Requires at least one covariate, finite values and >= 2 rows per group.
void validate(const CovariateMatrix& data);

std::vector<std::size_t> rows_in(const CovariateMatrix& data, Group g);

/// Copy without the named covariates. Unknown names are kInvalidArgument.
CovariateMatrix without_covariates(const CovariateMatrix& data, std::span<const std::string> names);

struct PropensityModel {
    double intercept = 0.0;
    std::vector<double> coefficients;  // original covariate scale
    std::vector<double> std_errors;    // per coefficient, from the observed information
    bool converged = false;
    std::size_t n_iterations = 0;
    std::vector<double> loglik_trace;  // log-likelihood after each accepted step, starting at the null fit

    double linear_predictor(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

/// Logistic regression of P(RCT treated | X) by damped Newton iterations.
/// Converges when the largest coefficient update is below 1e-8 (max 50 iterations).
/// Throws kSeparation naming the separating covariate, or kCollinearity.
PropensityModel fit_propensity(const CovariateMatrix& data);

/// Linear predictor (logit propensity) for every row of data.
Eigen::VectorXd logit_scores(const PropensityModel& model, const CovariateMatrix& data);

/// Treated x external matrix; row/column k refer to data rows treated_rows[k] / external_rows[k].
struct DistanceMatrix {
    Eigen::MatrixXd values;
    std::vector<std::size_t> treated_rows;
    std::vector<std::size_t> external_rows;
};

/// Squared Mahalanobis distance between column-wise average ranks, with the
/// rank covariance rescaled to untied rank variance and ridge-regularized
/// when near singular.
DistanceMatrix robust_mahalanobis(const CovariateMatrix& data);

/// Adds 1000 x (largest finite distance) to pairs whose logit-propensity gap
/// exceeds caliper_sd x SD(logit propensity). Pairs at the boundary are kept.
DistanceMatrix apply_caliper(const DistanceMatrix& dist, const PropensityModel& model, const CovariateMatrix& data,
                             double caliper_sd);

/// Same, from precomputed logit scores indexed by data row.
DistanceMatrix apply_caliper(const DistanceMatrix& dist, std::span<const double> logits, double caliper_sd);

/// Minimum-cost assignment of every row to a distinct column (rows <= cols).
/// Returns the assigned column for each row.
std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost);

struct MatchPair {
    std::size_t treated_row = 0;
    std::size_t external_row = 0;
    double distance = 0.0;
};

struct MatchResult {
    std::vector<MatchPair> pairs;  // ordered by treated row
    double total_distance = 0.0;
    std::vector<std::size_t> unmatched_treated;
    std::size_t caliper_violations = 0;
    std::vector<double> balance;  // SMD per covariate, treated vs matched externals
};

MatchResult optimal_pair_match(const DistanceMatrix& dist);

/// (mean_t - mean_c) / sqrt((s_t^2 + s_c^2) / 2) per column. 0/0 is 0;
/// x/0 is +/- infinity.
std::vector<double> standardized_mean_difference(const Eigen::MatrixXd& treated, const Eigen::MatrixXd& control);

struct MatchOptions {
    double caliper_sd = 0.2;  // infinity disables the caliper
};

/// fit_propensity -> robust_mahalanobis -> apply_caliper -> optimal_pair_match,
/// with balance filled in.
MatchResult match_pipeline(const CovariateMatrix& data, const MatchOptions& options);

struct BenchmarkEntry {
    std::string omitted;  // empty for the baseline
    double bias = 0.0;    // internal control mean - matched external mean
};

/// Re-matches without each named covariate in turn and reports the implied
/// internal-minus-external control mean difference. The first entry is the
/// baseline with nothing omitted. outcomes is indexed by data row and read
/// for external rows only.
std::vector<BenchmarkEntry> omit_one_benchmark(const CovariateMatrix& data, std::span<const double> outcomes,
                                               double internal_control_mean,
                                               std::span<const std::string> covariate_names,
                                               const MatchOptions& options);

} // namespace excon
