#pragma once

// Test statistics for a trial that borrows matched external controls:
// the RCT-only z statistic, the bias-adjusted pooled-control statistic,
// the max-combined test with its bivariate-normal critical value, and
// tipping-point sensitivity analysis in the bias bound delta0.

#include "excon/bvnorm.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace excon {

/// Per-arm sufficient statistics. var is the unbiased sample variance.
struct ArmSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double var = 0.0;
};

/// Throws kInsufficientData / kData unless n >= 2 and mean, var are finite with var >= 0.
void validate(const ArmSummary& arm);

ArmSummary summarize(std::span<const double> values);

/// The three arms a combined analysis needs, plus the margin they are tested against.
struct TrialSummaries {
    ArmSummary treated;
    ArmSummary internal;
    ArmSummary external;
    double theta0 = 0.0;
};

enum class Direction { kGreater, kLess, kTwoSided };

struct TestConfig {
    double alpha = 0.025;
    double theta0 = 0.0;
    Direction direction = Direction::kGreater;
    std::optional<double> w;  // nullopt: n0 / (n0 + ne)
    double delta0 = 0.0;
};

void validate(const TestConfig& config);

struct TestOutcome {
    double t1 = 0.0;
    double t2_adj = 0.0;
    double rho_hat = 1.0;
    double critical_value = 0.0;
    double adjusted_p = 1.0;
    bool reject = false;
    double w_used = 1.0;
    // For two-sided tests: the one-sided direction whose evidence is reported.
    Direction side = Direction::kGreater;
};

struct SingleTestResult {
    double p = 1.0;
    bool reject = false;
};

double t1_statistic(const ArmSummary& treated, const ArmSummary& internal, double theta0);

/// Standard error of Y1 - {w Y0 + (1-w) Ye}, assuming independent arms.
double pooled_standard_error(const ArmSummary& treated, const ArmSummary& internal, const ArmSummary& external,
                             double w);

double pooled_statistic(const ArmSummary& treated, const ArmSummary& internal, const ArmSummary& external,
                        double theta0, double w, double delta0);

/// Plug-in correlation of (T1, T2(w)) from sample variances and observed counts.
Correlation correlation_hat(const ArmSummary& treated, const ArmSummary& internal, const ArmSummary& external,
                            double w);

/// n0 / (n0 + ne): the variance-minimizing weight under equal control variances.
double default_weight(const ArmSummary& internal, const ArmSummary& external);

/// One-sided upper-tail z test: p = 1 - Phi(statistic), reject iff statistic >= z_{1-alpha}.
SingleTestResult single_test(double statistic, double alpha);

/// Reflects outcomes for the "less than" alternative: means and theta0 change sign.
TrialSummaries negate_transform(const TrialSummaries& data);

/// Reject iff max(T1, T2_{delta0}(w)) >= c_{1-alpha; rho_hat}. Two-sided runs both
/// one-sided tests at alpha/2 and reports a Bonferroni-adjusted p.
TestOutcome combined_test(const ArmSummary& treated, const ArmSummary& internal, const ArmSummary& external,
                          const TestConfig& config);

/// Either a finite tipping point or "insensitive": no finite delta0 overturns the rejection.
struct TippingValue {
    bool insensitive = false;
    double delta0 = 0.0;
};

struct TippingResult {
    TippingValue pooled;
    TippingValue combined;
    double plateau_p = 1.0;  // adjusted p of the combined test as delta0 -> infinity
};

/// Tipping points of the pooled test and of the combined test. config.delta0 is ignored.
/// Requires a one-sided direction and w < 1.
TippingResult tipping_point(const ArmSummary& treated, const ArmSummary& internal, const ArmSummary& external,
                            const TestConfig& config);

} // namespace excon
