#include "excon/tests_core.hpp"

#include "excon/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace excon {

namespace {

double variance_term(const ArmSummary& arm) { return arm.var / static_cast<double>(arm.n); }

void check_weight(double w) {
    if (!(w >= 0.0 && w <= 1.0)) fail(ErrorCode::kDomain, "weight w must lie in [0, 1]");
}

// Upper-tail combined test on already-oriented data.
TestOutcome one_sided_combined(const TrialSummaries& d, double alpha, double w, double delta0) {
    TestOutcome out;
    out.w_used = w;
    out.t1 = t1_statistic(d.treated, d.internal, d.theta0);
    out.t2_adj = pooled_statistic(d.treated, d.internal, d.external, d.theta0, w, delta0);
    const Correlation rho = correlation_hat(d.treated, d.internal, d.external, w);
    out.rho_hat = rho.value();
    out.critical_value = equicoordinate_quantile(alpha, rho);
    const double m = std::max(out.t1, out.t2_adj);
    out.adjusted_p = max_exceedance(m, rho);
    out.reject = m >= out.critical_value;
    return out;
}

TrialSummaries oriented(const TrialSummaries& d, Direction direction) {
    return direction == Direction::kLess ? negate_transform(d) : d;
}

} // namespace

void validate(const ArmSummary& arm) {
    if (arm.n < 2) fail(ErrorCode::kInsufficientData, "an arm needs at least 2 subjects");
    if (!std::isfinite(arm.mean) || !std::isfinite(arm.var)) fail(ErrorCode::kData, "arm summary is not finite");
    if (arm.var < 0.0) fail(ErrorCode::kData, "arm variance is negative");
}

ArmSummary summarize(std::span<const double> values) {
    if (values.size() < 2) fail(ErrorCode::kInsufficientData, "summarize: need at least 2 values");
    // Welford's update keeps the variance accurate for large offsets.
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t k = 0;
    for (double v : values) {
        if (!std::isfinite(v)) fail(ErrorCode::kData, "summarize: non-finite value");
        ++k;
        const double delta = v - mean;
        mean += delta / static_cast<double>(k);
        m2 += delta * (v - mean);
    }
    return {values.size(), mean, std::max(0.0, m2 / static_cast<double>(k - 1))};
}

void validate(const TestConfig& config) {
    if (!(config.alpha > 0.0 && config.alpha < 0.5)) fail(ErrorCode::kDomain, "alpha must lie in (0, 0.5)");
    if (!std::isfinite(config.theta0)) fail(ErrorCode::kDomain, "theta0 must be finite");
    if (config.w) check_weight(*config.w);
    if (!(config.delta0 >= 0.0) || std::isnan(config.delta0))
        fail(ErrorCode::kDomain, "delta0 must be nonnegative");
}

double t1_statistic(const ArmSummary& treated, const ArmSummary& internal, double theta0) {
    validate(treated);
    validate(internal);
    const double se2 = variance_term(treated) + variance_term(internal);
    if (!(se2 > 0.0)) fail(ErrorCode::kDegenerateVariance, "T1: both arms have zero variance");
    return (treated.mean - internal.mean - theta0) / std::sqrt(se2);
}

double pooled_standard_error(const ArmSummary& treated, const ArmSummary& internal, const ArmSummary& external,
                             double w) {
    validate(treated);
    validate(internal);
    validate(external);
    check_weight(w);
    const double se2 =
        variance_term(treated) + w * w * variance_term(internal) + (1.0 - w) * (1.0 - w) * variance_term(external);
    if (!(se2 > 0.0)) fail(ErrorCode::kDegenerateVariance, "pooled statistic: zero standard error");
    return std::sqrt(se2);
}

double pooled_statistic(const ArmSummary& treated, const ArmSummary& internal, const ArmSummary& external,
                        double theta0, double w, double delta0) {
    const double se = pooled_standard_error(treated, internal, external, w);
    if (w == 1.0) return t1_statistic(treated, internal, theta0);
    const double control = w * internal.mean + (1.0 - w) * external.mean;
    return (treated.mean - control - theta0 - (1.0 - w) * delta0) / se;
}

Correlation correlation_hat(const ArmSummary& treated, const ArmSummary& internal, const ArmSummary& external,
                            double w) {
    const double se = pooled_standard_error(treated, internal, external, w);
    const double v1 = variance_term(treated);
    const double v0 = variance_term(internal);
    if (!(v1 + v0 > 0.0)) fail(ErrorCode::kDegenerateVariance, "correlation: T1 has zero variance");
    if (w == 1.0) return Correlation(1.0);
    const double rho = (v1 + w * v0) / (std::sqrt(v1 + v0) * se);
    return Correlation(std::clamp(rho, 0.0, 1.0));
}

double default_weight(const ArmSummary& internal, const ArmSummary& external) {
    const double n0 = static_cast<double>(internal.n);
    const double ne = static_cast<double>(external.n);
    if (n0 + ne <= 0.0) fail(ErrorCode::kInsufficientData, "default weight: no control subjects");
    return n0 / (n0 + ne);
}

SingleTestResult single_test(double statistic, double alpha) {
    if (!std::isfinite(statistic)) fail(ErrorCode::kDomain, "single_test: statistic must be finite");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::kDomain, "single_test: alpha must lie in (0, 1)");
    return {std_normal_cdf(-statistic), statistic >= std_normal_quantile(1.0 - alpha)};
}

TrialSummaries negate_transform(const TrialSummaries& data) {
    TrialSummaries out = data;
    out.treated.mean = -data.treated.mean;
    out.internal.mean = -data.internal.mean;
    out.external.mean = -data.external.mean;
    out.theta0 = -data.theta0;
    return out;
}

TestOutcome combined_test(const ArmSummary& treated, const ArmSummary& internal, const ArmSummary& external,
                          const TestConfig& config) {
    validate(config);
    const TrialSummaries data{treated, internal, external, config.theta0};
    const double w = config.w.value_or(default_weight(internal, external));

    if (config.direction != Direction::kTwoSided) {
        TestOutcome out = one_sided_combined(oriented(data, config.direction), config.alpha, w, config.delta0);
        out.side = config.direction;
        return out;
    }

    const double half = 0.5 * config.alpha;
    TestOutcome up = one_sided_combined(data, half, w, config.delta0);
    TestOutcome down = one_sided_combined(negate_transform(data), half, w, config.delta0);
    up.side = Direction::kGreater;
    down.side = Direction::kLess;
    const bool either = up.reject || down.reject;
    TestOutcome out = down.adjusted_p < up.adjusted_p ? down : up;
    out.adjusted_p = std::min(1.0, 2.0 * out.adjusted_p);
    out.reject = either;
    return out;
}

TippingResult tipping_point(const ArmSummary& treated, const ArmSummary& internal, const ArmSummary& external,
                            const TestConfig& config) {
    TestConfig cfg = config;
    cfg.delta0 = 0.0;
    validate(cfg);
    if (cfg.direction == Direction::kTwoSided)
        fail(ErrorCode::kConfiguration, "tipping point needs a one-sided direction");
    const double w = cfg.w.value_or(default_weight(internal, external));
    if (w >= 1.0) fail(ErrorCode::kConfiguration, "tipping point is undefined for w = 1 (no external weight)");

    const TrialSummaries d = oriented({treated, internal, external, cfg.theta0}, cfg.direction);
    const double se = pooled_standard_error(d.treated, d.internal, d.external, w);
    const double t1 = t1_statistic(d.treated, d.internal, d.theta0);
    const double t2 = pooled_statistic(d.treated, d.internal, d.external, d.theta0, w, 0.0);
    const Correlation rho = correlation_hat(d.treated, d.internal, d.external, w);

    // T2_{delta0} = T2 - (1 - w) delta0 / se, so each test's tipping point is
    // where the adjusted statistic crosses its critical value.
    auto crossing = [&](double critical) { return std::max(0.0, se * (t2 - critical) / (1.0 - w)); };

    TippingResult out;
    out.pooled.delta0 = crossing(std_normal_quantile(1.0 - cfg.alpha));
    out.plateau_p = max_exceedance(t1, rho);
    if (out.plateau_p <= cfg.alpha) {
        out.combined.insensitive = true;
        out.combined.delta0 = 0.0;
    } else {
        out.combined.delta0 = crossing(equicoordinate_quantile(cfg.alpha, rho));
    }
    return out;
}

} // namespace excon
