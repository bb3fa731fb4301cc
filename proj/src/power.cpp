#include "excon/power.hpp"

#include "excon/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace excon {

namespace {

// pi1^{-1} sigma1^2, pi0^{-1} sigma0^2 and (n_r / n_e) sigma_e^2.
struct VarianceTerms {
    double treated;
    double internal;
    double external;
};

VarianceTerms variance_terms(const PowerScenario& s) {
    return {s.sigma1 * s.sigma1 / s.pi1, s.sigma0 * s.sigma0 / s.pi0(), s.n_r / s.n_e * s.sigma_e * s.sigma_e};
}

double pooled_scale(const VarianceTerms& v, double w) {
    return std::sqrt(v.treated + w * w * v.internal + (1.0 - w) * (1.0 - w) * v.external);
}

// 1 - Phi2_rho(a, b), summed from upper tails.
double union_exceedance(double a, double b, Correlation rho) {
    const double tail = std_normal_cdf(-a) + std_normal_cdf(-b) - bvn_upper_cdf(a, b, rho);
    return std::clamp(tail, 0.0, 1.0);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void validate(const PowerScenario& s) {
    if (!(s.n_r >= 1.0 && s.n_e >= 1.0)) fail(ErrorCode::kDomain, "scenario sizes must be >= 1");
    if (!(finite_positive(s.sigma1) && finite_positive(s.sigma0) && finite_positive(s.sigma_e)))
        fail(ErrorCode::kDomain, "scenario standard deviations must be positive");
    if (!(s.pi1 > 0.0 && s.pi1 < 1.0)) fail(ErrorCode::kDomain, "pi1 must lie in (0, 1)");
    if (!(s.w >= 0.0 && s.w <= 1.0)) fail(ErrorCode::kDomain, "w must lie in [0, 1]");
    if (!(s.alpha > 0.0 && s.alpha < 0.5)) fail(ErrorCode::kDomain, "alpha must lie in (0, 0.5)");
    if (!(std::isfinite(s.theta_star) && std::isfinite(s.theta0) && std::isfinite(s.delta_star) &&
          std::isfinite(s.delta0)))
        fail(ErrorCode::kDomain, "scenario effects must be finite");
}

std::size_t treated_count(const PowerScenario& s) { return static_cast<std::size_t>(std::llround(s.n_r * s.pi1)); }

std::size_t internal_count(const PowerScenario& s) {
    return static_cast<std::size_t>(std::llround(s.n_r)) - treated_count(s);
}

std::size_t external_count(const PowerScenario& s) { return static_cast<std::size_t>(std::llround(s.n_e)); }

PowerShifts power_shifts(const PowerScenario& s) {
    validate(s);
    const VarianceTerms v = variance_terms(s);
    const double root_n = std::sqrt(s.n_r);
    PowerShifts out;
    out.b1 = root_n * (s.theta0 - s.theta_star) / std::sqrt(v.treated + v.internal);
    if (s.w == 1.0) {
        out.b2 = out.b1;
    } else {
        out.b2 = (root_n * (s.theta0 - s.theta_star) + root_n * (1.0 - s.w) * (s.delta0 - s.delta_star)) /
                 pooled_scale(v, s.w);
    }
    return out;
}

double power_t1(const PowerScenario& s) {
    const PowerShifts b = power_shifts(s);
    return std_normal_cdf(-(std_normal_quantile(1.0 - s.alpha) + b.b1));
}

double power_t2(const PowerScenario& s) {
    const PowerShifts b = power_shifts(s);
    return std_normal_cdf(-(std_normal_quantile(1.0 - s.alpha) + b.b2));
}

Correlation rho_theoretical(const PowerScenario& s) {
    validate(s);
    if (s.w == 1.0) return Correlation(1.0);
    const VarianceTerms v = variance_terms(s);
    const double rho = (v.treated + s.w * v.internal) / (std::sqrt(v.treated + v.internal) * pooled_scale(v, s.w));
    return Correlation(std::clamp(rho, 0.0, 1.0));
}

double power_combined(const PowerScenario& s, CriticalKind critical) {
    const PowerShifts b = power_shifts(s);
    const Correlation rho = rho_theoretical(s);
    const double c = critical == CriticalKind::kCorrected ? equicoordinate_quantile(s.alpha, rho)
                                                          : std_normal_quantile(1.0 - s.alpha);
    return union_exceedance(c + b.b1, c + b.b2, rho);
}

double optimal_w(const PowerScenario& s) {
    validate(s);
    const double effect = s.theta_star - s.theta0;
    const double slack = s.delta0 - s.delta_star;
    if (!(effect > 0.0)) fail(ErrorCode::kDomain, "optimal_w requires theta_star > theta0");
    if (!(slack >= 0.0)) fail(ErrorCode::kDomain, "optimal_w requires delta0 >= delta_star");

    const VarianceTerms v = variance_terms(s);
    const double kappa = v.internal / (v.treated + v.internal);
    // Ties go to w = 1.
    if (slack >= kappa * effect) return 1.0;

    const double numer = slack * (v.treated + v.internal) - effect * v.internal;
    const double denom = -effect * (v.external + v.internal) + slack * v.internal;
    return std::clamp(1.0 - numer / denom, 0.0, 1.0);
}

double design_sensitivity(double theta_star, double theta0, double delta_star, double w) {
    if (!(w >= 0.0 && w < 1.0)) fail(ErrorCode::kDomain, "design sensitivity requires w in [0, 1)");
    if (!(theta_star > theta0)) fail(ErrorCode::kDomain, "design sensitivity requires theta_star > theta0");
    return (theta_star - theta0) / (1.0 - w) + delta_star;
}

double power_gap_bound(double alpha, Correlation rho) {
    const double z = std_normal_quantile(1.0 - alpha);
    const double c = equicoordinate_quantile(alpha, rho);
    return std::max(0.0, 1.0 - 2.0 * std_normal_cdf(0.5 * (z - c)));
}

double percent_one_decimal(double p) {
    // Snap away binary noise such as 12.649999999 before the half-up step.
    const double tenths = std::round(p * 1000.0 * 1e6) / 1e6;
    return std::floor(tenths + 0.5) / 10.0;
}

std::string column_label(PowerColumn column, double w) {
    auto fmt_w = [](double v) {
        if (v == 0.25) return std::string("1/4");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return std::string(buf);
    };
    switch (column) {
    case PowerColumn::kT1: return "T1";
    case PowerColumn::kT2: return "T2(" + fmt_w(w) + ")";
    case PowerColumn::kT2Opt: return "T2(wopt)";
    case PowerColumn::kTc: return "Tc(" + fmt_w(w) + ")";
    case PowerColumn::kTcOpt: return "Tc(wopt)";
    case PowerColumn::kNaive: return "naiveTc(" + fmt_w(w) + ")";
    }
    return "?";
}

PowerColumn parse_power_column(const std::string& name) {
    if (name == "t1") return PowerColumn::kT1;
    if (name == "t2") return PowerColumn::kT2;
    if (name == "t2opt") return PowerColumn::kT2Opt;
    if (name == "tc") return PowerColumn::kTc;
    if (name == "tcopt") return PowerColumn::kTcOpt;
    if (name == "naive") return PowerColumn::kNaive;
    fail(ErrorCode::kInvalidArgument, "unknown table column '" + name + "' (expected t1, t2, t2opt, tc, tcopt, naive)");
}

PowerTable generate_table(std::span<const PowerScenario> grid, std::span<const PowerColumn> columns) {
    if (grid.empty()) fail(ErrorCode::kInvalidArgument, "power table grid is empty");
    if (columns.empty()) fail(ErrorCode::kInvalidArgument, "power table needs at least one column");
    PowerTable table;
    table.columns.assign(columns.begin(), columns.end());
    table.rows.reserve(grid.size());
    for (const PowerScenario& s : grid) {
        PowerRow row{s, {}};
        PowerScenario opt = s;
        bool have_opt = false;
        auto with_opt = [&]() -> const PowerScenario& {
            if (!have_opt) {
                opt.w = optimal_w(s);
                have_opt = true;
            }
            return opt;
        };
        for (PowerColumn column : columns) {
            switch (column) {
            case PowerColumn::kT1: row.values.push_back(power_t1(s)); break;
            case PowerColumn::kT2: row.values.push_back(power_t2(s)); break;
            case PowerColumn::kT2Opt: row.values.push_back(power_t2(with_opt())); break;
            case PowerColumn::kTc: row.values.push_back(power_combined(s)); break;
            case PowerColumn::kTcOpt: row.values.push_back(power_combined(with_opt())); break;
            case PowerColumn::kNaive: row.values.push_back(power_combined(s, CriticalKind::kNaive)); break;
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<PowerScenario> expand(const DesignGrid& grid) {
    std::vector<PowerScenario> out;
    for (double delta0 : grid.delta0s) {
        for (std::size_t n1 : grid.n1s) {
            for (double theta_star : grid.theta_stars) {
                const double n0 = std::round(grid.ratio_n0 * static_cast<double>(n1));
                PowerScenario s;
                s.theta_star = theta_star;
                s.theta0 = grid.theta0;
                s.delta_star = grid.delta_star;
                s.delta0 = delta0;
                s.n_r = static_cast<double>(n1) + n0;
                s.pi1 = static_cast<double>(n1) / s.n_r;
                s.n_e = std::round(grid.ratio_ne * static_cast<double>(n1));
                s.sigma1 = grid.sigma1;
                s.sigma0 = grid.sigma0;
                s.sigma_e = grid.sigma_e;
                s.w = grid.w;
                s.alpha = grid.alpha;
                validate(s);
                out.push_back(s);
            }
        }
    }
    return out;
}

DesignGrid power_table_design() {
    DesignGrid g;
    g.theta_stars = {0.2, 0.3, 0.4};
    g.delta0s = {0.2, 0.3, 0.4, 0.6};
    g.n1s = {50, 100, 150, 200};
    g.delta_star = 0.2;
    return g;
}

DesignGrid type1_table_design() {
    DesignGrid g = power_table_design();
    g.theta_stars = {0.0};
    return g;
}

} // namespace excon
