#pragma once

// Closed-form large-sample power and type I error for T1, the bias-adjusted
// pooled test T2_{delta0}(w) and the combined max-test, together with the
// power-optimal weight and design sensitivity.
//
// All probabilities are returned as fractions in [0, 1]; percent rounding
// happens only when tables are rendered.

#include "excon/bvnorm.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace excon {

/// Population-level description of one design point.
struct PowerScenario {
    double theta_star = 0.0;  // true treatment effect
    double theta0 = 0.0;      // null margin
    double delta_star = 0.0;  // true internal-minus-external control bias
    double delta0 = 0.0;      // assumed bias bound
    double n_r = 0.0;         // RCT size
    double pi1 = 0.5;         // treated fraction of the RCT
    double n_e = 0.0;         // external controls
    double sigma1 = 1.0;
    double sigma0 = 1.0;
    double sigma_e = 1.0;
    double w = 1.0;
    double alpha = 0.025;

    double pi0() const { return 1.0 - pi1; }
};

void validate(const PowerScenario& s);

/// Treated and internal-control counts implied by n_r and pi1.
std::size_t treated_count(const PowerScenario& s);
std::size_t internal_count(const PowerScenario& s);
std::size_t external_count(const PowerScenario& s);

/// Mean shifts of T1 and T2_{delta0}(w) relative to their null centering.
struct PowerShifts {
    double b1 = 0.0;
    double b2 = 0.0;
};

PowerShifts power_shifts(const PowerScenario& s);

double power_t1(const PowerScenario& s);
double power_t2(const PowerScenario& s);
Correlation rho_theoretical(const PowerScenario& s);

enum class CriticalKind { kCorrected, kNaive };

/// kCorrected uses c_{1-alpha; rho}; kNaive uses z_{1-alpha} (no multiplicity correction).
double power_combined(const PowerScenario& s, CriticalKind critical = CriticalKind::kCorrected);

/// Weight maximizing power_t2. Requires theta_star > theta0 and delta0 >= delta_star.
double optimal_w(const PowerScenario& s);

/// (theta_star - theta0) / (1 - w) + delta_star; the bias bound separating
/// limiting power 1 from limiting power 0 for the pooled test. Requires w < 1.
double design_sensitivity(double theta_star, double theta0, double delta_star, double w);

/// Upper bound on max(power_t1, power_t2) - power_combined.
double power_gap_bound(double alpha, Correlation rho);

/// Half-up rounding of a probability to one decimal of percent: 0.12642 -> 12.6.
double percent_one_decimal(double p);

enum class PowerColumn { kT1, kT2, kT2Opt, kTc, kTcOpt, kNaive };

std::string column_label(PowerColumn column, double w);
PowerColumn parse_power_column(const std::string& name);

struct PowerRow {
    PowerScenario scenario;
    std::vector<double> values;  // one per table column, full precision
};

struct PowerTable {
    std::vector<PowerColumn> columns;
    std::vector<PowerRow> rows;
};

PowerTable generate_table(std::span<const PowerScenario> grid, std::span<const PowerColumn> columns);

/// A factorial design in the n1 : n0 : ne parameterization used by the power tables.
struct DesignGrid {
    std::vector<double> theta_stars;
    std::vector<double> delta0s;
    std::vector<std::size_t> n1s;
    double ratio_n0 = 0.5;  // n0 / n1
    double ratio_ne = 1.5;  // ne / n1
    double theta0 = 0.0;
    double delta_star = 0.0;
    double sigma1 = 1.0;
    double sigma0 = 1.0;
    double sigma_e = 1.0;
    double w = 0.25;
    double alpha = 0.025;
};

/// Scenarios ordered by delta0, then n1, then theta_star.
std::vector<PowerScenario> expand(const DesignGrid& grid);

/// theta_star = 0.2..0.4, delta0 = 0.2..0.6, n1 = 50..200, 2:1:3, unit SDs, w = 1/4, alpha = 2.5%.
DesignGrid power_table_design();

/// Same sizes and deltas with theta_star = theta0 = 0 (type I error).
DesignGrid type1_table_design();

} // namespace excon
