#pragma once

// Synthetic matching data with one planted confounder: it shifts both group
// membership and the control outcome. The remaining covariates are noise.

#include "excon/matching.hpp"

#include <random>
#include <string>
#include <vector>

namespace testdata {

struct PlantedData {
    excon::CovariateMatrix matrix;
    std::vector<double> outcomes;  // by matrix row; meaningful for external rows
    double internal_control_mean = 0.0;
};

inline PlantedData planted_confounder(std::uint64_t seed, std::size_t n_treated = 40, std::size_t n_external = 120,
                                      std::size_t n_noise = 3) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    const double shift = 0.8, slope = 1.0, noise_sd = 0.5;

    PlantedData d;
    d.matrix.names.push_back("confounder");
    for (std::size_t k = 1; k <= n_noise; ++k) d.matrix.names.push_back("noise" + std::to_string(k));
    const std::size_t p = d.matrix.names.size();
    const std::size_t n = n_treated + n_external;
    d.matrix.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    d.outcomes.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const bool treated = i < n_treated;
        d.matrix.group.push_back(treated ? excon::Group::kRctTreated : excon::Group::kExternalPool);
        const double c = (treated ? shift : 0.0) + z(rng);
        d.matrix.values(static_cast<Eigen::Index>(i), 0) = c;
        for (std::size_t k = 1; k < p; ++k) d.matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = z(rng);
        d.outcomes[i] = slope * c + noise_sd * z(rng);
    }
    // Internal controls share the treated covariate distribution.
    double total = 0.0;
    for (std::size_t i = 0; i < n_treated; ++i) total += slope * (shift + z(rng)) + noise_sd * z(rng);
    d.internal_control_mean = total / static_cast<double>(n_treated);
    return d;
}

} // namespace testdata
