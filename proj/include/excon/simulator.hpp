#pragma once

// Seeded Monte Carlo estimation of rejection rates.
//
// Every replication owns a random stream derived from (seed, replication
// index), so results do not depend on how replications are scheduled
// across threads.

#include "excon/power.hpp"
#include "excon/tests_core.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace excon {

class ReplicationStream {
public:
    ReplicationStream(std::uint64_t seed, std::uint64_t replication);

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double next_uniform();
    /// Standard normal by inversion.
    double next_normal();
    /// Uniform integer in [0, n).
    std::size_t next_index(std::size_t n);

private:
    std::mt19937_64 engine_;
};

struct SimDataset {
    std::vector<double> treated;
    std::vector<double> internal;
    std::vector<double> external;
};

/// Treated ~ N(0, sigma1^2), internal ~ N(-theta*, sigma0^2), external ~ N(-theta* - delta*, sigma_e^2).
SimDataset draw_dataset(const PowerScenario& scenario, ReplicationStream& stream);

enum class SimTestKind { kT1, kT2, kTc, kNaive };

struct SimTest {
    SimTestKind kind = SimTestKind::kT1;
    double w = 1.0;
    double delta0 = 0.0;
};

std::string sim_test_label(const SimTest& test);

struct SimSpec {
    PowerScenario scenario;
    std::size_t n_reps = 0;
    std::uint64_t seed = 0;
    std::vector<SimTest> tests;
};

struct RejectionEstimate {
    double rate = 0.0;
    double mc_se = 0.0;  // sqrt(rate (1 - rate) / n_reps)
    std::size_t n_reps = 0;
};

RejectionEstimate make_estimate(std::size_t rejections, std::size_t n_reps);

/// Empirical rejection rate of each test in spec.tests, in the same order.
/// threads = 0 picks the hardware concurrency.
std::vector<RejectionEstimate> estimate_rejection(const SimSpec& spec, unsigned threads = 0);

/// Internal RCT outcomes plus, for each treated subject, the outcomes of the
/// external controls matched to it.
struct SubsampleData {
    std::vector<double> treated;
    std::vector<double> control;
    std::vector<std::vector<double>> matched_external;  // parallel to treated
};

struct SubsampleOptions {
    std::size_t n_sub = 100;
    double treated_ratio = 0.8;
    std::size_t n_reps = 1000;
    std::uint64_t seed = 0;
    double alpha = 0.025;
    double theta0 = 0.0;
    Direction direction = Direction::kGreater;
    std::vector<double> delta0s;
    std::optional<double> w;  // nullopt: n0 / (n0 + ne) of each subsample
};

struct SubsampleResult {
    std::vector<double> delta0s;
    RejectionEstimate t1;
    std::vector<RejectionEstimate> t2;  // parallel to delta0s
    std::vector<RejectionEstimate> tc;  // parallel to delta0s
    std::size_t redraws = 0;            // degenerate resamples that were drawn again
};

/// Resamples the RCT with replacement (round(n_sub * ratio) treated, the rest
/// control), carries the externals matched to the sampled treated subjects and
/// reruns T1, T2 and the combined test. A degenerate resample is redrawn up to
/// 100 times before failing with kConfiguration.
SubsampleResult subsample_power_study(const SubsampleData& data, const SubsampleOptions& options);

} // namespace excon
