#include "excon/simulator.hpp"

#include "excon/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>

namespace excon {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

constexpr std::size_t kMaxRedraws = 100;

void fill_normal(std::vector<double>& out, std::size_t n, double mean, double sd, ReplicationStream& stream) {
    out.resize(n);
    for (double& v : out) v = mean + sd * stream.next_normal();
}

bool decide(const SimTest& test, const ArmSummary& t, const ArmSummary& i, const ArmSummary& e, double theta0,
            double alpha) {
    switch (test.kind) {
    case SimTestKind::kT1: return single_test(t1_statistic(t, i, theta0), alpha).reject;
    case SimTestKind::kT2: return single_test(pooled_statistic(t, i, e, theta0, test.w, test.delta0), alpha).reject;
    case SimTestKind::kTc: {
        TestConfig cfg;
        cfg.alpha = alpha;
        cfg.theta0 = theta0;
        cfg.w = test.w;
        cfg.delta0 = test.delta0;
        return combined_test(t, i, e, cfg).reject;
    }
    case SimTestKind::kNaive: {
        const double m =
            std::max(t1_statistic(t, i, theta0), pooled_statistic(t, i, e, theta0, test.w, test.delta0));
        return m >= std_normal_quantile(1.0 - alpha);
    }
    }
    return false;
}

unsigned resolve_threads(unsigned requested, std::size_t work) {
    unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, work)));
}

// Runs body(rep, counts) for rep in [0, n_reps) across threads and sums the
// per-thread integer counts, so the result is schedule-invariant.
template <typename Body>
std::vector<std::size_t> parallel_count(std::size_t n_reps, std::size_t n_counters, unsigned threads, Body body) {
    const unsigned n_threads = resolve_threads(threads, n_reps);
    std::vector<std::vector<std::size_t>> partial(n_threads, std::vector<std::size_t>(n_counters, 0));
    std::vector<std::exception_ptr> errors(n_threads);
    auto run = [&](unsigned tid) {
        try {
            const std::size_t begin = n_reps * tid / n_threads;
            const std::size_t end = n_reps * (tid + 1) / n_threads;
            for (std::size_t rep = begin; rep < end; ++rep) body(rep, partial[tid]);
        } catch (...) {
            errors[tid] = std::current_exception();
        }
    };
    if (n_threads == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned tid = 0; tid < n_threads; ++tid) pool.emplace_back(run, tid);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<std::size_t> total(n_counters, 0);
    for (const auto& p : partial)
        for (std::size_t k = 0; k < n_counters; ++k) total[k] += p[k];
    return total;
}

} // namespace

ReplicationStream::ReplicationStream(std::uint64_t seed, std::uint64_t replication)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(replication + 0x632BE59BD9B4E019ull))) {}

double ReplicationStream::next_uniform() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double ReplicationStream::next_normal() { return std_normal_quantile(next_uniform()); }

std::size_t ReplicationStream::next_index(std::size_t n) {
    // Rejection sampling: unbiased and identical on every platform.
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % range);
}

SimDataset draw_dataset(const PowerScenario& scenario, ReplicationStream& stream) {
    validate(scenario);
    SimDataset d;
    fill_normal(d.treated, treated_count(scenario), 0.0, scenario.sigma1, stream);
    fill_normal(d.internal, internal_count(scenario), -scenario.theta_star, scenario.sigma0, stream);
    fill_normal(d.external, external_count(scenario), -scenario.theta_star - scenario.delta_star, scenario.sigma_e,
                stream);
    return d;
}

std::string sim_test_label(const SimTest& test) {
    char buf[96];
    switch (test.kind) {
    case SimTestKind::kT1: return "T1";
    case SimTestKind::kT2: std::snprintf(buf, sizeof buf, "T2(w=%.4g,d0=%.4g)", test.w, test.delta0); break;
    case SimTestKind::kTc: std::snprintf(buf, sizeof buf, "Tc(w=%.4g,d0=%.4g)", test.w, test.delta0); break;
    case SimTestKind::kNaive: std::snprintf(buf, sizeof buf, "naiveTc(w=%.4g,d0=%.4g)", test.w, test.delta0); break;
    }
    return buf;
}

RejectionEstimate make_estimate(std::size_t rejections, std::size_t n_reps) {
    if (n_reps == 0) fail(ErrorCode::kInvalidArgument, "rejection estimate needs n_reps >= 1");
    const double rate = static_cast<double>(rejections) / static_cast<double>(n_reps);
    return {rate, std::sqrt(rate * (1.0 - rate) / static_cast<double>(n_reps)), n_reps};
}

std::vector<RejectionEstimate> estimate_rejection(const SimSpec& spec, unsigned threads) {
    validate(spec.scenario);
    if (spec.n_reps == 0) fail(ErrorCode::kInvalidArgument, "simulation needs n_reps >= 1");
    if (spec.tests.empty()) fail(ErrorCode::kInvalidArgument, "simulation needs at least one test");
    for (const SimTest& t : spec.tests)
        if (!(t.w >= 0.0 && t.w <= 1.0) || !(t.delta0 >= 0.0)) fail(ErrorCode::kDomain, "simulated test has invalid w or delta0");

    const auto counts = parallel_count(spec.n_reps, spec.tests.size(), threads, [&](std::size_t rep, auto& local) {
        ReplicationStream stream(spec.seed, rep);
        const SimDataset d = draw_dataset(spec.scenario, stream);
        const ArmSummary t = summarize(d.treated);
        const ArmSummary i = summarize(d.internal);
        const ArmSummary e = summarize(d.external);
        for (std::size_t k = 0; k < spec.tests.size(); ++k)
            if (decide(spec.tests[k], t, i, e, spec.scenario.theta0, spec.scenario.alpha)) ++local[k];
    });

    std::vector<RejectionEstimate> out;
    out.reserve(counts.size());
    for (std::size_t c : counts) out.push_back(make_estimate(c, spec.n_reps));
    return out;
}

SubsampleResult subsample_power_study(const SubsampleData& data, const SubsampleOptions& options) {
    if (options.n_reps == 0) fail(ErrorCode::kInvalidArgument, "subsample study needs n_reps >= 1");
    if (!(options.treated_ratio >= 0.0 && options.treated_ratio <= 1.0))
        fail(ErrorCode::kDomain, "treated ratio must lie in [0, 1]");
    if (options.direction == Direction::kTwoSided)
        fail(ErrorCode::kConfiguration, "subsample study needs a one-sided direction");
    if (data.matched_external.size() != data.treated.size())
        fail(ErrorCode::kInvalidArgument, "matched externals must be given per treated subject");
    if (options.delta0s.empty()) fail(ErrorCode::kInvalidArgument, "subsample study needs at least one delta0");
    if (data.treated.empty() || data.control.empty())
        fail(ErrorCode::kInsufficientData, "subsample study needs treated and control subjects");

    const std::size_t n_treated = static_cast<std::size_t>(
        std::llround(options.treated_ratio * static_cast<double>(options.n_sub)));
    const std::size_t n_control = options.n_sub - std::min(options.n_sub, n_treated);
    const std::size_t n_delta = options.delta0s.size();

    // counters: [t1, t2 x n_delta, tc x n_delta, redraws]
    const auto counts =
        parallel_count(options.n_reps, 2 + 2 * n_delta, 1, [&](std::size_t rep, auto& local) {
            for (std::size_t attempt = 0;; ++attempt) {
                if (attempt == kMaxRedraws)
                    fail(ErrorCode::kConfiguration, "subsample study: no usable resample after 100 redraws "
                                                    "(check n_sub and treated_ratio)");
                ReplicationStream stream(options.seed, rep * kMaxRedraws + attempt);
                std::vector<double> treated, control, external;
                treated.reserve(n_treated);
                for (std::size_t k = 0; k < n_treated; ++k) {
                    const std::size_t idx = stream.next_index(data.treated.size());
                    treated.push_back(data.treated[idx]);
                    for (double y : data.matched_external[idx]) external.push_back(y);
                }
                for (std::size_t k = 0; k < n_control; ++k) control.push_back(data.control[stream.next_index(data.control.size())]);
                try {
                    const ArmSummary t = summarize(treated);
                    const ArmSummary c = summarize(control);
                    const ArmSummary e = summarize(external);
                    TestConfig cfg;
                    cfg.alpha = options.alpha;
                    cfg.theta0 = options.theta0;
                    cfg.direction = options.direction;
                    cfg.w = options.w;
                    for (std::size_t j = 0; j < n_delta; ++j) {
                        cfg.delta0 = options.delta0s[j];
                        const TestOutcome out = combined_test(t, c, e, cfg);
                        if (j == 0 && single_test(out.t1, options.alpha).reject) ++local[0];
                        if (single_test(out.t2_adj, options.alpha).reject) ++local[1 + j];
                        if (out.reject) ++local[1 + n_delta + j];
                    }
                    return;
                } catch (const Error& err) {
                    if (err.code() != ErrorCode::kInsufficientData && err.code() != ErrorCode::kDegenerateVariance)
                        throw;
                    ++local[1 + 2 * n_delta];
                }
            }
        });

    SubsampleResult out;
    out.delta0s = options.delta0s;
    out.t1 = make_estimate(counts[0], options.n_reps);
    for (std::size_t j = 0; j < n_delta; ++j) {
        out.t2.push_back(make_estimate(counts[1 + j], options.n_reps));
        out.tc.push_back(make_estimate(counts[1 + n_delta + j], options.n_reps));
    }
    out.redraws = counts[1 + 2 * n_delta];
    return out;
}

} // namespace excon
