#include "excon/matching.hpp"

#include "excon/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace excon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxNewtonIterations = 50;
constexpr double kNewtonTolerance = 1e-8;
// A standardized coefficient this large means the likelihood is still climbing towards 0.
constexpr double kDivergentCoefficient = 25.0;

double column_sd(const Eigen::VectorXd& col) {
    const double mean = col.mean();
    if (col.size() < 2) return 0.0;
    return std::sqrt((col.array() - mean).square().sum() / static_cast<double>(col.size() - 1));
}

double log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = x * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        // log(1 + e^eta) without overflow
        const double e = eta[i];
        const double softplus = e > 0.0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
        ll += y[i] * e - softplus;
    }
    return ll;
}

Eigen::VectorXd fitted(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
    return (x * beta).unaryExpr([](double e) { return 1.0 / (1.0 + std::exp(-e)); });
}

// Covariate whose values alone put the two groups on opposite sides of a cut.
std::optional<std::size_t> separating_column(const CovariateMatrix& data) {
    for (Eigen::Index j = 0; j < data.values.cols(); ++j) {
        double t_min = kInf, t_max = -kInf, e_min = kInf, e_max = -kInf;
        for (Eigen::Index i = 0; i < data.values.rows(); ++i) {
            const double v = data.values(i, j);
            if (data.group[static_cast<std::size_t>(i)] == Group::kRctTreated) {
                t_min = std::min(t_min, v);
                t_max = std::max(t_max, v);
            } else {
                e_min = std::min(e_min, v);
                e_max = std::max(e_max, v);
            }
        }
        if (t_max < e_min || e_max < t_min) return static_cast<std::size_t>(j);
    }
    return std::nullopt;
}

// Average ranks (1-based) with ties sharing the mean of their positions.
Eigen::VectorXd average_ranks(const Eigen::VectorXd& v) {
    const auto n = static_cast<std::size_t>(v.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    Eigen::VectorXd ranks(v.size());
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

} // namespace

void validate(const CovariateMatrix& data) {
    if (data.values.cols() < 1 || data.names.size() != static_cast<std::size_t>(data.values.cols()))
        fail(ErrorCode::kData, "covariate matrix needs at least one named covariate");
    if (data.group.size() != static_cast<std::size_t>(data.values.rows()))
        fail(ErrorCode::kData, "covariate matrix: one group label per row required");
    if (!data.values.allFinite()) fail(ErrorCode::kData, "covariate matrix contains missing or non-finite values");
    if (rows_in(data, Group::kRctTreated).size() < 2 || rows_in(data, Group::kExternalPool).size() < 2)
        fail(ErrorCode::kInsufficientData, "matching needs at least 2 treated and 2 external subjects");
}

std::vector<std::size_t> rows_in(const CovariateMatrix& data, Group g) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < data.group.size(); ++i)
        if (data.group[i] == g) out.push_back(i);
    return out;
}

CovariateMatrix without_covariates(const CovariateMatrix& data, std::span<const std::string> names) {
    for (const std::string& name : names)
        if (std::find(data.names.begin(), data.names.end(), name) == data.names.end())
            fail(ErrorCode::kInvalidArgument, "unknown covariate '" + name + "'");
    std::vector<Eigen::Index> keep;
    CovariateMatrix out;
    out.group = data.group;
    for (std::size_t j = 0; j < data.names.size(); ++j) {
        if (std::find(names.begin(), names.end(), data.names[j]) != names.end()) continue;
        keep.push_back(static_cast<Eigen::Index>(j));
        out.names.push_back(data.names[j]);
    }
    out.values = data.values(Eigen::all, keep);
    return out;
}

double PropensityModel::linear_predictor(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    double eta = intercept;
    for (std::size_t j = 0; j < coefficients.size(); ++j) eta += coefficients[j] * x[static_cast<Eigen::Index>(j)];
    return eta;
}

PropensityModel fit_propensity(const CovariateMatrix& data) {
    validate(data);
    const Eigen::Index n = data.values.rows();
    const Eigen::Index p = data.values.cols();

    if (auto j = separating_column(data))
        fail(ErrorCode::kSeparation, "propensity model: covariate '" + data.names[*j] + "' perfectly separates the groups");

    // Standardized design with intercept.
    Eigen::VectorXd mean(p), sd(p);
    Eigen::MatrixXd x(n, p + 1);
    x.col(0).setOnes();
    for (Eigen::Index j = 0; j < p; ++j) {
        mean[j] = data.values.col(j).mean();
        sd[j] = column_sd(data.values.col(j));
        if (!(sd[j] > 0.0))
            fail(ErrorCode::kCollinearity, "propensity model: covariate '" + data.names[static_cast<std::size_t>(j)] + "' is constant");
        x.col(j + 1) = (data.values.col(j).array() - mean[j]) / sd[j];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < p + 1) fail(ErrorCode::kCollinearity, "propensity model: covariates are collinear");

    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = data.group[static_cast<std::size_t>(i)] == Group::kRctTreated ? 1.0 : 0.0;

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
    const double share = y.mean();
    beta[0] = std::log(share / (1.0 - share));

    PropensityModel model;
    double ll = log_likelihood(x, y, beta);
    model.loglik_trace.push_back(ll);
    Eigen::MatrixXd info;

    for (std::size_t iter = 1; iter <= kMaxNewtonIterations; ++iter) {
        const Eigen::VectorXd prob = fitted(x, beta);
        const Eigen::VectorXd weight = prob.array() * (1.0 - prob.array());
        info = x.transpose() * weight.asDiagonal() * x;
        const Eigen::VectorXd step = info.ldlt().solve(x.transpose() * (y - prob));

        double scale = 1.0;
        Eigen::VectorXd next = beta + step;
        double next_ll = log_likelihood(x, y, next);
        while (next_ll < ll && scale > 1e-10) {
            scale *= 0.5;
            next = beta + scale * step;
            next_ll = log_likelihood(x, y, next);
        }
        const double change = (scale * step).cwiseAbs().maxCoeff();
        if (next_ll >= ll) {
            beta = next;
            ll = next_ll;
        }
        model.loglik_trace.push_back(ll);
        model.n_iterations = iter;

        if (beta.tail(p).cwiseAbs().maxCoeff() > kDivergentCoefficient) {
            Eigen::Index worst = 0;
            beta.tail(p).cwiseAbs().maxCoeff(&worst);
            fail(ErrorCode::kSeparation, "propensity model diverges (quasi-complete separation), driven by covariate '" +
                                             data.names[static_cast<std::size_t>(worst)] + "'");
        }
        if (change < kNewtonTolerance) {
            model.converged = true;
            break;
        }
    }

    const Eigen::VectorXd prob = fitted(x, beta);
    const Eigen::VectorXd weight = prob.array() * (1.0 - prob.array());
    info = x.transpose() * weight.asDiagonal() * x;
    const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p + 1, p + 1));

    model.intercept = beta[0];
    model.coefficients.resize(static_cast<std::size_t>(p));
    model.std_errors.resize(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto k = static_cast<std::size_t>(j);
        model.coefficients[k] = beta[j + 1] / sd[j];
        model.std_errors[k] = std::sqrt(cov(j + 1, j + 1)) / sd[j];
        model.intercept -= beta[j + 1] * mean[j] / sd[j];
    }
    return model;
}

Eigen::VectorXd logit_scores(const PropensityModel& model, const CovariateMatrix& data) {
    if (model.coefficients.size() != static_cast<std::size_t>(data.values.cols()))
        fail(ErrorCode::kInvalidArgument, "propensity model does not match the covariate matrix");
    Eigen::VectorXd out(data.values.rows());
    for (Eigen::Index i = 0; i < data.values.rows(); ++i) out[i] = model.linear_predictor(data.values.row(i));
    return out;
}

DistanceMatrix robust_mahalanobis(const CovariateMatrix& data) {
    validate(data);
    const Eigen::Index n = data.values.rows();
    const Eigen::Index p = data.values.cols();

    Eigen::MatrixXd ranks(n, p);
    for (Eigen::Index j = 0; j < p; ++j) ranks.col(j) = average_ranks(data.values.col(j));

    const Eigen::MatrixXd centered = ranks.rowwise() - ranks.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);

    // Rescale so tied columns carry the variance of untied ranks 1..n.
    const double untied = static_cast<double>(n) * static_cast<double>(n + 1) / 12.0;
    Eigen::VectorXd scale(p);
    for (Eigen::Index j = 0; j < p; ++j) scale[j] = cov(j, j) > 0.0 ? std::sqrt(untied / cov(j, j)) : 1.0;
    cov = scale.asDiagonal() * cov * scale.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const double max_ev = eig.eigenvalues().maxCoeff();
    if (!(max_ev > 0.0)) fail(ErrorCode::kComputation, "rank covariance is zero (all covariates constant)");
    if (eig.eigenvalues().minCoeff() < 1e-10 * max_ev) {
        cov.diagonal().array() += 1e-8 * cov.trace() / static_cast<double>(p);
        eig.compute(cov);
        if (!(eig.eigenvalues().minCoeff() > 0.0)) fail(ErrorCode::kComputation, "rank covariance is singular");
    }
    const Eigen::MatrixXd precision = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
                                      eig.eigenvectors().transpose();

    DistanceMatrix out;
    out.treated_rows = rows_in(data, Group::kRctTreated);
    out.external_rows = rows_in(data, Group::kExternalPool);
    out.values.resize(static_cast<Eigen::Index>(out.treated_rows.size()), static_cast<Eigen::Index>(out.external_rows.size()));
    for (std::size_t a = 0; a < out.treated_rows.size(); ++a) {
        for (std::size_t b = 0; b < out.external_rows.size(); ++b) {
            const Eigen::RowVectorXd diff =
                ranks.row(static_cast<Eigen::Index>(out.treated_rows[a])) - ranks.row(static_cast<Eigen::Index>(out.external_rows[b]));
            out.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                std::max(0.0, (diff * precision * diff.transpose())(0, 0));
        }
    }
    return out;
}

DistanceMatrix apply_caliper(const DistanceMatrix& dist, const PropensityModel& model, const CovariateMatrix& data,
                             double caliper_sd) {
    const Eigen::VectorXd logits = logit_scores(model, data);
    return apply_caliper(dist, std::span<const double>(logits.data(), static_cast<std::size_t>(logits.size())), caliper_sd);
}

DistanceMatrix apply_caliper(const DistanceMatrix& dist, std::span<const double> logits, double caliper_sd) {
    if (!(caliper_sd > 0.0)) fail(ErrorCode::kDomain, "caliper width must be positive");
    DistanceMatrix out = dist;
    if (caliper_sd == kInf) return out;

    std::vector<std::size_t> used = dist.treated_rows;
    used.insert(used.end(), dist.external_rows.begin(), dist.external_rows.end());
    Eigen::VectorXd scores(static_cast<Eigen::Index>(used.size()));
    for (std::size_t k = 0; k < used.size(); ++k) {
        if (used[k] >= logits.size()) fail(ErrorCode::kInvalidArgument, "caliper: logit scores do not cover all rows");
        scores[static_cast<Eigen::Index>(k)] = logits[used[k]];
    }
    const double width = caliper_sd * column_sd(scores);

    double max_finite = 0.0;
    for (Eigen::Index i = 0; i < dist.values.size(); ++i)
        if (std::isfinite(dist.values.data()[i])) max_finite = std::max(max_finite, dist.values.data()[i]);
    const double penalty = 1000.0 * (max_finite > 0.0 ? max_finite : 1.0);

    for (std::size_t a = 0; a < dist.treated_rows.size(); ++a)
        for (std::size_t b = 0; b < dist.external_rows.size(); ++b)
            if (std::abs(logits[dist.treated_rows[a]] - logits[dist.external_rows[b]]) > width)
                out.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += penalty;
    return out;
}

std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost) {
    // Shortest augmenting path Hungarian method with potentials, O(n^2 m).
    const auto n = static_cast<std::size_t>(cost.rows());
    const auto m = static_cast<std::size_t>(cost.cols());
    if (n > m) fail(ErrorCode::kInfeasible, "matching needs at least as many external as treated subjects");
    if (!cost.allFinite()) fail(ErrorCode::kInvalidArgument, "assignment costs must be finite");

    // 1-based arrays; column 0 is a virtual start.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        owner[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = owner[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> assignment(n, 0);
    for (std::size_t j = 1; j <= m; ++j)
        if (owner[j] != 0) assignment[owner[j] - 1] = j - 1;
    return assignment;
}

MatchResult optimal_pair_match(const DistanceMatrix& dist) {
    const std::vector<std::size_t> cols = solve_assignment(dist.values);
    MatchResult out;
    for (std::size_t a = 0; a < cols.size(); ++a) {
        const double d = dist.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(cols[a]));
        const std::size_t treated = a < dist.treated_rows.size() ? dist.treated_rows[a] : a;
        const std::size_t external = cols[a] < dist.external_rows.size() ? dist.external_rows[cols[a]] : cols[a];
        out.pairs.push_back({treated, external, d});
        out.total_distance += d;
    }
    return out;
}

std::vector<double> standardized_mean_difference(const Eigen::MatrixXd& treated, const Eigen::MatrixXd& control) {
    if (treated.rows() < 2 || control.rows() < 2) fail(ErrorCode::kInsufficientData, "SMD needs at least 2 rows per side");
    if (treated.cols() != control.cols()) fail(ErrorCode::kInvalidArgument, "SMD: column counts differ");
    std::vector<double> out;
    for (Eigen::Index j = 0; j < treated.cols(); ++j) {
        const double diff = treated.col(j).mean() - control.col(j).mean();
        const double st = column_sd(treated.col(j));
        const double sc = column_sd(control.col(j));
        const double pooled = std::sqrt(0.5 * (st * st + sc * sc));
        if (pooled > 0.0) out.push_back(diff / pooled);
        else if (diff == 0.0) out.push_back(0.0);
        else out.push_back(diff > 0.0 ? kInf : -kInf);
    }
    return out;
}

MatchResult match_pipeline(const CovariateMatrix& data, const MatchOptions& options) {
    const PropensityModel model = fit_propensity(data);
    const DistanceMatrix raw = robust_mahalanobis(data);
    const DistanceMatrix dist = apply_caliper(raw, model, data, options.caliper_sd);
    MatchResult out = optimal_pair_match(dist);

    std::vector<Eigen::Index> treated, matched;
    for (std::size_t k = 0; k < out.pairs.size(); ++k) {
        treated.push_back(static_cast<Eigen::Index>(out.pairs[k].treated_row));
        matched.push_back(static_cast<Eigen::Index>(out.pairs[k].external_row));
        const auto a = static_cast<Eigen::Index>(k);
        const Eigen::Index b = static_cast<Eigen::Index>(
            std::find(dist.external_rows.begin(), dist.external_rows.end(), out.pairs[k].external_row) - dist.external_rows.begin());
        if (dist.values(a, b) != raw.values(a, b)) ++out.caliper_violations;
    }
    out.balance = standardized_mean_difference(data.values(treated, Eigen::all), data.values(matched, Eigen::all));
    return out;
}

std::vector<BenchmarkEntry> omit_one_benchmark(const CovariateMatrix& data, std::span<const double> outcomes,
                                               double internal_control_mean,
                                               std::span<const std::string> covariate_names,
                                               const MatchOptions& options) {
    if (outcomes.size() != static_cast<std::size_t>(data.values.rows()))
        fail(ErrorCode::kInvalidArgument, "benchmark: one outcome per covariate row required");
    auto bias_of = [&](const CovariateMatrix& d) {
        const MatchResult m = match_pipeline(d, options);
        double sum = 0.0;
        for (const MatchPair& pair : m.pairs) sum += outcomes[pair.external_row];
        return internal_control_mean - sum / static_cast<double>(m.pairs.size());
    };
    std::vector<BenchmarkEntry> out;
    out.push_back({"", bias_of(data)});
    for (const std::string& name : covariate_names) {
        const std::string omit[] = {name};
        const CovariateMatrix reduced = without_covariates(data, omit);
        if (reduced.names.empty()) fail(ErrorCode::kInvalidArgument, "benchmark: cannot omit the only covariate");
        out.push_back({name, bias_of(reduced)});
    }
    return out;
}

} // namespace excon
