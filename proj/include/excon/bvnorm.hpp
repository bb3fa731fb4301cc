#pragma once

// Standard normal and bivariate standard normal distribution functions.
//
// Everything here is pure and thread-safe. Bivariate probabilities use the
// Drezner-Wesolowsky single-integral reduction with Gauss-Legendre
// quadrature as refined by Genz, accurate to roughly 1e-15 absolute.

namespace excon {

/// Correlation coefficient of a bivariate standard normal, in [-1, 1].
class Correlation {
public:
    explicit Correlation(double rho);
    double value() const noexcept { return rho_; }

private:
    double rho_;
};

/// Phi(x). Throws kDomain for non-finite x.
double std_normal_cdf(double x);

/// Phi^{-1}(p) for p in (0, 1). Throws kDomain otherwise.
double std_normal_quantile(double p);

/// P(X <= x, Y <= y) for a standard bivariate normal with correlation rho.
/// x and y may be +/- infinity.
double bvn_lower_cdf(double x, double y, Correlation rho);

/// P(X > x, Y > y). Computed directly, so small upper-orthant probabilities
/// keep their relative accuracy.
double bvn_upper_cdf(double x, double y, Correlation rho);

/// The c with Phi2_rho(c, c) = 1 - alpha, for 0 < alpha < 0.5 and rho in [0, 1].
/// Always lies in [z_{1-alpha}, z_{1-alpha/2}].
double equicoordinate_quantile(double alpha, Correlation rho);

/// P(max(X, Y) >= m) = 1 - Phi2_rho(m, m).
double max_exceedance(double m, Correlation rho);

} // namespace excon
