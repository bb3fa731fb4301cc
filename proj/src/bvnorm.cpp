#include "excon/bvnorm.hpp"

#include "excon/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

namespace excon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Correlations this close to +/-1 are treated as exactly degenerate.
constexpr double kRhoClamp = 1e-12;

// Phi with infinities allowed.
double phi(double x) {
    if (x == kInf) return 1.0;
    if (x == -kInf) return 0.0;
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Gauss-Legendre abscissae/weights on [-1, 1], positive half only.
constexpr std::array<double, 3> kW6 = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr std::array<double, 3> kX6 = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
constexpr std::array<double, 6> kW12 = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                        0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
constexpr std::array<double, 6> kX12 = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                                        0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
constexpr std::array<double, 10> kW20 = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                         0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                                         0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                                         0.1527533871307259};
constexpr std::array<double, 10> kX20 = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                                         0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                                         0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                                         0.07652652113349733};

template <std::size_t N, typename F>
double gauss_legendre_sum(const std::array<double, N>& w, const std::array<double, N>& x, F&& f) {
    // Nodes mapped to (0, 2): {1 - x_i, 1 + x_i}.
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += w[i] * (f(1.0 - x[i]) + f(1.0 + x[i]));
    return s;
}

template <typename F>
double gl_sum(double abs_rho, F&& f) {
    if (abs_rho < 0.3) return gauss_legendre_sum(kW6, kX6, f);
    if (abs_rho < 0.75) return gauss_legendre_sum(kW12, kX12, f);
    return gauss_legendre_sum(kW20, kX20, f);
}

// Upper orthant P(X > h, Y > k) for finite h, k and |r| < 1 - kRhoClamp.
double upper_orthant(double h, double k, double r) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (r == 0.0) return phi(-h) * phi(-k);

    const double abs_r = std::abs(r);
    double hk = h * k;
    double bvn = 0.0;

    if (abs_r < 0.925) {
        const double hs = 0.5 * (h * h + k * k);
        const double asr = 0.5 * std::asin(r);
        bvn = gl_sum(abs_r, [&](double t) {
            const double sn = std::sin(asr * t);
            return std::exp((sn * hk - hs) / (1.0 - sn * sn));
        });
        return std::clamp(bvn * asr / two_pi + phi(-h) * phi(-k), 0.0, 1.0);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 80.0;
    double asr = -0.5 * (bs / as + hk);
    if (asr > -100.0) bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
    if (hk > -100.0) {
        const double b = std::sqrt(bs);
        const double sp = std::sqrt(two_pi) * phi(-b / a);
        bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
    }
    a *= 0.5;
    const double integral = gl_sum(abs_r, [&](double t) {
        const double xs = (a * t) * (a * t);
        const double e = -0.5 * (bs / xs + hk);
        if (e <= -100.0) return 0.0;
        const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
        const double rs = std::sqrt(1.0 - xs);
        const double ep = std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
        return std::exp(e) * (sp - ep);
    });
    bvn = (a * integral - bvn) / two_pi;

    if (r > 0.0) {
        bvn += phi(-std::max(h, k));
    } else if (h >= k) {
        bvn = -bvn;
    } else {
        const double l = h < 0.0 ? phi(k) - phi(h) : phi(-h) - phi(-k);
        bvn = l - bvn;
    }
    return std::clamp(bvn, 0.0, 1.0);
}

void check_argument(double v) {
    if (std::isnan(v)) fail(ErrorCode::kDomain, "bivariate normal argument is NaN");
}

// Wichura (1988), algorithm AS 241, PPND16.
double ppnd16(double p) {
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                    45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                    21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                   1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                   0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                   0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                   7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

} // namespace

Correlation::Correlation(double rho) : rho_(rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) fail(ErrorCode::kDomain, "correlation must lie in [-1, 1], got " + std::to_string(rho));
}

double std_normal_cdf(double x) {
    if (!std::isfinite(x)) fail(ErrorCode::kDomain, "std_normal_cdf: argument must be finite");
    return phi(x);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::kDomain, "std_normal_quantile: p must lie in (0, 1), got " + std::to_string(p));
    double z = ppnd16(p);
    // One Halley step against the erfc-based cdf, working in the smaller tail.
    if (std::abs(z) < 37.0) {
        const double density = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
        const double e = z < 0.0 ? phi(z) - p : (1.0 - p) - phi(-z);
        const double u = e / density;
        if (std::isfinite(u)) z -= u / (1.0 + 0.5 * z * u);
    }
    return z;
}

double bvn_upper_cdf(double x, double y, Correlation rho) {
    check_argument(x);
    check_argument(y);
    const double r = rho.value();
    if (x == kInf || y == kInf) return 0.0;
    if (x == -kInf) return phi(-y);
    if (y == -kInf) return phi(-x);
    if (r >= 1.0 - kRhoClamp) return phi(-std::max(x, y));
    if (r <= -1.0 + kRhoClamp) return std::max(0.0, phi(-x) - phi(y));
    return upper_orthant(x, y, r);
}

double bvn_lower_cdf(double x, double y, Correlation rho) {
    check_argument(x);
    check_argument(y);
    const double r = rho.value();
    if (x == -kInf || y == -kInf) return 0.0;
    if (x == kInf) return phi(y);
    if (y == kInf) return phi(x);
    if (r >= 1.0 - kRhoClamp) return phi(std::min(x, y));
    if (r <= -1.0 + kRhoClamp) return std::max(0.0, phi(x) + phi(y) - 1.0);
    return upper_orthant(-x, -y, r);
}

double max_exceedance(double m, Correlation rho) {
    check_argument(m);
    if (m == kInf) return 0.0;
    if (m == -kInf) return 1.0;
    // 1 - Phi2(m, m) = P(X > m) + P(Y > m) - P(X > m, Y > m)
    return std::clamp(2.0 * phi(-m) - bvn_upper_cdf(m, m, rho), 0.0, 1.0);
}

double equicoordinate_quantile(double alpha, Correlation rho) {
    if (!(alpha > 0.0 && alpha < 0.5)) fail(ErrorCode::kDomain, "equicoordinate_quantile: alpha must lie in (0, 0.5)");
    const double r = rho.value();
    if (r < 0.0) fail(ErrorCode::kDomain, "equicoordinate_quantile: rho must lie in [0, 1]");

    const double lo = std_normal_quantile(1.0 - alpha);
    if (r >= 1.0 - kRhoClamp) return lo;
    const double hi = std_normal_quantile(1.0 - 0.5 * alpha);

    // Solve in the upper tail: P(max >= c) = alpha.
    auto f = [&](double c) { return max_exceedance(c, rho) - alpha; };
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    constexpr double kSlack = 1e-14;
    if (std::abs(f_lo) <= kSlack) return lo;
    if (std::abs(f_hi) <= kSlack) return hi;
    if (f_lo < 0.0 || f_hi > 0.0) fail(ErrorCode::kComputation, "equicoordinate_quantile: root not bracketed");

    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi,
                                                          boost::math::tools::eps_tolerance<double>(50), max_iter);
    return 0.5 * (a + b);
}

} // namespace excon
