#include "capkit/normal.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "capkit/errors.hpp"

namespace capkit::normal {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
constexpr double kInvSqrtPi = 1.0 / 1.7724538509055160273;  // 1/sqrt(pi)
constexpr double kLogSqrt2Pi = 0.91893853320467274178;      // log(sqrt(2*pi))

// exp(x^2)*erfc(x) for x >= 25 via the asymptotic series
//   erfcx(x) = 1/(x sqrt(pi)) * sum_k (-1)^k (2k-1)!! / (2x^2)^k.
// Terms fall below 1e-19 within ~10 terms at x = 25.
double erfcx_asymptotic(double x) {
    const double ix2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 20; ++k) {
        term *= -(2.0 * k - 1.0) * ix2;
        sum += term;
        if (std::abs(term) < 1e-20 * std::abs(sum)) break;
    }
    return sum * kInvSqrtPi / x;
}

}  // namespace

double erfcx(double x) {
    if (x >= 25.0) return erfcx_asymptotic(x);
    if (x >= 0.0) return std::exp(x * x) * std::erfc(x);
    // erfcx(-x) = 2 exp(x^2) - erfcx(x); overflows (correctly) for x << -26.
    const double x2 = x * x;
    if (x2 > 708.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::exp(x2) - erfcx(-x);
}

double pdf(double x) {
    return std::exp(-0.5 * x * x - kLogSqrt2Pi);
}

double cdf(double x) {
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double sf(double x) {
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double log_sf(double x) {
    if (x < -1.0) return std::log1p(-sf(-x));  // sf ~ 1, keep the tiny log exact
    if (x < 1.0) return std::log(sf(x));
    // sf(x) = 0.5 * erfcx(x/sqrt2) * exp(-x^2/2)
    return -0.5 * x * x + std::log(0.5 * erfcx(x * kInvSqrt2));
}

double log_cdf(double x) {
    return log_sf(-x);
}

double quantile(double p) {
    // Wichura (1988), algorithm AS 241, PPND16: relative error ~1e-16.
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile: p must lie in (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                      2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                    3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                  4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
                (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                      1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                    6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                  2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                    2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                  5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
                (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                      1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                    1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                  5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -value : value;
}

double mills_ratio(double x) {
    if (x < -37.0) return pdf(x);  // sf ~ 1 to double precision
    // r(x) = sqrt(2/pi) / erfcx(x/sqrt2)
    return 0.79788456080286535588 / erfcx(x * kInvSqrt2);
}

}  // namespace capkit::normal
