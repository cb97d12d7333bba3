#include "capkit/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "capkit/errors.hpp"
#include "capkit/normal.hpp"

namespace capkit {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

void require_fit_size(std::size_t n) {
    if (n < kMinFitObservations)
        throw DomainError("fit requires n >= " + std::to_string(kMinFitObservations) +
                          ", got " + std::to_string(n));
}

bool all_positive(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; });
}

// log(F(z)) and log(1-F(z)) for the standard logistic, stable at both ends.
double logistic_log_cdf(double z) { return -std::log1p(std::exp(-z)); }
double logistic_log_sf(double z) { return -std::log1p(std::exp(z)); }

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::Normal: return "Normal";
        case Family::Logistic: return "Logistic";
        case Family::Lognormal: return "Lognormal";
        case Family::Weibull: return "Weibull";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    for (Family f : kFamilyOrder)
        if (name == family_name(f)) return f;
    throw DomainError("unknown family '" + name + "'");
}

double DistributionModel::pdf(double x) const {
    switch (family) {
        case Family::Normal:
            return normal::pdf((x - location) / scale) / scale;
        case Family::Logistic: {
            const double z = (x - location) / scale;
            // exp(-|z|) / (1+exp(-|z|))^2, symmetric form avoids overflow
            const double e = std::exp(-std::abs(z));
            const double d = 1.0 + e;
            return e / (scale * d * d);
        }
        case Family::Lognormal: {
            if (x <= 0.0) throw DomainError("lognormal pdf: x must be positive");
            return normal::pdf((std::log(x) - location) / scale) / (scale * x);
        }
        case Family::Weibull: {
            if (x < 0.0) throw DomainError("weibull pdf: x must be nonnegative");
            const double k = location, lam = scale;
            if (x == 0.0) {
                if (k > 1.0) return 0.0;
                if (k == 1.0) return 1.0 / lam;
                return std::numeric_limits<double>::infinity();
            }
            const double t = std::pow(x / lam, k);
            return (k / x) * t * std::exp(-t);
        }
    }
    return 0.0;
}

double DistributionModel::cdf(double x) const {
    switch (family) {
        case Family::Normal:
            return normal::cdf((x - location) / scale);
        case Family::Logistic:
            return std::exp(logistic_log_cdf((x - location) / scale));
        case Family::Lognormal:
            if (x <= 0.0) return 0.0;
            return normal::cdf((std::log(x) - location) / scale);
        case Family::Weibull: {
            if (x <= 0.0) return 0.0;
            return -std::expm1(-std::pow(x / scale, location));
        }
    }
    return 0.0;
}

double DistributionModel::sf(double x) const {
    switch (family) {
        case Family::Normal:
            return normal::sf((x - location) / scale);
        case Family::Logistic:
            return std::exp(logistic_log_sf((x - location) / scale));
        case Family::Lognormal:
            if (x <= 0.0) return 1.0;
            return normal::sf((std::log(x) - location) / scale);
        case Family::Weibull:
            if (x <= 0.0) return 1.0;
            return std::exp(-std::pow(x / scale, location));
    }
    return 0.0;
}

double DistributionModel::log_sf(double x) const {
    switch (family) {
        case Family::Normal:
            return normal::log_sf((x - location) / scale);
        case Family::Logistic:
            return logistic_log_sf((x - location) / scale);
        case Family::Lognormal:
            if (x <= 0.0) return 0.0;
            return normal::log_sf((std::log(x) - location) / scale);
        case Family::Weibull:
            if (x <= 0.0) return 0.0;
            return -std::pow(x / scale, location);
    }
    return 0.0;
}

double DistributionModel::log_cdf(double x) const {
    switch (family) {
        case Family::Normal:
            return normal::log_cdf((x - location) / scale);
        case Family::Logistic:
            return logistic_log_cdf((x - location) / scale);
        case Family::Lognormal:
            if (x <= 0.0) return -std::numeric_limits<double>::infinity();
            return normal::log_cdf((std::log(x) - location) / scale);
        case Family::Weibull: {
            if (x <= 0.0) return -std::numeric_limits<double>::infinity();
            const double t = std::pow(x / scale, location);
            // log(1 - exp(-t))
            return t > 1e-8 ? std::log(-std::expm1(-t)) : std::log(t) - t / 2.0;
        }
    }
    return 0.0;
}

double DistributionModel::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0,1)");
    switch (family) {
        case Family::Normal:
            return location + scale * normal::quantile(p);
        case Family::Logistic:
            return location + scale * (std::log(p) - std::log1p(-p));
        case Family::Lognormal:
            return std::exp(location + scale * normal::quantile(p));
        case Family::Weibull:
            return scale * std::pow(-std::log1p(-p), 1.0 / location);
    }
    return 0.0;
}

double DistributionModel::eval(EvalKind kind, double x) const {
    switch (kind) {
        case EvalKind::Pdf: return pdf(x);
        case EvalKind::Cdf: return cdf(x);
        case EvalKind::Sf: return sf(x);
        case EvalKind::Quantile: return quantile(x);
        case EvalKind::LogSf: return log_sf(x);
    }
    return 0.0;
}

DistributionModel DistributionModel::with_scale_factor(double factor) const {
    if (factor <= 0.0) throw DomainError("scale factor must be positive");
    DistributionModel m = *this;
    m.scale *= factor;
    return m;
}

double DistributionModel::mean() const {
    switch (family) {
        case Family::Normal:
        case Family::Logistic:
            return location;
        case Family::Lognormal:
            return std::exp(location + 0.5 * scale * scale);
        case Family::Weibull:
            return scale * std::exp(std::lgamma(1.0 + 1.0 / location));
    }
    return 0.0;
}

namespace {

// Coefficient of variation of a Weibull with shape k; strictly decreasing.
double weibull_cv(double k) {
    return std::sqrt(std::exp(std::lgamma(1.0 + 2.0 / k) - 2.0 * std::lgamma(1.0 + 1.0 / k)) -
                     1.0);
}

}  // namespace

DistributionModel DistributionModel::with_sd_factor(double factor) const {
    if (factor <= 0.0) throw DomainError("sd factor must be positive");
    switch (family) {
        case Family::Normal:
        case Family::Logistic:
            return with_scale_factor(factor);
        case Family::Lognormal: {
            // mean m0 = exp(mu + s^2/2); (sd/mean)^2 = e^{s^2} - 1
            const double m0 = mean();
            const double v = std::expm1(scale * scale);
            const double s2 = std::log1p(factor * factor * v);
            DistributionModel m = *this;
            m.scale = std::sqrt(s2);
            m.location = std::log(m0) - 0.5 * s2;
            return m;
        }
        case Family::Weibull: {
            const double m0 = mean();
            const double target = factor * weibull_cv(location);
            double lo = location, hi = location;
            int guard = 0;
            while (weibull_cv(lo) < target && guard++ < 200) lo /= 2.0;
            guard = 0;
            while (weibull_cv(hi) > target && guard++ < 200) hi *= 2.0;
            for (int i = 0; i < 200; ++i) {
                const double mid = std::sqrt(lo * hi);
                (weibull_cv(mid) > target ? lo : hi) = mid;
                if (hi / lo < 1.0 + 1e-14) break;
            }
            const double k = std::sqrt(lo * hi);
            DistributionModel m = *this;
            m.location = k;
            m.scale = m0 / std::exp(std::lgamma(1.0 + 1.0 / k));
            return m;
        }
    }
    return *this;
}

DistributionModel make_model(Family family, double location, double scale) {
    if (scale <= 0.0) throw DomainError("scale parameter must be positive");
    if (family == Family::Weibull && location <= 0.0)
        throw DomainError("weibull shape must be positive");
    DistributionModel m;
    m.family = family;
    m.location = location;
    m.scale = scale;
    return m;
}

double aicc_from_loglik(double loglik, std::size_t n, int k) {
    const double dn = static_cast<double>(n);
    if (dn <= k + 1) throw DomainError("aicc: need n > k + 1");
    return -2.0 * loglik + 2.0 * k + 2.0 * k * (k + 1.0) / (dn - k - 1.0);
}

// ---------------------------------------------------------------------------
// Normality test
// ---------------------------------------------------------------------------

NormalityDiagnostic normality_test(std::span<const double> values) {
    require_fit_size(values.size());
    const std::size_t n = values.size();
    const SampleSummary s = summarize(values);
    if (s.sd <= 0.0) {
        // Degenerate sample: no evidence scale; report certain rejection.
        return NormalityDiagnostic{std::numeric_limits<double>::infinity(), 0.0, true};
    }

    std::vector<double> z(values.begin(), values.end());
    for (double& v : z) v = (v - s.mean) / s.sd;
    std::sort(z.begin(), z.end());

    const double dn = static_cast<double>(n);
    double a2 = -dn;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 2.0 * static_cast<double>(i + 1) - 1.0;
        a2 -= w / dn * (normal::log_cdf(z[i]) + normal::log_sf(z[n - 1 - i]));
    }
    const double a2s = a2 * (1.0 + 0.75 / dn + 2.25 / (dn * dn));

    double p;
    if (a2s >= 0.6)
        p = std::exp(1.2937 - 5.709 * a2s + 0.0186 * a2s * a2s);
    else if (a2s > 0.34)
        p = std::exp(0.9177 - 4.279 * a2s - 1.38 * a2s * a2s);
    else if (a2s > 0.2)
        p = 1.0 - std::exp(-8.318 + 42.796 * a2s - 59.938 * a2s * a2s);
    else
        p = 1.0 - std::exp(-13.436 + 101.14 * a2s - 223.73 * a2s * a2s);
    p = std::clamp(p, 0.0, 1.0);

    return NormalityDiagnostic{a2s, p, p < 0.05};
}

NormalityDiagnostic normality_test(const MeasurementBatch& batch) {
    batch.validate();
    return normality_test(std::span<const double>(batch.values));
}

// ---------------------------------------------------------------------------
// Maximum-likelihood fitting
// ---------------------------------------------------------------------------

namespace {

DistributionModel fit_normal(std::span<const double> x) {
    const std::size_t n = x.size();
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mu) * (v - mu);
    const double var = ss / static_cast<double>(n);  // likelihood divisor n
    if (var <= 0.0) throw FitError("degenerate sample: zero variance", 0.0, 0);
    DistributionModel m = make_model(Family::Normal, mu, std::sqrt(var));
    m.loglik = -0.5 * static_cast<double>(n) * (std::log(2.0 * std::numbers::pi * var) + 1.0);
    return m;
}

DistributionModel fit_lognormal(std::span<const double> x) {
    if (!all_positive(x)) throw FamilyInapplicable("lognormal requires strictly positive data");
    std::vector<double> lx(x.begin(), x.end());
    double sum_log = 0.0;
    for (double& v : lx) {
        v = std::log(v);
        sum_log += v;
    }
    DistributionModel base = fit_normal(lx);
    DistributionModel m = make_model(Family::Lognormal, base.location, base.scale);
    m.loglik = base.loglik - sum_log;
    return m;
}

DistributionModel fit_weibull(std::span<const double> x) {
    if (!all_positive(x)) throw FamilyInapplicable("weibull requires strictly positive data");
    const std::size_t n = x.size();
    const double dn = static_cast<double>(n);

    // Work on x/max(x); the profile equation is scale invariant and the
    // normalized powers cannot overflow.
    const double xmax = *std::max_element(x.begin(), x.end());
    std::vector<double> lr(n);  // log(x_i / xmax) <= 0
    double mean_lr = 0.0, sum_log_x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lr[i] = std::log(x[i] / xmax);
        mean_lr += lr[i];
        sum_log_x += std::log(x[i]);
    }
    mean_lr /= dn;
    if (mean_lr == 0.0) throw FitError("degenerate sample: all values equal", 0.0, 0);

    // Profile score g(k) = sum w_i lr_i / sum w_i - 1/k - mean_lr with
    // w_i = exp(k lr_i); strictly increasing in k, so Newton with a
    // bisection safeguard cannot escape the bracket.
    const auto profile = [&](double k, double& g, double& dg) {
        double sw = 0.0, swl = 0.0, swl2 = 0.0;
        for (double l : lr) {
            const double w = std::exp(k * l);
            sw += w;
            swl += w * l;
            swl2 += w * l * l;
        }
        const double ratio = swl / sw;
        g = ratio - 1.0 / k - mean_lr;
        dg = (swl2 * sw - swl * swl) / (sw * sw) + 1.0 / (k * k);
    };

    // Moment start: sd(log x) ~ pi / (k sqrt 6).
    double sl2 = 0.0;
    for (double l : lr) sl2 += (l - mean_lr) * (l - mean_lr);
    const double sd_log = std::sqrt(sl2 / (dn - 1.0));
    double k = (sd_log > 0.0) ? std::numbers::pi / (sd_log * std::sqrt(6.0)) : 1.0;
    k = std::clamp(k, 1e-3, 1e7);

    double lo = k, hi = k, g, dg;
    profile(lo, g, dg);
    int expand = 0;
    while (g > 0.0 && expand++ < 200) { lo /= 2.0; profile(lo, g, dg); }
    profile(hi, g, dg);
    expand = 0;
    while (g < 0.0 && expand++ < 200) { hi *= 2.0; profile(hi, g, dg); }
    if (!(lo < hi)) throw FitError("weibull profile: no bracket", g, expand);

    k = std::sqrt(lo * hi);
    int it = 0;
    for (; it < 200; ++it) {
        profile(k, g, dg);
        if (std::abs(g) < 1e-12 * (1.0 + 1.0 / k)) break;
        if (g > 0.0) hi = k; else lo = k;
        double next = k - g / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == k) break;
        k = next;
    }
    if (it == 200) throw FitError("weibull profile did not converge", g, it);

    double sw = 0.0;
    for (double l : lr) sw += std::exp(k * l);
    const double lambda = xmax * std::pow(sw / dn, 1.0 / k);

    DistributionModel m = make_model(Family::Weibull, k, lambda);
    // At the MLE, sum (x/lambda)^k = n.
    m.loglik = dn * std::log(k) - dn * k * std::log(lambda) + (k - 1.0) * sum_log_x - dn;
    return m;
}

DistributionModel fit_logistic(std::span<const double> x) {
    const std::size_t n = x.size();
    const double dn = static_cast<double>(n);
    const SampleSummary s = summarize(x);
    if (s.sd <= 0.0) throw FitError("degenerate sample: zero variance", 0.0, 0);

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    double m = 0.5 * (sorted[(n - 1) / 2] + sorted[n / 2]);
    double sc = s.sd * std::sqrt(3.0) / std::numbers::pi;

    const auto loglik = [&](double mm, double ss) {
        double ll = -dn * std::log(ss);
        for (double v : x) {
            const double z = (v - mm) / ss;
            ll += -z - 2.0 * std::log1p(std::exp(-z));
        }
        return ll;
    };

    double ll = loglik(m, sc);
    // Scale-free residual: sc * grad = (sum u, sum z u - n), both O(n) sums.
    double residual = dn;
    int it = 0;
    for (; it < 200; ++it) {
        double su = 0.0, szu = 0.0, sup = 0.0, szup = 0.0, sz2up = 0.0;
        for (double v : x) {
            const double z = (v - m) / sc;
            const double sig = 1.0 / (1.0 + std::exp(-z));
            const double u = 2.0 * sig - 1.0;
            const double up = 2.0 * sig * (1.0 - sig);
            su += u;
            szu += z * u;
            sup += up;
            szup += z * up;
            sz2up += z * z * up;
        }
        residual = std::abs(su) + std::abs(szu - dn);
        if (residual < 1e-9 * dn) break;
        const double gm = su / sc;
        const double gs = (szu - dn) / sc;

        const double hmm = -sup / (sc * sc);
        const double hms = -(su + szup) / (sc * sc);
        const double hss = -(2.0 * szu - dn + sz2up) / (sc * sc);
        const double det = hmm * hss - hms * hms;
        double dm, ds;
        if (det > 0.0 && hmm < 0.0) {
            dm = -(hss * gm - hms * gs) / det;
            ds = -(-hms * gm + hmm * gs) / det;
        } else {  // fall back to scaled gradient ascent
            dm = gm * sc * sc / dn;
            ds = gs * sc * sc / dn;
        }
        double t = 1.0;
        while (t > 1e-8 && (sc + t * ds <= 0.0 || loglik(m + t * dm, sc + t * ds) < ll))
            t *= 0.5;
        if (t <= 1e-8) break;  // step stalled at rounding level
        m += t * dm;
        sc += t * ds;
        ll = loglik(m, sc);
    }
    // A stalled or exhausted solve is acceptable only if the score is small.
    if (residual > 1e-5 * dn) throw FitError("logistic fit did not converge", residual, it);

    DistributionModel model = make_model(Family::Logistic, m, sc);
    model.loglik = ll;
    return model;
}

}  // namespace

DistributionModel fit_mle(std::span<const double> values, Family family) {
    require_fit_size(values.size());
    DistributionModel m;
    switch (family) {
        case Family::Normal: m = fit_normal(values); break;
        case Family::Logistic: m = fit_logistic(values); break;
        case Family::Lognormal: m = fit_lognormal(values); break;
        case Family::Weibull: m = fit_weibull(values); break;
    }
    m.n_fit = values.size();
    m.aicc = aicc_from_loglik(m.loglik, m.n_fit);
    return m;
}

DistributionModel fit_mle(const MeasurementBatch& batch, Family family) {
    batch.validate();
    return fit_mle(std::span<const double>(batch.values), family);
}

ModelSelection select_model(const MeasurementBatch& batch) {
    batch.validate();
    require_fit_size(batch.n());

    ModelSelection sel;
    sel.normality = normality_test(batch);

    if (!sel.normality.rejected_at_0_05) {
        sel.model = fit_mle(batch, Family::Normal);
        return sel;
    }

    sel.aicc_stage_ran = true;
    bool have_best = false;
    for (Family f : kFamilyOrder) {
        DistributionModel candidate;
        try {
            candidate = fit_mle(batch, f);
        } catch (const FamilyInapplicable&) {
            continue;  // excluded from selection, not a failure
        }
        if (!have_best) {
            sel.model = candidate;
            have_best = true;
        } else if (candidate.aicc < sel.model.aicc - 1e-9) {
            sel.model = candidate;
        } else if (candidate.aicc <= sel.model.aicc + 1e-9) {
            sel.tie_broken_by_order = true;  // earlier (simpler) family kept
        }
    }
    if (!have_best) throw FitError("no applicable family", 0.0, 0);
    sel.normal_won_after_rejection = sel.model.family == Family::Normal;
    return sel;
}

}  // namespace capkit
