#include "capkit/amplification.hpp"

#include <cmath>

#include "capkit/errors.hpp"
#include "capkit/normal.hpp"

namespace capkit {

double mills_ratio(double z) {
    if (!std::isfinite(z)) throw DomainError("mills_ratio: z must be finite");
    return normal::mills_ratio(z);
}

AmplificationProfile amplification_normal(double cpk) {
    if (!(cpk > 0.0)) throw DomainError("amplification_normal: cpk must be positive");
    AmplificationProfile p;
    p.cpk_equiv = cpk;
    p.z = 3.0 * cpk;
    p.mills = normal::mills_ratio(p.z);
    p.a_sigma = p.z * p.mills;
    return p;
}

namespace {

double log_p_defect(const DistributionModel& model, const SpecificationLimits& spec) {
    return defect_risk(model, spec).total.log_p;
}

}  // namespace

namespace {

// Richardson-extrapolated central difference of a log-probability with
// respect to log(scale): (4 D(h/2) - D(h)) / 3 cancels the O(h^2) term.
template <typename LogP>
double log_elasticity(const DistributionModel& model, LogP&& log_p) {
    const auto central = [&](double h) {
        const double up = log_p(model.with_scale_factor(std::exp(h)));
        const double down = log_p(model.with_scale_factor(std::exp(-h)));
        return (up - down) / (2.0 * h);
    };
    const double h = 1e-5;
    return std::abs((4.0 * central(h / 2.0) - central(h)) / 3.0);
}

}  // namespace

double amplification_numeric(const DistributionModel& model, const SpecificationLimits& spec) {
    if (!std::isfinite(log_p_defect(model, spec)))
        throw DomainError("amplification_numeric: defect probability is zero");
    return log_elasticity(model,
                          [&](const DistributionModel& m) { return log_p_defect(m, spec); });
}

TailAmplification amplification_numeric_tails(const DistributionModel& model,
                                              const SpecificationLimits& spec) {
    TailAmplification a;
    a.combined = amplification_numeric(model, spec);
    const auto base = defect_risk(model, spec);
    a.lower = std::isfinite(base.lower.log_p)
                  ? log_elasticity(model, [&](const DistributionModel& m) {
                        return defect_risk(m, spec).lower.log_p;
                    })
                  : std::numeric_limits<double>::quiet_NaN();
    a.upper = std::isfinite(base.upper.log_p)
                  ? log_elasticity(model, [&](const DistributionModel& m) {
                        return defect_risk(m, spec).upper.log_p;
                    })
                  : std::numeric_limits<double>::quiet_NaN();
    return a;
}

double dispersion_sensitivity(const DistributionModel& model, const SpecificationLimits& spec) {
    spec.validate();
    if (!std::isfinite(spec.usl())) throw DomainError("dispersion_sensitivity: USL must be finite");
    if (model.family == Family::Normal) {
        const double z = (spec.usl() - model.location) / model.scale;
        return normal::pdf(z) * (spec.usl() - model.location) / (model.scale * model.scale);
    }
    const double h = 1e-6 * model.scale;
    const double up = model.with_scale_factor(1.0 + h / model.scale).sf(spec.usl());
    const double down = model.with_scale_factor(1.0 - h / model.scale).sf(spec.usl());
    return (up - down) / (2.0 * h);
}

DeltaMethodResult delta_method_var_ppm(const SampleSummary& summary,
                                       const SpecificationLimits& spec) {
    spec.validate();
    if (!(summary.sd > 0.0)) throw DomainError("degenerate dispersion: sd must be positive");
    if (summary.n < 2) throw DomainError("delta_method_var_ppm: need n >= 2");

    const double sd = summary.sd;
    const double n = static_cast<double>(summary.n);
    const double zl = std::isinf(spec.lsl()) ? -std::numeric_limits<double>::infinity()
                                             : (spec.lsl() - summary.mean) / sd;
    const double zu = std::isinf(spec.usl()) ? std::numeric_limits<double>::infinity()
                                             : (spec.usl() - summary.mean) / sd;
    const double fl = std::isfinite(zl) ? normal::pdf(zl) : 0.0;
    const double fu = std::isfinite(zu) ? normal::pdf(zu) : 0.0;

    DeltaMethodResult r;
    // p = Phi(zl) + 1 - Phi(zu); gradients through the standardized bounds.
    r.grad_mean = 1e6 * (fu - fl) / sd;
    r.grad_sd = 1e6 * ((std::isfinite(zu) ? zu * fu : 0.0) - (std::isfinite(zl) ? zl * fl : 0.0)) / sd;
    r.cov_mean = sd * sd / n;
    r.cov_sd = sd * sd / (2.0 * (n - 1.0));
    r.var_ppm = r.grad_mean * r.grad_mean * r.cov_mean + r.grad_sd * r.grad_sd * r.cov_sd;
    r.sd_ppm = std::sqrt(r.var_ppm);
    return r;
}

}  // namespace capkit
