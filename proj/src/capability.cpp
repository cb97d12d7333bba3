#include "capkit/capability.hpp"

#include <algorithm>
#include <cmath>

#include "capkit/errors.hpp"
#include "capkit/normal.hpp"

namespace capkit {

namespace {

constexpr double kLog10E = 0.43429448190325182765;  // log10(e)

double log_add_exp(double a, double b) {
    if (std::isinf(a) && a < 0.0) return b;
    if (std::isinf(b) && b < 0.0) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

void SpecificationLimits::validate() const {
    if (!(tol_plus > 0.0) || !(tol_minus > 0.0))
        throw DomainError("specification tolerances must be positive");
}

double TailRisk::log10_ppm() const {
    return log_p * kLog10E + 6.0;
}

bool TailRisk::underflowed() const {
    return std::isfinite(log_p) && ppm() == 0.0;
}

CapabilityEstimate cpk_plugin(double mean, double sd, const SpecificationLimits& spec) {
    spec.validate();
    if (!(sd > 0.0)) throw DomainError("degenerate dispersion: sd must be positive");
    CapabilityEstimate e;
    e.method = CpkMethod::NormalPlugin;
    e.source_family = Family::Normal;
    e.z_upper = (spec.usl() - mean) / sd;
    e.z_lower = (mean - spec.lsl()) / sd;
    e.cpk = std::min(e.z_upper, e.z_lower) / 3.0;
    e.incapable_by_location = !(e.cpk > 0.0);
    return e;
}

CapabilityEstimate cpk_plugin(const SampleSummary& summary, const SpecificationLimits& spec) {
    return cpk_plugin(summary.mean, summary.sd, spec);
}

CapabilityEstimate cpk_percentile(const DistributionModel& model,
                                  const SpecificationLimits& spec) {
    spec.validate();
    if (model.family == Family::Normal) {
        // q_{Phi(3)} - q_{0.5} = 3 sigma algebraically; closed form keeps the
        // Normal reduction exact rather than within quantile rounding.
        CapabilityEstimate e = cpk_plugin(model.location, model.scale, spec);
        e.method = CpkMethod::PercentileFitted;
        return e;
    }
    // Percentile span Phi(-3)..Phi(3) of the fitted model.
    const double p_hi = normal::cdf(3.0);
    const double p_lo = normal::sf(3.0);
    const double q_med = model.quantile(0.5);
    const double q_hi = model.quantile(p_hi);
    const double q_lo = model.quantile(p_lo);

    CapabilityEstimate e;
    e.method = CpkMethod::PercentileFitted;
    e.source_family = model.family;
    e.cpk = std::min((spec.usl() - q_med) / (q_hi - q_med),
                     (q_med - spec.lsl()) / (q_med - q_lo));
    e.incapable_by_location = !(e.cpk > 0.0);
    return e;
}

DefectRisk defect_risk(const DistributionModel& model, const SpecificationLimits& spec) {
    DefectRisk r;
    r.lower.log_p = std::isinf(spec.lsl()) ? -std::numeric_limits<double>::infinity()
                                           : model.log_cdf(spec.lsl());
    r.upper.log_p = std::isinf(spec.usl()) ? -std::numeric_limits<double>::infinity()
                                           : model.log_sf(spec.usl());
    r.total.log_p = log_add_exp(r.lower.log_p, r.upper.log_p);
    return r;
}

PpmTriplet perturbed_ppm(const SampleSummary& summary, const SpecificationLimits& spec) {
    spec.validate();
    if (!(summary.sd > 0.0)) throw DomainError("degenerate dispersion: sd must be positive");
    if (summary.cv_s >= 1.0)
        throw DomainError("cv(S) >= 1: sample too small for a downward perturbation");
    const DistributionModel m = make_model(Family::Normal, summary.mean, summary.sd);
    return perturbed_ppm_fitted(m, spec, summary.cv_s);
}

PpmTriplet perturbed_ppm_fitted(const DistributionModel& model, const SpecificationLimits& spec,
                                double cv) {
    spec.validate();
    if (cv < 0.0 || cv >= 1.0) throw DomainError("cv must lie in [0, 1)");
    PpmTriplet t;
    t.cv = cv;
    t.base = defect_risk(model, spec);
    t.plus = defect_risk(model.with_sd_factor(1.0 + cv), spec);
    t.minus = defect_risk(model.with_sd_factor(1.0 - cv), spec);
    return t;
}

ModelDistortion model_distortion(const CapabilityEstimate& fitted,
                                 const CapabilityEstimate& normal_plugin) {
    if (!std::isfinite(fitted.cpk) || !std::isfinite(normal_plugin.cpk))
        throw DomainError("model_distortion: indices must be finite");
    return ModelDistortion{fitted.cpk - normal_plugin.cpk};
}

}  // namespace capkit
