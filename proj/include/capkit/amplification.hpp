#pragma once

#include "capkit/capability.hpp"
#include "capkit/distributions.hpp"
#include "capkit/stats.hpp"

namespace capkit {

/// Elasticity of the defect rate with respect to dispersion at one
/// standardized distance z. a_sigma = z * mills(z) in the normal case;
/// values above 1 mean relative dispersion errors are magnified in
/// defect-risk space.
struct AmplificationProfile {
    double z = 0.0;
    double mills = 0.0;
    double a_sigma = 0.0;
    double cpk_equiv = 0.0;  // z / 3
};

/// Mills ratio phi(z)/(1 - Phi(z)); ~1e-15 relative error for |z| <= 40.
[[nodiscard]] double mills_ratio(double z);

/// Closed-form amplification for a centered normal process at capability
/// cpk (> 0): z = 3 cpk, a_sigma = z * mills(z).
[[nodiscard]] AmplificationProfile amplification_normal(double cpk);

/// |d log p_defect / d log scale| by central difference in log space
/// (relative step 1e-5, one Richardson pass) for any fitted model. Serves
/// as the general form and as the oracle for the closed form. Throws
/// DomainError when the tail probability is identically zero.
[[nodiscard]] double amplification_numeric(const DistributionModel& model,
                                           const SpecificationLimits& spec);

/// Off-center processes see different sensitivities per tail; report each
/// tail's elasticity alongside the combined (total-defect) value. A tail
/// with zero probability carries NaN.
struct TailAmplification {
    double lower = 0.0;
    double upper = 0.0;
    double combined = 0.0;
};

[[nodiscard]] TailAmplification amplification_numeric_tails(const DistributionModel& model,
                                                            const SpecificationLimits& spec);

/// d p_upper / d sigma = pdf(z) * (usl - location) / scale^2 evaluated under
/// the model; closed form for the Normal family, central difference for the
/// rest. Requires a finite USL.
[[nodiscard]] double dispersion_sensitivity(const DistributionModel& model,
                                            const SpecificationLimits& spec);

/// First-order (delta-method) variance of the estimated normal-model PPM at
/// (mean, sd) with Var(mean) = sd^2/n and Var(S) = sd^2/(2(n-1)), treated as
/// independent under normal sampling.
struct DeltaMethodResult {
    double grad_mean = 0.0;  // d PPM / d mu
    double grad_sd = 0.0;    // d PPM / d sigma
    double cov_mean = 0.0;   // Var(sample mean)
    double cov_sd = 0.0;     // Var(sample sd)
    double var_ppm = 0.0;
    double sd_ppm = 0.0;
};

[[nodiscard]] DeltaMethodResult delta_method_var_ppm(const SampleSummary& summary,
                                                     const SpecificationLimits& spec);

}  // namespace capkit
