#pragma once

#include <cmath>
#include <limits>

#include "capkit/distributions.hpp"
#include "capkit/stats.hpp"

namespace capkit {

/// Two-sided specification: nominal T with tolerances, limits derived.
struct SpecificationLimits {
    double nominal = 0.0;
    double tol_plus = 0.0;
    double tol_minus = 0.0;

    [[nodiscard]] double lsl() const { return nominal - tol_minus; }
    [[nodiscard]] double usl() const { return nominal + tol_plus; }
    [[nodiscard]] bool symmetric() const { return tol_plus == tol_minus; }

    /// Throws DomainError unless both tolerances are positive.
    void validate() const;
};

enum class CpkMethod { NormalPlugin, PercentileFitted };

struct CapabilityEstimate {
    double cpk = 0.0;
    CpkMethod method = CpkMethod::NormalPlugin;
    Family source_family = Family::Normal;
    double z_lower = 0.0;  // (mean - lsl)/sd, plug-in method only
    double z_upper = 0.0;  // (usl - mean)/sd
    bool incapable_by_location = false;  // cpk <= 0
};

/// One defect probability carried in natural-log space, so extreme tails
/// survive past double underflow and still render as decimal strings.
struct TailRisk {
    double log_p = -std::numeric_limits<double>::infinity();

    [[nodiscard]] double p() const { return std::exp(log_p); }
    [[nodiscard]] double ppm() const { return 1e6 * std::exp(log_p); }
    [[nodiscard]] double log10_ppm() const;   // -inf only for p == 0
    [[nodiscard]] bool underflowed() const;   // log_p finite but ppm() == 0
};

struct DefectRisk {
    TailRisk lower;  // mass below LSL
    TailRisk upper;  // mass above USL
    TailRisk total;

    [[nodiscard]] double ppm() const { return total.ppm(); }
};

/// Plug-in index min((usl - mean)/(3 sd), (mean - lsl)/(3 sd)).
/// Throws DomainError for sd <= 0 ("degenerate dispersion").
[[nodiscard]] CapabilityEstimate cpk_plugin(const SampleSummary& summary,
                                            const SpecificationLimits& spec);
[[nodiscard]] CapabilityEstimate cpk_plugin(double mean, double sd,
                                            const SpecificationLimits& spec);

/// Distribution-aware percentile index from the fitted model: median and the
/// Phi(+-3) quantiles, so the Normal case reduces exactly to the plug-in form.
[[nodiscard]] CapabilityEstimate cpk_percentile(const DistributionModel& model,
                                                const SpecificationLimits& spec);

/// Out-of-spec probability under the model; tails evaluated in log space.
[[nodiscard]] DefectRisk defect_risk(const DistributionModel& model,
                                     const SpecificationLimits& spec);

/// Defect risk at dispersion S, S(1+cv) and S(1-cv), mean held fixed.
struct PpmTriplet {
    DefectRisk base;
    DefectRisk plus;
    DefectRisk minus;
    double cv = 0.0;
};

/// Normal-model perturbation triplet at the summary's (mean, S) with
/// cv = cv_of_sd(n). Throws DomainError when sd <= 0 or cv >= 1.
[[nodiscard]] PpmTriplet perturbed_ppm(const SampleSummary& summary,
                                       const SpecificationLimits& spec);

/// Same perturbation applied within the fitted family: its standard
/// deviation is scaled by (1 +- cv) with the mean held fixed (see
/// DistributionModel::with_sd_factor). Reduces to sigma scaling for the
/// Normal family, so a Normal-selected dimension reproduces perturbed_ppm.
[[nodiscard]] PpmTriplet perturbed_ppm_fitted(const DistributionModel& model,
                                              const SpecificationLimits& spec, double cv);

/// Model-induced capability distortion.
struct ModelDistortion {
    double delta_cpk = 0.0;
};

[[nodiscard]] ModelDistortion model_distortion(const CapabilityEstimate& fitted,
                                               const CapabilityEstimate& normal_plugin);

}  // namespace capkit
