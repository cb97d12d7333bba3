#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "capkit/stats.hpp"

namespace capkit {

enum class Family { Normal, Logistic, Lognormal, Weibull };

/// Simplest-first order used to break AICc ties.
inline constexpr std::array<Family, 4> kFamilyOrder = {Family::Normal, Family::Logistic,
                                                       Family::Lognormal, Family::Weibull};

[[nodiscard]] const char* family_name(Family f);
[[nodiscard]] Family family_from_name(const std::string& name);

enum class EvalKind { Pdf, Cdf, Sf, Quantile, LogSf };

/// A fitted two-parameter model. Parameter meaning by family:
///   Normal    location mu, scale sigma        (sigma > 0)
///   Logistic  location m, scale s             (s > 0)
///   Lognormal mu_log, sigma_log on log scale  (sigma_log > 0, support x > 0)
///   Weibull   shape k, scale lambda           (both > 0, support x > 0)
struct DistributionModel {
    Family family = Family::Normal;
    double location = 0.0;  // mu / m / mu_log / shape k
    double scale = 1.0;     // sigma / s / sigma_log / lambda
    double loglik = 0.0;
    double aicc = 0.0;
    std::size_t n_fit = 0;

    [[nodiscard]] double pdf(double x) const;
    [[nodiscard]] double cdf(double x) const;
    [[nodiscard]] double sf(double x) const;       // direct tail form, no 1-cdf
    [[nodiscard]] double log_sf(double x) const;   // finite far beyond sf underflow
    [[nodiscard]] double log_cdf(double x) const;
    [[nodiscard]] double quantile(double p) const;

    /// Dispatch by kind; quantile requires x in (0,1).
    [[nodiscard]] double eval(EvalKind kind, double x) const;

    /// Natural scale parameter (sigma, s, sigma_log, lambda) and a copy with
    /// it multiplied; this is the "scale" that amplification elasticities
    /// differentiate against.
    [[nodiscard]] double natural_scale() const { return scale; }
    [[nodiscard]] DistributionModel with_scale_factor(double factor) const;

    /// Copy whose standard deviation is `factor` times this one's with the
    /// mean held fixed, staying inside the family. Identical to
    /// with_scale_factor for location-scale families (Normal, Logistic);
    /// re-solves both parameters for Weibull and Lognormal.
    [[nodiscard]] DistributionModel with_sd_factor(double factor) const;

    /// Distribution mean and median.
    [[nodiscard]] double mean() const;
    [[nodiscard]] double median() const { return quantile(0.5); }
};

/// Construct a model directly from parameters (loglik/aicc left at 0).
[[nodiscard]] DistributionModel make_model(Family family, double location, double scale);

struct NormalityDiagnostic {
    double statistic = 0.0;  // small-sample adjusted A^2
    double p_value = 1.0;
    bool rejected_at_0_05 = false;

    static constexpr const char* kTestName = "Anderson-Darling (case 3, estimated parameters)";
};

/// Anderson-Darling test for normality with estimated parameters;
/// p-value by the D'Agostino-Stephens approximation. Requires n >= 8.
[[nodiscard]] NormalityDiagnostic normality_test(const MeasurementBatch& batch);
[[nodiscard]] NormalityDiagnostic normality_test(std::span<const double> values);

/// Maximum-likelihood fit of one family. Requires n >= 8; throws
/// FamilyInapplicable when the family's support excludes the data and
/// FitError when an iterative solve does not converge.
[[nodiscard]] DistributionModel fit_mle(const MeasurementBatch& batch, Family family);
[[nodiscard]] DistributionModel fit_mle(std::span<const double> values, Family family);

/// AICc for a 2-parameter fit: -2 loglik + 2k + 2k(k+1)/(n-k-1).
[[nodiscard]] double aicc_from_loglik(double loglik, std::size_t n, int k = 2);

struct ModelSelection {
    DistributionModel model;
    NormalityDiagnostic normality;
    bool aicc_stage_ran = false;            // false when normality not rejected
    bool normal_won_after_rejection = false;
    bool tie_broken_by_order = false;
};

/// Paper-style workflow: keep the Normal fit unless normality is rejected at
/// 0.05; otherwise take the minimum-AICc model over all applicable families
/// (Normal included), ties within 1e-9 broken simplest-first.
[[nodiscard]] ModelSelection select_model(const MeasurementBatch& batch);

}  // namespace capkit
