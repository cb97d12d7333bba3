#pragma once

#include <string>
#include <vector>

#include "capkit/amplification.hpp"
#include "capkit/capability.hpp"
#include "capkit/dataset.hpp"
#include "capkit/distributions.hpp"
#include "capkit/reliability.hpp"
#include "capkit/rng.hpp"

namespace capkit {

/// Everything one table row needs: diagnostics, capability under both the
/// normal benchmark and the selected model, bootstrap decision reliability,
/// and the dispersion-perturbation PPM triplets.
struct DimensionReport {
    std::string dimension_id;
    SpecificationLimits spec;
    SampleSummary summary;

    NormalityDiagnostic normality;
    Family selected_family = Family::Normal;
    DistributionModel likelihood_model;  // MLE parameters (sigma divisor n)

    double cpk_fitted = 0.0;  // percentile method on the capability model
    double cpk_normal = 0.0;  // plug-in, S divisor n-1
    double delta_cpk = 0.0;

    ReliabilitySummary reliability;
    double lcb_analytic_value = 0.0;  // Bissell benchmark at the policy alpha

    PpmTriplet ppm_normal;
    PpmTriplet ppm_fitted;

    bool aicc_stage_ran = false;
    bool normal_won_after_rejection = false;
    bool aicc_tie_broken = false;

    std::string error;  // non-empty when this dimension's analysis failed

    [[nodiscard]] bool ok() const { return error.empty(); }
};

struct AnalysisProvenance {
    SeedSpec seed;
    long b_resamples = 0;
    DecisionPolicy policy;
    std::string rng_algorithm;
    std::string moment_convention;
    std::string normality_test;
    std::string bootstrap_quantile;
    std::string fitted_cpk_method = "percentile (median and Phi(+-3) quantiles)";
    std::string mle_sigma_divisor = "n (likelihood); capability uses S with divisor n-1";
    std::string perturbation = "family sd x (1 +- cv), mean fixed (within-family moment match)";
};

struct DatasetAnalysis {
    std::vector<DimensionReport> reports;
    AnalysisProvenance provenance;
};

/// Capability model backing fitted cpk/PPM: the likelihood fit for
/// non-normal families; Normal(mean, S) with the n-1 divisor otherwise.
[[nodiscard]] DistributionModel capability_model(const DistributionModel& likelihood_model,
                                                 const SampleSummary& summary);

/// Full per-dimension pipeline over a dataset. Failures are isolated: a
/// failing dimension carries its error message, the rest are unaffected.
/// Bootstrap streams are keyed by a stable hash of the dimension id, so a
/// row's numbers do not depend on which other dimensions are present.
[[nodiscard]] DatasetAnalysis analyze_dataset(const std::vector<DimensionData>& data,
                                              const DecisionPolicy& policy, long B,
                                              SeedSpec seed);

/// Single-dimension version of the same pipeline.
[[nodiscard]] DimensionReport analyze_dimension(const DimensionData& dim,
                                                const DecisionPolicy& policy, long B,
                                                SeedSpec seed);

/// Stable 64-bit FNV-1a hash used for per-dimension stream ids.
[[nodiscard]] std::uint64_t dimension_stream_id(const std::string& dimension_id);

}  // namespace capkit
