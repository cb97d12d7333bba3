#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "capkit/capability.hpp"
#include "capkit/rng.hpp"
#include "capkit/stats.hpp"

namespace capkit {

enum class ApprovalRule { PointThreshold, LcbBootstrap, LcbAnalytic };

[[nodiscard]] const char* rule_name(ApprovalRule rule);

struct DecisionPolicy {
    double c0 = 1.33;     // capability threshold
    double gamma = 0.95;  // reliability level
    ApprovalRule rule = ApprovalRule::PointThreshold;

    [[nodiscard]] double alpha() const { return 1.0 - gamma; }
    void validate() const;  // 0 < gamma < 1, c0 > 0
};

enum class Decision { Accept, Reject };

struct ReliabilitySummary {
    double point_cpk = 0.0;          // plug-in index of the original batch
    double p_hat = 0.0;              // accepted / b_resamples, exact
    long accepted = 0;
    double lcb = 0.0;                // percentile bootstrap lower bound
    long b_resamples = 0;
    long degenerate_resamples = 0;   // zero-variance resamples (signed-inf rule)
    bool degenerate_batch = false;   // the batch itself has zero variance
    Decision decision = Decision::Reject;
    ApprovalRule rule_used = ApprovalRule::PointThreshold;

    static constexpr const char* kQuantileConvention = "nearest-rank percentile";
};

/// Nonparametric bootstrap of the plug-in index: B resamples of size n with
/// replacement, p_hat = acceptance fraction at c0, lcb = empirical
/// alpha-quantile (nearest rank). Zero-variance resamples count as +inf when
/// the resample mean lies strictly inside the limits, -inf otherwise.
/// Resample b draws from seed.derived(n).derived(b), so a bootstrap pass
/// curve evaluated at the batch's own n reproduces p_hat exactly.
[[nodiscard]] ReliabilitySummary bootstrap_reliability(const MeasurementBatch& batch,
                                                       const SpecificationLimits& spec,
                                                       const DecisionPolicy& policy, long B,
                                                       SeedSpec seed);

/// Bissell-style one-sided lower confidence bound:
///   cpk * (1 - z_{1-alpha} * sqrt(1/(9 n cpk^2) + 1/(2(n-1)))).
[[nodiscard]] double lcb_analytic(const SampleSummary& summary, const SpecificationLimits& spec,
                                  double alpha);
[[nodiscard]] double lcb_analytic(double cpk, std::size_t n, double alpha);

struct MisclassificationRisk {
    std::optional<double> type1;  // false acceptance, defined when cpk_true < c0
    std::optional<double> type2;  // false rejection, defined when cpk_true >= c0
    double acceptance_probability = 0.0;
    double mc_std_err = 0.0;  // binomial SE of the applicable estimate
    long replications = 0;
};

/// Monte Carlo misclassification risk for a centered normal process with
/// z = 3 cpk_true (unit sigma, limits at +-z). Replications match the
/// figure-style setup: the process mean is held fixed and only dispersion is
/// re-estimated, with sigma-hat = S / c4(n) (the unbiased SPC estimator), so
/// acceptance probability at cpk_true = c0 sits near one half at every n.
/// Supports the point and analytic-LCB rules.
[[nodiscard]] MisclassificationRisk misclassification_mc(double cpk_true, std::size_t n,
                                                         const DecisionPolicy& policy, long R,
                                                         SeedSpec seed);

/// One simulated capability estimate from that setup (n normal draws come
/// off `stream` in order). Exposed so pass curves use the identical draw.
[[nodiscard]] double simulate_plugin_cpk(RandomStream& stream, std::size_t n, double cpk_true,
                                         double mean_offset = 0.0);

/// Bias factor c4(n) = E[S]/sigma under normal sampling.
[[nodiscard]] double c4_constant(std::size_t n);

/// Inputs for rule application; fields may be absent when not computed.
struct RuleInputs {
    double point_cpk = 0.0;
    std::optional<double> bootstrap_lcb;
    std::optional<double> analytic_lcb;
};

/// Apply the policy's rule (>= is inclusive). Throws DomainError when the
/// rule's required bound is missing.
[[nodiscard]] Decision apply_rule(const RuleInputs& inputs, const DecisionPolicy& policy);
[[nodiscard]] Decision apply_rule(const ReliabilitySummary& summary, const DecisionPolicy& policy);

}  // namespace capkit
