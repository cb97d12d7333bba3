#include "capkit/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bootstrap_common.hpp"
#include "capkit/errors.hpp"
#include "capkit/normal.hpp"

namespace capkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* rule_name(ApprovalRule rule) {
    switch (rule) {
        case ApprovalRule::PointThreshold: return "point_threshold";
        case ApprovalRule::LcbBootstrap: return "lcb_bootstrap";
        case ApprovalRule::LcbAnalytic: return "lcb_analytic";
    }
    return "?";
}

void DecisionPolicy::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("policy: gamma must lie in (0,1)");
    if (!(c0 > 0.0)) throw DomainError("policy: c0 must be positive");
}

ReliabilitySummary bootstrap_reliability(const MeasurementBatch& batch,
                                         const SpecificationLimits& spec,
                                         const DecisionPolicy& policy, long B, SeedSpec seed) {
    batch.validate();
    spec.validate();
    policy.validate();
    if (B < 100) throw DomainError("bootstrap_reliability: need B >= 100");

    const std::size_t n = batch.n();
    ReliabilitySummary out;
    out.b_resamples = B;
    out.rule_used = policy.rule;

    bool point_degenerate = false;
    out.point_cpk = detail::plugin_cpk_or_inf(batch.values, spec, &point_degenerate);
    out.degenerate_batch = point_degenerate;

    const SeedSpec size_seed = seed.derived(static_cast<std::uint64_t>(n));
    std::vector<double> draws(static_cast<std::size_t>(B));
    std::vector<double> buf;
    for (long b = 0; b < B; ++b) {
        RandomStream stream(size_seed.derived(static_cast<std::uint64_t>(b)));
        bool degenerate = false;
        const double c = detail::bootstrap_resample_cpk(batch.values, spec, stream, n, buf,
                                                        &degenerate);
        if (degenerate) ++out.degenerate_resamples;
        if (c >= policy.c0) ++out.accepted;
        draws[static_cast<std::size_t>(b)] = c;
    }
    out.p_hat = static_cast<double>(out.accepted) / static_cast<double>(B);

    std::sort(draws.begin(), draws.end());
    const long rank = std::clamp<long>(
        static_cast<long>(std::ceil(policy.alpha() * static_cast<double>(B))), 1, B);
    out.lcb = draws[static_cast<std::size_t>(rank - 1)];

    out.decision = apply_rule(out, policy);
    return out;
}

double lcb_analytic(double cpk, std::size_t n, double alpha) {
    if (!(cpk > 0.0)) throw DomainError("lcb_analytic: cpk must be positive");
    if (n < 2) throw DomainError("lcb_analytic: need n >= 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("lcb_analytic: alpha must lie in (0,1)");
    const double dn = static_cast<double>(n);
    const double z = normal::quantile(1.0 - alpha);
    return cpk * (1.0 - z * std::sqrt(1.0 / (9.0 * dn * cpk * cpk) + 1.0 / (2.0 * (dn - 1.0))));
}

double lcb_analytic(const SampleSummary& summary, const SpecificationLimits& spec, double alpha) {
    return lcb_analytic(cpk_plugin(summary, spec).cpk, summary.n, alpha);
}

double c4_constant(std::size_t n) {
    if (n < 2) throw DomainError("c4_constant: need n >= 2");
    const double dn = static_cast<double>(n);
    return std::sqrt(2.0 / (dn - 1.0)) * std::exp(std::lgamma(dn / 2.0) - std::lgamma((dn - 1.0) / 2.0));
}

double simulate_plugin_cpk(RandomStream& stream, std::size_t n, double cpk_true,
                           double mean_offset) {
    static thread_local std::size_t cached_n = 0;
    static thread_local double cached_c4 = 0.0;
    if (cached_n != n) {
        cached_c4 = c4_constant(n);
        cached_n = n;
    }
    const double z0 = 3.0 * cpk_true;  // limits at +-z0, unit sigma
    const double dn = static_cast<double>(n);
    double sum = 0.0, ss = 0.0;
    std::vector<double> sample(n);
    for (std::size_t i = 0; i < n; ++i) {
        sample[i] = mean_offset + stream.next_normal();
        sum += sample[i];
    }
    const double mean = sum / dn;
    for (double v : sample) ss += (v - mean) * (v - mean);
    if (ss <= 0.0) return kInf;
    const double sigma_hat = std::sqrt(ss / (dn - 1.0)) / cached_c4;
    return std::min(z0 - mean_offset, z0 + mean_offset) / (3.0 * sigma_hat);
}

MisclassificationRisk misclassification_mc(double cpk_true, std::size_t n,
                                           const DecisionPolicy& policy, long R, SeedSpec seed) {
    if (!(cpk_true > 0.0)) throw DomainError("misclassification_mc: cpk_true must be positive");
    if (n < 2) throw DomainError("misclassification_mc: need n >= 2");
    if (R < 100) throw DomainError("misclassification_mc: need R >= 100");
    policy.validate();
    if (policy.rule == ApprovalRule::LcbBootstrap)
        throw DomainError("misclassification_mc: bootstrap LCB rule needs data; "
                          "use point_threshold or lcb_analytic");

    long accepted = 0;
    for (long r = 0; r < R; ++r) {
        RandomStream stream(seed.derived(static_cast<std::uint64_t>(r)));
        const double cpk_hat = simulate_plugin_cpk(stream, n, cpk_true);
        RuleInputs in;
        in.point_cpk = cpk_hat;
        if (policy.rule == ApprovalRule::LcbAnalytic)
            in.analytic_lcb = cpk_hat > 0.0 ? lcb_analytic(cpk_hat, n, policy.alpha())
                                            : -kInf;
        if (apply_rule(in, policy) == Decision::Accept) ++accepted;
    }

    MisclassificationRisk risk;
    risk.replications = R;
    risk.acceptance_probability = static_cast<double>(accepted) / static_cast<double>(R);
    const double p_err = (cpk_true < policy.c0) ? risk.acceptance_probability
                                                : 1.0 - risk.acceptance_probability;
    risk.mc_std_err = std::sqrt(p_err * (1.0 - p_err) / static_cast<double>(R));
    if (cpk_true < policy.c0)
        risk.type1 = p_err;
    else
        risk.type2 = p_err;
    return risk;
}

Decision apply_rule(const RuleInputs& inputs, const DecisionPolicy& policy) {
    policy.validate();
    switch (policy.rule) {
        case ApprovalRule::PointThreshold:
            return inputs.point_cpk >= policy.c0 ? Decision::Accept : Decision::Reject;
        case ApprovalRule::LcbBootstrap:
            if (!inputs.bootstrap_lcb)
                throw DomainError("apply_rule: bootstrap LCB missing for lcb_bootstrap rule");
            return *inputs.bootstrap_lcb >= policy.c0 ? Decision::Accept : Decision::Reject;
        case ApprovalRule::LcbAnalytic:
            if (!inputs.analytic_lcb)
                throw DomainError("apply_rule: analytic LCB missing for lcb_analytic rule");
            return *inputs.analytic_lcb >= policy.c0 ? Decision::Accept : Decision::Reject;
    }
    return Decision::Reject;
}

Decision apply_rule(const ReliabilitySummary& summary, const DecisionPolicy& policy) {
    RuleInputs in;
    in.point_cpk = summary.point_cpk;
    in.bootstrap_lcb = summary.lcb;
    return apply_rule(in, policy);
}

}  // namespace capkit
