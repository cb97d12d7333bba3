#include "capkit/report.hpp"

#include <exception>
#include <future>

#include "capkit/errors.hpp"

namespace capkit {

std::uint64_t dimension_stream_id(const std::string& dimension_id) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dimension_id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

DistributionModel capability_model(const DistributionModel& likelihood_model,
                                   const SampleSummary& summary) {
    if (likelihood_model.family == Family::Normal)
        return make_model(Family::Normal, summary.mean, summary.sd);
    return likelihood_model;
}

DimensionReport analyze_dimension(const DimensionData& dim, const DecisionPolicy& policy, long B,
                                  SeedSpec seed) {
    DimensionReport r;
    r.dimension_id = dim.batch.dimension_id;
    r.spec = dim.spec;
    try {
        dim.spec.validate();
        r.summary = summarize(dim.batch);

        const ModelSelection sel = select_model(dim.batch);
        r.normality = sel.normality;
        r.selected_family = sel.model.family;
        r.likelihood_model = sel.model;
        r.aicc_stage_ran = sel.aicc_stage_ran;
        r.normal_won_after_rejection = sel.normal_won_after_rejection;
        r.aicc_tie_broken = sel.tie_broken_by_order;

        const CapabilityEstimate plugin = cpk_plugin(r.summary, dim.spec);
        const DistributionModel cap_model = capability_model(sel.model, r.summary);
        const CapabilityEstimate fitted = cpk_percentile(cap_model, dim.spec);
        r.cpk_normal = plugin.cpk;
        r.cpk_fitted = fitted.cpk;
        r.delta_cpk = model_distortion(fitted, plugin).delta_cpk;

        r.ppm_normal = perturbed_ppm(r.summary, dim.spec);
        r.ppm_fitted = perturbed_ppm_fitted(cap_model, dim.spec, r.summary.cv_s);

        const SeedSpec dim_seed = seed.derived(dimension_stream_id(r.dimension_id));
        r.reliability = bootstrap_reliability(dim.batch, dim.spec, policy, B, dim_seed);
        r.lcb_analytic_value = lcb_analytic(r.summary, dim.spec, policy.alpha());
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

DatasetAnalysis analyze_dataset(const std::vector<DimensionData>& data,
                                const DecisionPolicy& policy, long B, SeedSpec seed) {
    policy.validate();
    DatasetAnalysis out;
    out.provenance.seed = seed;
    out.provenance.b_resamples = B;
    out.provenance.policy = policy;
    out.provenance.rng_algorithm = kRngAlgorithm;
    out.provenance.moment_convention = SampleSummary::kMomentConvention;
    out.provenance.normality_test = NormalityDiagnostic::kTestName;
    out.provenance.bootstrap_quantile = ReliabilitySummary::kQuantileConvention;

    // Dimensions are independent tasks with id-keyed streams, so parallel
    // scheduling cannot change any number; results land in input order.
    std::vector<std::future<DimensionReport>> tasks;
    tasks.reserve(data.size());
    for (const DimensionData& dim : data)
        tasks.push_back(std::async(std::launch::async, [&policy, B, seed, &dim] {
            return analyze_dimension(dim, policy, B, seed);
        }));
    out.reports.reserve(data.size());
    for (auto& t : tasks) out.reports.push_back(t.get());
    return out;
}

}  // namespace capkit
