#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "capkit/capability.hpp"
#include "capkit/reliability.hpp"
#include "capkit/rng.hpp"
#include "capkit/stats.hpp"

namespace capkit {

struct PassPoint {
    std::size_t n = 0;
    double p_acc = 0.0;
    double mc_std_err = 0.0;
};

struct PassCurve {
    double cpk_true = 0.0;
    double c0 = 0.0;
    std::vector<PassPoint> points;  // strictly increasing in n
    long replications = 0;
    SeedSpec seed;
};

/// Probability-of-pass curve under the centered-normal simulation described
/// at misclassification_mc (fixed mean, sigma-hat = S/c4). Grid point n uses
/// sub-streams seed.derived(n).derived(r), so results do not depend on grid
/// order or scheduling.
[[nodiscard]] PassCurve pass_curve(double cpk_true, double c0,
                                   const std::vector<std::size_t>& n_grid, long R, SeedSpec seed,
                                   double mean_offset = 0.0);

struct SampleSizeResult {
    double gamma = 0.0;
    bool attained = false;
    std::size_t n_min = 0;           // valid when attained
    std::string verdict;             // "attained" or the unattainable reason
    std::vector<PassPoint> trace;    // every evaluated (n, p_acc)
};

/// Smallest n with p_acc(n) >= gamma: doubling scan then bisection, each
/// point estimated with R replications; the 2-standard-error guard decides
/// the unattainable verdict at n_max.
[[nodiscard]] SampleSizeResult n_min_search(double cpk_true, double c0, double gamma, long R,
                                            std::size_t n_max, SeedSpec seed);

/// Bootstrap approximation of the pass curve on real data: per grid n, B
/// with-replacement resamples of size n from the batch, pass fraction of the
/// plug-in index at c0. Grid point n draws from seed.derived(n).derived(b),
/// matching bootstrap_reliability at the batch's own n.
[[nodiscard]] PassCurve bootstrap_pass_curve(const MeasurementBatch& batch,
                                             const SpecificationLimits& spec, double c0,
                                             const std::vector<std::size_t>& n_grid, long B,
                                             SeedSpec seed);

}  // namespace capkit
