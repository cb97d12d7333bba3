#include "capkit/samplesize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bootstrap_common.hpp"
#include "capkit/errors.hpp"

namespace capkit {

namespace {

PassPoint estimate_point(double cpk_true, double c0, std::size_t n, long R, SeedSpec seed,
                         double mean_offset) {
    const SeedSpec point_seed = seed.derived(static_cast<std::uint64_t>(n));
    long passed = 0;
    for (long r = 0; r < R; ++r) {
        RandomStream stream(point_seed.derived(static_cast<std::uint64_t>(r)));
        if (simulate_plugin_cpk(stream, n, cpk_true, mean_offset) >= c0) ++passed;
    }
    PassPoint p;
    p.n = n;
    p.p_acc = static_cast<double>(passed) / static_cast<double>(R);
    p.mc_std_err = std::sqrt(p.p_acc * (1.0 - p.p_acc) / static_cast<double>(R));
    return p;
}

}  // namespace

PassCurve pass_curve(double cpk_true, double c0, const std::vector<std::size_t>& n_grid, long R,
                     SeedSpec seed, double mean_offset) {
    if (!(cpk_true > 0.0)) throw DomainError("pass_curve: cpk_true must be positive");
    if (R < 100) throw DomainError("pass_curve: need R >= 100");
    for (std::size_t n : n_grid)
        if (n < 2) throw DomainError("pass_curve: grid sizes must be >= 2");
    if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
        std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end())
        throw DomainError("pass_curve: grid must be strictly increasing");

    PassCurve curve;
    curve.cpk_true = cpk_true;
    curve.c0 = c0;
    curve.replications = R;
    curve.seed = seed;
    curve.points.reserve(n_grid.size());
    for (std::size_t n : n_grid)
        curve.points.push_back(estimate_point(cpk_true, c0, n, R, seed, mean_offset));
    return curve;
}

SampleSizeResult n_min_search(double cpk_true, double c0, double gamma, long R,
                              std::size_t n_max, SeedSpec seed) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("n_min_search: gamma must lie in (0,1)");
    if (!(cpk_true > 0.0)) throw DomainError("n_min_search: cpk_true must be positive");
    if (R < 100) throw DomainError("n_min_search: need R >= 100");
    if (n_max < 2) throw DomainError("n_min_search: n_max must be >= 2");

    SampleSizeResult res;
    res.gamma = gamma;

    if (cpk_true <= c0 && gamma > 0.5) {
        res.verdict = "unattainable: true capability at or below threshold";
        return res;
    }

    const auto eval = [&](std::size_t n) {
        PassPoint p = estimate_point(cpk_true, c0, n, R, seed, 0.0);
        res.trace.push_back(p);
        return p;
    };

    // Doubling scan for a bracket [lo fails, hi passes].
    std::size_t lo = 0;  // 0 = "no failing point yet below hi"
    std::size_t n = 2;
    PassPoint p = eval(n);
    while (p.p_acc < gamma) {
        lo = n;
        if (n >= n_max) {
            if (p.p_acc + 2.0 * p.mc_std_err < gamma)
                res.verdict = "unattainable within n_max";
            else
                res.verdict = "not reached by n_max (estimate within 2 SE of gamma)";
            return res;
        }
        n = std::min(n * 2, n_max);
        p = eval(n);
    }
    std::size_t hi = n;

    // Bisection down to adjacent integers.
    while (hi - lo > 1 && lo > 0) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (eval(mid).p_acc >= gamma)
            hi = mid;
        else
            lo = mid;
    }

    res.attained = true;
    res.n_min = hi;
    res.verdict = "attained";
    return res;
}

PassCurve bootstrap_pass_curve(const MeasurementBatch& batch, const SpecificationLimits& spec,
                               double c0, const std::vector<std::size_t>& n_grid, long B,
                               SeedSpec seed) {
    batch.validate();
    spec.validate();
    if (B < 100) throw DomainError("bootstrap_pass_curve: need B >= 100");
    for (std::size_t n : n_grid)
        if (n < 2) throw DomainError("bootstrap_pass_curve: grid sizes must be >= 2");

    PassCurve curve;
    curve.cpk_true = std::numeric_limits<double>::quiet_NaN();  // data-driven, no true value
    curve.c0 = c0;
    curve.replications = B;
    curve.seed = seed;
    curve.points.reserve(n_grid.size());

    std::vector<double> buf;
    for (std::size_t m : n_grid) {
        const SeedSpec point_seed = seed.derived(static_cast<std::uint64_t>(m));
        long passed = 0;
        for (long b = 0; b < B; ++b) {
            RandomStream stream(point_seed.derived(static_cast<std::uint64_t>(b)));
            if (detail::bootstrap_resample_cpk(batch.values, spec, stream, m, buf) >= c0)
                ++passed;
        }
        PassPoint p;
        p.n = m;
        p.p_acc = static_cast<double>(passed) / static_cast<double>(B);
        p.mc_std_err = std::sqrt(p.p_acc * (1.0 - p.p_acc) / static_cast<double>(B));
        curve.points.push_back(p);
    }
    return curve;
}

}  // namespace capkit
