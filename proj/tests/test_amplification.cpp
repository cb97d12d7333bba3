#include <doctest.h>

#include <array>
#include <cmath>

#include "capkit/amplification.hpp"
#include "capkit/errors.hpp"
#include "capkit/rng.hpp"
#include "fixture.hpp"
#include "oracles.hpp"

using namespace capkit;

namespace {

// Independent central-difference elasticity of log(2 sf(z/s)) in log s,
// evaluated in long double so the oracle itself carries no cancellation.
double a_sigma_fd(double z) {
    const long double h = 1e-6L;
    const auto lp = [&](long double s) { return logl(2.0L * oracle::norm_sf_ld(z / s)); };
    return static_cast<double>((lp(expl(h)) - lp(expl(-h))) / (2.0L * h));
}

}  // namespace

TEST_CASE("mills ratio op examples") {
    CHECK(mills_ratio(0.0) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-14));
    CHECK(mills_ratio(3.99) ==
          doctest::Approx(static_cast<double>(oracle::mills_ld(3.99L))).epsilon(1e-9));
    CHECK(mills_ratio(30.0) ==
          doctest::Approx(30.0 + 1.0 / 30.0 - 2.0 / 27000.0).epsilon(1e-6));
    CHECK_THROWS_AS((void)mills_ratio(INFINITY), DomainError);
}

TEST_CASE("mills ratio bounds: r(z) > z, gap shrinking") {
    double prev_gap = 1e300;
    for (double z = 0.5; z <= 40.0; z += 0.5) {
        const double r = mills_ratio(z);
        CHECK(r > z);
        const double gap = r - z;
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("closed-form amplification") {
    CHECK(amplification_normal(1e-8).a_sigma < 1e-7);  // z r(z) -> 0
    const auto p = amplification_normal(1.33);
    CHECK(p.z == doctest::Approx(3.99));
    CHECK(p.a_sigma == doctest::Approx(16.822138321437023).epsilon(1e-12));  // ~16.9
    CHECK(p.a_sigma == doctest::Approx(a_sigma_fd(3.99)).epsilon(1e-4));
    CHECK(p.a_sigma == doctest::Approx(p.z * p.mills).epsilon(1e-15));

    CHECK(amplification_normal(1.67).a_sigma > amplification_normal(1.33).a_sigma);
    CHECK(amplification_normal(1.33).a_sigma > 1.0);
    CHECK_THROWS_AS((void)amplification_normal(0.0), DomainError);
    CHECK_THROWS_AS((void)amplification_normal(-1.0), DomainError);
}

TEST_CASE("numeric amplification agrees with the closed form on a z grid") {
    for (double cpk : {0.2, 0.5, 1.0, 1.33, 1.67, 2.0, 8.0 / 3.0}) {
        const double z = 3.0 * cpk;
        SpecificationLimits spec{0.0, z, z};
        const auto m = make_model(Family::Normal, 0.0, 1.0);
        const double numeric = amplification_numeric(m, spec);
        CHECK(numeric == doctest::Approx(amplification_normal(cpk).a_sigma).epsilon(1e-4));
        CHECK(numeric == doctest::Approx(a_sigma_fd(z)).epsilon(1e-4));
    }
}

TEST_CASE("amplification crossover point (regression)") {
    // bisection on z r(z) = 1
    double lo = 0.1, hi = 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid * mills_ratio(mid) < 1.0 ? lo : hi) = mid;
    }
    const double z_star = 0.5 * (lo + hi);
    CHECK(z_star == doctest::Approx(0.75179152469356446).epsilon(1e-10));
    CHECK(z_star / 3.0 == doctest::Approx(0.25059717489785482).epsilon(1e-10));
    // above the crossover the coefficient exceeds 1
    for (double cpk = 0.26; cpk < 3.0; cpk += 0.1)
        CHECK(amplification_normal(cpk).a_sigma > 1.0);
}

TEST_CASE("weibull tail of D056 amplifies harder than the cpk-matched normal") {
    const auto& d = testdata::dim("D056");
    const auto sel = select_model(d.batch);
    REQUIRE(sel.model.family == Family::Weibull);
    const double a_weibull = amplification_numeric(sel.model, d.spec);
    const double cpk_n = cpk_plugin(summarize(d.batch), d.spec).cpk;
    CHECK(a_weibull > amplification_normal(cpk_n).a_sigma);
}

TEST_CASE("per-tail amplification") {
    const auto m = make_model(Family::Normal, 0.0, 1.0);
    // centered: both tails identical to the combined elasticity
    const auto centered = amplification_numeric_tails(m, SpecificationLimits{0.0, 3.0, 3.0});
    CHECK(centered.lower == doctest::Approx(centered.upper).epsilon(1e-10));
    CHECK(centered.combined == doctest::Approx(centered.lower).epsilon(1e-8));

    // off-center: the farther limit is the more sensitive tail, and the
    // combined value is the probability-weighted mix of the two
    const auto off = amplification_numeric_tails(m, SpecificationLimits{0.5, 3.0, 3.0});
    CHECK(off.upper > off.lower);  // usl at z = 3.5, lsl at z = -2.5
    CHECK(off.upper == doctest::Approx(amplification_normal(3.5 / 3.0).a_sigma).epsilon(1e-4));
    CHECK(off.lower == doctest::Approx(amplification_normal(2.5 / 3.0).a_sigma).epsilon(1e-4));
    CHECK(off.combined > off.lower);
    CHECK(off.combined < off.upper);

    // one-sided spec: absent tail reports NaN
    const auto one_sided =
        amplification_numeric_tails(m, SpecificationLimits{0.0, 3.0, INFINITY});
    CHECK(std::isnan(one_sided.lower));
    CHECK(one_sided.upper == doctest::Approx(amplification_normal(1.0).a_sigma).epsilon(1e-4));
}

TEST_CASE("numeric amplification rejects a zero tail") {
    SpecificationLimits spec{0.0, INFINITY, INFINITY};
    CHECK_THROWS_AS((void)amplification_numeric(make_model(Family::Normal, 0.0, 1.0), spec),
                    DomainError);
}

TEST_CASE("dispersion sensitivity") {
    SpecificationLimits spec{0.0, 2.0, 2.0};
    const auto m = make_model(Family::Normal, 0.0, 1.0);
    CHECK(dispersion_sensitivity(m, spec) == doctest::Approx(0.1079819330263761).epsilon(1e-12));

    SpecificationLimits at_mean{0.0, 1e-300, 1.0};  // usl -> mu
    CHECK(dispersion_sensitivity(m, at_mean) == doctest::Approx(0.0).epsilon(1e-12));

    // finite-difference cross-check, sigma doubled with usl - mu fixed
    const auto m2 = make_model(Family::Normal, 0.0, 2.0);
    const double h = 1e-6;
    const double fd = (make_model(Family::Normal, 0.0, 2.0 + h).sf(2.0) -
                       make_model(Family::Normal, 0.0, 2.0 - h).sf(2.0)) /
                      (2.0 * h);
    CHECK(dispersion_sensitivity(m2, spec) == doctest::Approx(fd).epsilon(1e-6));

    // non-normal families use the numeric route
    const auto w = make_model(Family::Weibull, 3.0, 1.0);
    const double fdw =
        (w.with_scale_factor(1.0 + 1e-6).sf(2.0) - w.with_scale_factor(1.0 - 1e-6).sf(2.0)) /
        (2.0 * 1e-6 * w.scale);
    CHECK(dispersion_sensitivity(w, SpecificationLimits{0.0, 2.0, 2.0}) ==
          doctest::Approx(fdw).epsilon(1e-5));
}

TEST_CASE("delta-method variance basics") {
    SampleSummary s;
    s.n = 32;
    s.mean = 0.0;
    s.sd = 1.0;
    s.cv_s = cv_of_sd(32);

    SpecificationLimits spec{0.0, 3.99, 3.99};  // cpk = 1.33 centered
    const auto r = delta_method_var_ppm(s, spec);
    CHECK(r.grad_mean == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.var_ppm == doctest::Approx(r.grad_mean * r.grad_mean * r.cov_mean +
                                       r.grad_sd * r.grad_sd * r.cov_sd).epsilon(1e-14));
    const double ppm0 = defect_risk(make_model(Family::Normal, 0.0, 1.0), spec).ppm();
    CHECK(r.sd_ppm / ppm0 > s.cv_s);  // variance amplification

    SpecificationLimits none{0.0, INFINITY, INFINITY};
    CHECK(delta_method_var_ppm(s, none).var_ppm == 0.0);
}

TEST_CASE("delta-method sd tracks the dispersion-only Monte Carlo sd") {
    // First-order check; mean fixed at the process center, matching the
    // perturbation setting the gradient formula describes.
    const std::size_t n = 32;
    const long R = 100000;
    for (double cpk : {0.8, 1.0}) {
        const double z = 3.0 * cpk;
        SpecificationLimits spec{0.0, z, z};
        SampleSummary s;
        s.n = n;
        s.mean = 0.0;
        s.sd = 1.0;
        s.cv_s = cv_of_sd(n);
        const double predicted = delta_method_var_ppm(s, spec).sd_ppm;

        const SeedSpec seed{424242, cpk < 0.9 ? 0ULL : 1ULL};
        double sum = 0.0, ss = 0.0;
        for (long r = 0; r < R; ++r) {
            RandomStream stream(seed.derived(static_cast<std::uint64_t>(r)));
            double m = 0.0;
            std::array<double, n> x;
            for (auto& v : x) {
                v = stream.next_normal();
                m += v;
            }
            m /= n;
            double dev = 0.0;
            for (double v : x) dev += (v - m) * (v - m);
            const double sd_hat = std::sqrt(dev / (n - 1.0));
            const double ppm =
                defect_risk(make_model(Family::Normal, 0.0, sd_hat), spec).ppm();
            sum += ppm;
            ss += ppm * ppm;
        }
        const double mean = sum / R;
        const double emp_sd = std::sqrt((ss - R * mean * mean) / (R - 1.0));
        CHECK(std::abs(predicted - emp_sd) / emp_sd < 0.25);
    }
    // At cpk = 1.2 the exact map is visibly convex over a 12.7% sigma swing;
    // first order underestimates, within a factor of two.
    {
        SpecificationLimits spec{0.0, 3.6, 3.6};
        SampleSummary s;
        s.n = n;
        s.mean = 0.0;
        s.sd = 1.0;
        s.cv_s = cv_of_sd(n);
        const double predicted = delta_method_var_ppm(s, spec).sd_ppm;
        double sum = 0.0, ss = 0.0;
        const SeedSpec seed{424242, 2};
        for (long r = 0; r < R; ++r) {
            RandomStream stream(seed.derived(static_cast<std::uint64_t>(r)));
            double m = 0.0;
            std::array<double, n> x;
            for (auto& v : x) {
                v = stream.next_normal();
                m += v;
            }
            m /= n;
            double dev = 0.0;
            for (double v : x) dev += (v - m) * (v - m);
            const double ppm = defect_risk(make_model(Family::Normal, 0.0,
                                                      std::sqrt(dev / (n - 1.0))), spec).ppm();
            sum += ppm;
            ss += ppm * ppm;
        }
        const double mean = sum / R;
        const double emp_sd = std::sqrt((ss - R * mean * mean) / (R - 1.0));
        CHECK(predicted < emp_sd);
        CHECK(predicted > 0.4 * emp_sd);
    }
}

TEST_CASE("perturbation triplet is first-order consistent with a_sigma in log space") {
    // log(PPM+/PPM0) ~ a_sigma * log(1 + cv); a 12.7% sigma step is far from
    // infinitesimal in these tails, so the band is [a/2, 2a].
    for (const auto& d : testdata::fixture()) {
        const auto s = summarize(d.batch);
        const double cpk = cpk_plugin(s, d.spec).cpk;
        if (cpk < 1.0) continue;
        const auto t = perturbed_ppm(s, d.spec);
        const double elasticity =
            (t.plus.total.log_p - t.base.total.log_p) / std::log1p(t.cv);
        const auto m = make_model(Family::Normal, s.mean, s.sd);
        const double a = amplification_numeric(m, d.spec);
        CHECK(elasticity > a / 2.0);
        CHECK(elasticity < a * 2.0);
    }
}
