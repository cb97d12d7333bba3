#include <doctest.h>

#include <cmath>

#include "capkit/errors.hpp"
#include "capkit/normal.hpp"
#include "oracles.hpp"

namespace cn = capkit::normal;

TEST_CASE("survival function against long-double erfc") {
    for (double z = -8.0; z <= 37.5; z += 0.25) {
        const long double ref = oracle::norm_sf_ld(z);
        CHECK(cn::sf(z) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-13));
    }
    CHECK(cn::sf(0.0) == 0.5);
    // frozen high-precision value; the naive 1 - cdf form would return 0 here
    CHECK(cn::sf(10.27) == doctest::Approx(4.8102330448433171e-25).epsilon(1e-13));
}

TEST_CASE("log survival stays accurate to z = 40 and beyond") {
    CHECK(cn::log_sf(10.27) == doctest::Approx(-55.993881791835763).epsilon(1e-13));
    CHECK(cn::log_sf(20.0) == doctest::Approx(-203.91715537109726).epsilon(1e-13));
    CHECK(cn::log_sf(40.0) == doctest::Approx(-804.60844201375379).epsilon(1e-13));
    // agreement with log(sf) wherever sf is comfortably representable
    for (double z = -6.0; z <= 36.0; z += 0.5) {
        const double s = cn::sf(z);
        if (s > 1e-290)
            CHECK(cn::log_sf(z) == doctest::Approx(std::log(s)).epsilon(1e-10));
    }
    // past double underflow the log form is still finite
    CHECK(cn::sf(40.0) == 0.0);
    CHECK(std::isfinite(cn::log_sf(40.0)));
    CHECK(std::isfinite(cn::log_sf(60.0)));
}

TEST_CASE("quantile round trip") {
    for (double p : {1e-12, 1e-6, 1e-3, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 1.0 - 1e-6}) {
        const double z = cn::quantile(p);
        CHECK(cn::cdf(z) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(cn::quantile(0.5) == 0.0);
    CHECK(cn::quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
    CHECK(cn::quantile(0.95) == doctest::Approx(1.6448536269514727).epsilon(1e-14));
    CHECK_THROWS_AS((void)cn::quantile(0.0), capkit::DomainError);
    CHECK_THROWS_AS((void)cn::quantile(1.0), capkit::DomainError);
}

TEST_CASE("mills ratio matches independent routes") {
    // libm long-double route across the working range
    for (double z = -8.0; z <= 40.0; z += 0.5) {
        const double ref = static_cast<double>(oracle::mills_ld(z));
        CHECK(cn::mills_ratio(z) == doctest::Approx(ref).epsilon(1e-10));
    }
    // continued-fraction route in the tail
    for (double z : {2.0, 3.99, 8.0, 15.0, 25.0, 30.0, 40.0}) {
        const double ref = static_cast<double>(oracle::mills_cf(z));
        CHECK(cn::mills_ratio(z) == doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK(cn::mills_ratio(0.0) == doctest::Approx(0.79788456080286536).epsilon(1e-14));
    CHECK(cn::mills_ratio(3.99) == doctest::Approx(4.2160747672774494).epsilon(1e-12));
    // asymptotic form z + 1/z - 2/z^3
    CHECK(cn::mills_ratio(30.0) ==
          doctest::Approx(30.0 + 1.0 / 30.0 - 2.0 / 27000.0).epsilon(1e-6));
}

TEST_CASE("erfcx is continuous across the asymptotic switch") {
    for (double x : {24.9, 24.999, 25.0, 25.001, 25.1}) {
        const double lo = cn::erfcx(x * (1.0 - 1e-9));
        const double hi = cn::erfcx(x * (1.0 + 1e-9));
        CHECK(lo == doctest::Approx(hi).epsilon(1e-8));
    }
}
