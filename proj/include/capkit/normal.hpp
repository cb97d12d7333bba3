#pragma once

namespace capkit::normal {

// Standard normal building blocks with far-tail accuracy. Survival and
// log-survival stay meaningful out to standardized distances of 40+, where
// the naive 1 - cdf(x) form would have lost everything to cancellation.

/// Scaled complementary error function exp(x^2) * erfc(x), finite for all x.
[[nodiscard]] double erfcx(double x);

/// Density phi(x).
[[nodiscard]] double pdf(double x);

/// Distribution function Phi(x).
[[nodiscard]] double cdf(double x);

/// Survival function 1 - Phi(x), evaluated directly (no cancellation).
/// Underflows to 0 near x = 38.5.
[[nodiscard]] double sf(double x);

/// log(1 - Phi(x)); finite for every finite x.
[[nodiscard]] double log_sf(double x);

/// log(Phi(x)).
[[nodiscard]] double log_cdf(double x);

/// Quantile Phi^{-1}(p), p in (0,1). Wichura's AS 241 (PPND16).
[[nodiscard]] double quantile(double p);

/// Mills ratio phi(x) / (1 - Phi(x)).
[[nodiscard]] double mills_ratio(double x);

}  // namespace capkit::normal
