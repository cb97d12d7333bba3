#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace capkit {

/// Minimum observations before a parametric fit is attempted.
inline constexpr std::size_t kMinFitObservations = 8;

/// One dimension's raw measurements, in the same unit as its limits.
struct MeasurementBatch {
    std::string dimension_id;
    std::vector<double> values;

    [[nodiscard]] std::size_t n() const { return values.size(); }

    /// Throws DomainError unless n >= 2 and every value is finite.
    void validate() const;
};

/// Conventions: sd uses the n-1 divisor; skewness and excess kurtosis are
/// the adjusted Fisher-Pearson standardized moments (G1, G2).
struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double cv_s = 0.0;  // 1/sqrt(2(n-1))

    static constexpr const char* kMomentConvention = "adjusted Fisher-Pearson (G1,G2), sd divisor n-1";
};

/// Coefficient of variation of the sample sd under normal sampling.
[[nodiscard]] double cv_of_sd(std::size_t n);

/// Two-pass moments of a batch. Throws DomainError for n < 2 or non-finite
/// values. G1/G2 are 0 for degenerate (zero-variance) samples.
[[nodiscard]] SampleSummary summarize(const MeasurementBatch& batch);

/// Same, on a raw span.
[[nodiscard]] SampleSummary summarize(std::span<const double> values);

}  // namespace capkit
