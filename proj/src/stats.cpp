#include "capkit/stats.hpp"

#include <cmath>

#include "capkit/errors.hpp"

namespace capkit {

void MeasurementBatch::validate() const {
    if (values.size() < 2)
        throw DomainError("insufficient observations: need n >= 2, got " +
                          std::to_string(values.size()));
    for (double v : values)
        if (!std::isfinite(v))
            throw DomainError("non-finite measurement in batch '" + dimension_id + "'");
}

double cv_of_sd(std::size_t n) {
    if (n < 2) throw DomainError("cv_of_sd: need n >= 2");
    return 1.0 / std::sqrt(2.0 * static_cast<double>(n - 1));
}

SampleSummary summarize(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw DomainError("insufficient observations: need n >= 2");
    for (double v : values)
        if (!std::isfinite(v)) throw DomainError("non-finite measurement");

    const double dn = static_cast<double>(n);
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / dn;

    // Second pass over centered values keeps permutation differences at the
    // rounding level (~1e-16 relative).
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;

    SampleSummary s;
    s.n = n;
    s.mean = mean;
    s.sd = std::sqrt(m2 * dn / (dn - 1.0));
    s.cv_s = cv_of_sd(n);
    if (m2 > 0.0 && n > 3) {
        const double g1 = m3 / std::pow(m2, 1.5);
        const double g2 = m4 / (m2 * m2) - 3.0;
        s.skewness = g1 * std::sqrt(dn * (dn - 1.0)) / (dn - 2.0);
        s.excess_kurtosis = ((dn + 1.0) * g2 + 6.0) * (dn - 1.0) / ((dn - 2.0) * (dn - 3.0));
    }
    return s;
}

SampleSummary summarize(const MeasurementBatch& batch) {
    batch.validate();
    return summarize(std::span<const double>(batch.values));
}

}  // namespace capkit
