#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "capkit/capability.hpp"
#include "capkit/rng.hpp"
#include "capkit/stats.hpp"

namespace capkit::detail {

// Plug-in cpk of already-drawn values; signed infinity when the variance is
// zero (+inf if the mean is strictly inside the limits, -inf otherwise).
inline double plugin_cpk_or_inf(std::span<const double> values, const SpecificationLimits& spec,
                                bool* degenerate = nullptr) {
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    if (ss <= 0.0) {
        if (degenerate) *degenerate = true;
        return (mean > spec.lsl() && mean < spec.usl())
                   ? std::numeric_limits<double>::infinity()
                   : -std::numeric_limits<double>::infinity();
    }
    if (degenerate) *degenerate = false;
    const double sd = std::sqrt(ss / (n - 1.0));
    return std::min(spec.usl() - mean, mean - spec.lsl()) / (3.0 * sd);
}

// One with-replacement resample of size m from the batch, then its cpk.
// Index draws come off `stream` in order; both the reliability summary and
// the bootstrap pass curve rely on this exact sequence.
inline double bootstrap_resample_cpk(const std::vector<double>& values,
                                     const SpecificationLimits& spec, RandomStream& stream,
                                     std::size_t m, std::vector<double>& buf,
                                     bool* degenerate = nullptr) {
    buf.resize(m);
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < m; ++i) buf[i] = values[stream.next_index(n)];
    return plugin_cpk_or_inf(buf, spec, degenerate);
}

}  // namespace capkit::detail
