#include "capkit/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace capkit {

std::string format_full(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
        if (back == v || (std::isnan(back) && std::isnan(v))) break;
    }
    return buf;
}

namespace {

std::string scientific3(double mantissa, long exp10) {
    // mantissa in [1, 10); promote 9.995+ rounding into the exponent
    if (mantissa >= 9.995) {
        mantissa /= 10.0;
        ++exp10;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2fe%+03ld", mantissa, exp10);
    return buf;
}

std::string fixed3(double v) {
    const double a = std::abs(v);
    const int mag = static_cast<int>(std::floor(std::log10(a)));
    const int decimals = std::max(0, 2 - mag);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

std::string format_display(double v) {
    if (std::isnan(v)) return "";
    if (v == 0.0) return "0";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    const double a = std::abs(v);
    if (a < 0.01 || a >= 1e5) {
        const double l = std::log10(a);
        double exp10 = std::floor(l);
        const double mant = std::pow(10.0, l - exp10);
        std::string s = scientific3(std::copysign(mant, 1.0), static_cast<long>(exp10));
        return v < 0 ? "-" + s : s;
    }
    // Round to 3 significant digits first; rounding can push the value over
    // a magnitude boundary (99.99 -> 100).
    const int mag = static_cast<int>(std::floor(std::log10(a)));
    const double scale = std::pow(10.0, 2 - mag);
    double r = std::round(v * scale) / scale;
    if (std::abs(r) >= 1e5) return format_display(r);
    return fixed3(r);
}

std::string format_display_log10(double log10_value) {
    if (std::isnan(log10_value)) return "";
    if (std::isinf(log10_value)) return log10_value < 0 ? "0" : "inf";
    if (log10_value >= -2.0 && log10_value < 5.0)
        return format_display(std::pow(10.0, log10_value));
    double exp10 = std::floor(log10_value);
    double mant = std::pow(10.0, log10_value - exp10);
    return scientific3(mant, static_cast<long>(exp10));
}

}  // namespace capkit
