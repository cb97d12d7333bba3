#pragma once

#include <string>

namespace capkit {

/// Shortest decimal string that parses back to exactly the same double.
[[nodiscard]] std::string format_full(double v);

/// Table-style display: three significant digits, scientific notation when
/// |x| < 0.01 or |x| >= 1e5 (and always for values carried only in log
/// space). NaN renders as empty.
[[nodiscard]] std::string format_display(double v);

/// Same display convention driven by log10 of a positive quantity, so
/// values far below double underflow still render (e.g. "9.24e-58").
[[nodiscard]] std::string format_display_log10(double log10_value);

}  // namespace capkit
