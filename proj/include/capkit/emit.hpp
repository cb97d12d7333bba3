#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "capkit/report.hpp"
#include "capkit/samplesize.hpp"

namespace capkit {

// Report emission. CSV rows start with the table-style display cells and end
// with full-precision columns (PPM cells as log10), so nothing is lost to
// display rounding. JSON carries full precision plus display strings and a
// conventions sidecar; log-space PPM values serialize as {"log10_ppm": x}.

void emit_report_csv(const DatasetAnalysis& analysis, std::ostream& out);
void emit_report_csv(const DatasetAnalysis& analysis, const std::string& path);

void emit_report_json(const DatasetAnalysis& analysis, std::ostream& out);
void emit_report_json(const DatasetAnalysis& analysis, const std::string& path);

// Pass-curve emission.

void emit_curves_csv(const std::vector<PassCurve>& curves, std::ostream& out);
void emit_curves_csv(const std::vector<PassCurve>& curves, const std::string& path);

void emit_curves_json(const std::vector<PassCurve>& curves, std::ostream& out);
void emit_curves_json(const std::vector<PassCurve>& curves, const std::string& path);

/// Standalone SVG: one labeled curve per capability level, log-scaled n
/// axis, p_acc in [0,1], dashed horizontal line at the reliability target.
void emit_curves_svg(const std::vector<PassCurve>& curves, double gamma, std::ostream& out);
void emit_curves_svg(const std::vector<PassCurve>& curves, double gamma, const std::string& path);

}  // namespace capkit
