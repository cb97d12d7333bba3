#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "capkit/capability.hpp"
#include "capkit/stats.hpp"

namespace capkit {

/// One dimension's measurements plus its specification.
struct DimensionData {
    MeasurementBatch batch;
    SpecificationLimits spec;
};

/// Long-form CSV header accepted by ingest().
inline constexpr const char* kLongCsvHeader = "dim,nominal,tol_plus,tol_minus,idx,value";

/// Read a long-form dataset (UTF-8, '.' decimal). Validates that each
/// dimension's specification is constant, observation indices are contiguous
/// from 1, and all values are finite. Output is ordered by dimension_id.
/// Throws InputError with the offending line or dimension.
[[nodiscard]] std::vector<DimensionData> ingest(const std::string& path);
[[nodiscard]] std::vector<DimensionData> ingest(std::istream& in, const std::string& origin);

/// Convert the wide table layout (one column per dimension; label rows
/// "NO.", "T", "Tol+", "Tol-" then numbered observation rows) into long-form
/// records, so a published appendix table pastes straight in.
[[nodiscard]] std::vector<DimensionData> read_wide(const std::string& path);
[[nodiscard]] std::vector<DimensionData> read_wide(std::istream& in, const std::string& origin);

/// Write records back out in long form.
void write_long_csv(const std::vector<DimensionData>& data, std::ostream& out);
void write_long_csv(const std::vector<DimensionData>& data, const std::string& path);

}  // namespace capkit
