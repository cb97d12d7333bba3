#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "capkit/dataset.hpp"

namespace testdata {

inline const std::vector<capkit::DimensionData>& fixture() {
    static const std::vector<capkit::DimensionData> data =
        capkit::ingest(std::string(CAPKIT_DATA_DIR) + "/dimensions.csv");
    return data;
}

inline const capkit::DimensionData& dim(const std::string& id) {
    for (const auto& d : fixture())
        if (d.batch.dimension_id == id) return d;
    throw std::runtime_error("fixture dimension not found: " + id);
}

}  // namespace testdata
