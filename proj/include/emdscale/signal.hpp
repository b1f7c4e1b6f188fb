#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "emdscale/errors.hpp"

namespace emdscale {

// A finite real-valued time series. `sample_interval_seconds` is the wall
// clock spacing between consecutive samples when known (used only to convert
// component periods into human units).
struct Signal {
    std::vector<double> values;
    std::optional<double> sample_interval_seconds;
    std::string label;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

// Throws DataError if the signal contains NaN or infinity.
void validate_finite(const Signal& s);

} // namespace emdscale
