#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emdscale {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
};

struct ExtremaIndices {
    std::vector<std::size_t> maxima;
    std::vector<std::size_t> minima;
};

// Interior local extrema. A run of equal values that forms an extremum
// contributes exactly one index, the first of the run. Runs touching either
// end of the series are never extrema. Throws DegenerateInputError for
// length < 3.
ExtremaIndices find_local_extrema(std::span<const double> values);

// Number of strict sign flips. An exact zero inherits the sign of the
// previous nonzero value, so a touch of the axis is not a crossing.
std::size_t count_zero_crossings(std::span<const double> values);

double mean(std::span<const double> values);

// Population variance (divide by n). Throws DegenerateInputError for n < 2.
double variance(std::span<const double> values);

// Ordinary least squares with intercept. r_squared = 1 - SS_res/SS_tot;
// when SS_tot is zero it is 1 for an exact fit and 0 otherwise. Throws
// SingularFitError when the xs carry no variance.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

// Order statistic with linear interpolation at fractional rank p*(n-1),
// p in [0,1]. Throws DegenerateInputError on an empty list.
double percentile(std::span<const double> values, double p);

} // namespace emdscale
