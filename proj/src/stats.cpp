#include "emdscale/stats.hpp"

#include <algorithm>
#include <cmath>

#include "emdscale/errors.hpp"
#include "emdscale/signal.hpp"

namespace emdscale {

void validate_finite(const Signal& s) {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (!std::isfinite(s.values[i])) {
            throw DataError("non-finite value at sample " + std::to_string(i) +
                            (s.label.empty() ? "" : " of '" + s.label + "'"));
        }
    }
}

ExtremaIndices find_local_extrema(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 3) {
        throw DegenerateInputError("find_local_extrema needs length >= 3, got " +
                                   std::to_string(n));
    }

    ExtremaIndices out;
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i < n && values[i] == values[run_start]) {
            continue; // still inside the run of equal values
        }
        const std::size_t run_end = i - 1;
        if (run_start > 0 && run_end < n - 1) {
            const double v = values[run_start];
            const double prev = values[run_start - 1];
            const double next = values[run_end + 1];
            if (prev < v && next < v) {
                out.maxima.push_back(run_start);
            } else if (prev > v && next > v) {
                out.minima.push_back(run_start);
            }
        }
        run_start = i;
    }
    return out;
}

std::size_t count_zero_crossings(std::span<const double> values) {
    std::size_t count = 0;
    int last_sign = 0;
    for (double v : values) {
        const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : last_sign);
        if (s != 0 && last_sign != 0 && s != last_sign) {
            ++count;
        }
        if (s != 0) {
            last_sign = s;
        }
    }
    return count;
}

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw DegenerateInputError("mean of empty sequence");
    }
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) {
        throw DegenerateInputError("variance needs length >= 2, got " +
                                   std::to_string(n));
    }
    const double m = mean(values);
    double acc = 0.0;
    for (double v : values) {
        const double d = v - m;
        acc += d * d;
    }
    return acc / static_cast<double>(n);
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    if (n != ys.size()) {
        throw ArgumentError("linear_fit: xs and ys differ in length");
    }
    if (n < 2) {
        throw DegenerateInputError("linear_fit needs >= 2 points, got " +
                                   std::to_string(n));
    }

    const double mx = mean(xs);
    const double my = mean(ys);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        sxx += dx * dx;
        sxy += dx * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw SingularFitError("linear_fit: xs carry no variance");
    }

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.n_points = n;

    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        const double d = ys[i] - my;
        ss_res += r * r;
        ss_tot += d * d;
    }
    if (ss_tot == 0.0) {
        fit.r_squared = ss_res == 0.0 ? 1.0 : 0.0;
    } else {
        fit.r_squared = 1.0 - ss_res / ss_tot;
    }
    return fit;
}

double percentile(std::span<const double> values, double p) {
    if (values.empty()) {
        throw DegenerateInputError("percentile of empty list");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ArgumentError("percentile: p must lie in [0, 1]");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    const double rank = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace emdscale
