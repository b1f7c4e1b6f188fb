#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "emdscale/signal.hpp"

namespace emdscale {

// Sifting parameters. The defaults are the conventional ones: a candidate is
// accepted once its extrema/zero-crossing counts differ by at most one and
// the normalized squared change between consecutive sift passes drops below
// sd_threshold.
struct SiftConfig {
    double sd_threshold = 0.2;
    std::size_t max_sift_iterations = 200;
    std::size_t max_imfs = 64;
    std::size_t envelope_boundary = 2; // extrema mirrored beyond each end
};

// One intrinsic mode function plus its diagnostics. period_samples is the
// series length divided by the zero-crossing count; NaN when the component
// never crosses zero.
struct Imf {
    std::vector<double> values;
    std::size_t index_k = 0; // 1-based, 1 = fastest
    std::size_t zero_crossings = 0;
    std::size_t extrema_count = 0;
    double period_samples = 0.0;
    double variance = 0.0;
};

struct Decomposition {
    Signal source;
    std::vector<Imf> imfs;
    std::vector<double> residue;
    double io = 0.0; // index of orthogonality, residue included
};

// Extracts one IMF from `residual` by iterative sifting: cubic-spline
// envelopes through the local extrema (mirrored `envelope_boundary` extrema
// beyond each end), subtract the envelope mean, repeat until the stopping
// criterion. Throws NotSiftableError when the input has fewer than two
// maxima or two minima.
Imf sift(std::span<const double> residual, const SiftConfig& cfg);

// Full decomposition: extracts IMFs until the running residue is constant,
// monotone, or too poor in extrema to sift, then fills per-IMF diagnostics
// and the orthogonality index. A non-decomposable input yields zero IMFs
// and residue == input.
Decomposition decompose(const Signal& s, const SiftConfig& cfg = {});

// Orthogonality index over components C_1..C_{n+1} (IMFs plus residue):
// the total cross-term mass sum_t sum_{j!=k} C_j(t) C_k(t) normalized by
// the signal energy sum_t x(t)^2. Zero when the decomposition is exactly
// orthogonal; zero by convention when the signal energy is below 1e-30.
double index_of_orthogonality(const Decomposition& d);

// Component period in samples: total_length / zero_crossings. Throws
// UndefinedPeriodError when the component has no zero crossings.
double imf_period(const Imf& imf, std::size_t total_length);

// Residue plus the `slow_imf_count` slowest IMFs; slow_imf_count = 0 gives
// the residue itself and slow_imf_count = n reproduces the input.
Signal trend(const Decomposition& d, std::size_t slow_imf_count);

} // namespace emdscale
