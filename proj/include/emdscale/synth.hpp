#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "emdscale/signal.hpp"

namespace emdscale {

// Parameters for fractional Gaussian noise / fractional Brownian motion
// synthesis. `scale` is the increment standard deviation at unit lag.
struct FbmSpec {
    double hurst = 0.5;
    std::size_t length = 2;
    std::uint64_t seed = 0;
    double scale = 1.0;
};

// Closed-form fGn autocovariance at integer lag:
//   gamma(k) = (scale^2 / 2) * (|k+1|^2H - 2|k|^2H + |k-1|^2H).
double fgn_autocovariance(double hurst, double scale, std::size_t lag);

// Exact fGn synthesis by circulant embedding. The spectral setup depends
// only on (hurst, length, scale), so one sampler serves a whole ensemble;
// sample() is const and safe to call concurrently. When the embedding is
// not nonnegative definite the sampler transparently switches to the exact
// sequential (conditional-Gaussian) method.
class FgnSampler {
public:
    FgnSampler(double hurst, std::size_t length, double scale = 1.0);

    std::vector<double> sample(std::uint64_t seed) const;

    bool uses_embedding() const { return embedding_ok_; }

private:
    double hurst_;
    double scale_;
    std::size_t length_;
    std::size_t fft_size_;
    bool embedding_ok_ = false;
    std::vector<double> weight_; // sqrt(lambda_j / (2n)), endpoints sqrt(lambda/n)
};

// Exact sequential fGn synthesis (Durbin-Levinson conditional sampling),
// O(length^2). Fallback path of FgnSampler; also an independent oracle.
std::vector<double> hosking_fgn(double hurst, std::size_t length, double scale,
                                std::uint64_t seed);

// Stationary Gaussian sequence with the fGn autocovariance; deterministic
// in spec.seed.
Signal generate_fgn(const FbmSpec& spec);

// Cumulative sum of generate_fgn: a fractional Brownian motion path whose
// first value equals the first increment.
Signal generate_fbm(const FbmSpec& spec);

// Brownian motion: cumulative sum of i.i.d. Gaussian increments,
// distributionally identical to generate_fbm with hurst = 0.5.
Signal generate_bm(std::size_t length, std::uint64_t seed, double scale = 1.0);

} // namespace emdscale
