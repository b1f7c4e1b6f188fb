#include "emdscale/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "emdscale/errors.hpp"
#include "emdscale/fft.hpp"
#include "emdscale/rng.hpp"

namespace emdscale {

double GaussianStream::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = rng_.uniform01();
    const double u2 = rng_.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
}

namespace {

void validate_spec(double hurst, std::size_t length, double scale) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw ArgumentError("hurst must lie strictly inside (0, 1), got " +
                            std::to_string(hurst));
    }
    if (length < 2) {
        throw ArgumentError("synthesis length must be >= 2");
    }
    if (!(scale > 0.0)) {
        throw ArgumentError("scale must be positive");
    }
}

} // namespace

double fgn_autocovariance(double hurst, double scale, std::size_t lag) {
    const double k = static_cast<double>(lag);
    const double two_h = 2.0 * hurst;
    const double lower = lag == 0 ? 1.0 : std::pow(k - 1.0, two_h);
    return 0.5 * scale * scale *
           (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + lower);
}

FgnSampler::FgnSampler(double hurst, std::size_t length, double scale)
    : hurst_(hurst), scale_(scale), length_(length) {
    validate_spec(hurst, length, scale);

    const std::size_t half = std::bit_ceil(length);
    const std::size_t n = 2 * half;
    fft_size_ = n;

    std::vector<std::complex<double>> row(n);
    for (std::size_t j = 0; j <= half; ++j) {
        row[j] = fgn_autocovariance(hurst, scale, j);
    }
    for (std::size_t j = half + 1; j < n; ++j) {
        row[j] = row[n - j];
    }
    fft_inplace(row);

    double max_eig = 0.0;
    double min_eig = 0.0;
    for (const auto& z : row) {
        max_eig = std::max(max_eig, z.real());
        min_eig = std::min(min_eig, z.real());
    }
    if (min_eig < -1e-10 * max_eig) {
        embedding_ok_ = false; // fall back to the sequential method
        return;
    }

    embedding_ok_ = true;
    weight_.resize(n);
    const double dn = static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lambda = std::max(row[j].real(), 0.0);
        const double denom = (j == 0 || j == half) ? dn : 2.0 * dn;
        weight_[j] = std::sqrt(lambda / denom);
    }
}

std::vector<double> FgnSampler::sample(std::uint64_t seed) const {
    if (!embedding_ok_) {
        return hosking_fgn(hurst_, length_, scale_, seed);
    }

    const std::size_t n = fft_size_;
    const std::size_t half = n / 2;
    GaussianStream gauss(seed);

    std::vector<std::complex<double>> spectrum(n);
    spectrum[0] = weight_[0] * gauss.next();
    spectrum[half] = weight_[half] * gauss.next();
    for (std::size_t j = 1; j < half; ++j) {
        const double re = gauss.next();
        const double im = gauss.next();
        spectrum[j] = weight_[j] * std::complex<double>(re, im);
        spectrum[n - j] = std::conj(spectrum[j]);
    }
    fft_inplace(spectrum);

    std::vector<double> out(length_);
    for (std::size_t t = 0; t < length_; ++t) {
        out[t] = spectrum[t].real();
    }
    return out;
}

std::vector<double> hosking_fgn(double hurst, std::size_t length, double scale,
                                std::uint64_t seed) {
    validate_spec(hurst, length, scale);

    std::vector<double> gamma(length);
    for (std::size_t k = 0; k < length; ++k) {
        gamma[k] = fgn_autocovariance(hurst, scale, k);
    }

    GaussianStream gauss(seed);
    std::vector<double> out(length);
    out[0] = std::sqrt(gamma[0]) * gauss.next();

    std::vector<double> phi;
    std::vector<double> phi_prev;
    double v = gamma[0];
    for (std::size_t t = 1; t < length; ++t) {
        double num = gamma[t];
        for (std::size_t j = 1; j < t; ++j) {
            num -= phi[j - 1] * gamma[t - j];
        }
        const double kappa = num / v;

        phi_prev = phi;
        phi.resize(t);
        for (std::size_t j = 0; j + 1 < t; ++j) {
            phi[j] = phi_prev[j] - kappa * phi_prev[t - 2 - j];
        }
        phi[t - 1] = kappa;
        v = std::max(v * (1.0 - kappa * kappa), 0.0);

        double cond_mean = 0.0;
        for (std::size_t j = 0; j < t; ++j) {
            cond_mean += phi[j] * out[t - 1 - j];
        }
        out[t] = cond_mean + std::sqrt(v) * gauss.next();
    }
    return out;
}

Signal generate_fgn(const FbmSpec& spec) {
    Signal s;
    s.values = FgnSampler(spec.hurst, spec.length, spec.scale).sample(spec.seed);
    return s;
}

Signal generate_fbm(const FbmSpec& spec) {
    Signal s = generate_fgn(spec);
    for (std::size_t t = 1; t < s.values.size(); ++t) {
        s.values[t] += s.values[t - 1];
    }
    return s;
}

Signal generate_bm(std::size_t length, std::uint64_t seed, double scale) {
    if (length < 2) {
        throw ArgumentError("generate_bm length must be >= 2");
    }
    GaussianStream gauss(seed);
    Signal s;
    s.values.resize(length);
    double acc = 0.0;
    for (std::size_t t = 0; t < length; ++t) {
        acc += scale * gauss.next();
        s.values[t] = acc;
    }
    return s;
}

} // namespace emdscale
