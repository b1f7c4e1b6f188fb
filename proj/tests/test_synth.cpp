#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "emdscale/synth.hpp"

using namespace emdscale;

namespace {

double lag_autocorr(const std::vector<double>& v, std::size_t lag) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < v.size(); ++t) {
        den += (v[t] - m) * (v[t] - m);
        if (t + lag < v.size()) num += (v[t] - m) * (v[t + lag] - m);
    }
    return num / den;
}

double cross_corr(const std::vector<double>& a, const std::vector<double>& b) {
    double ma = 0.0, mb = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        ma += a[t];
        mb += b[t];
    }
    ma /= static_cast<double>(a.size());
    mb /= static_cast<double>(b.size());
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        saa += (a[t] - ma) * (a[t] - ma);
        sbb += (b[t] - mb) * (b[t] - mb);
        sab += (a[t] - ma) * (b[t] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace

TEST_CASE("generators are deterministic in the seed") {
    const FbmSpec spec{0.7, 2048, 12345, 1.0};
    const Signal a = generate_fgn(spec);
    const Signal b = generate_fgn(spec);
    CHECK(a.values == b.values);

    CHECK(hosking_fgn(0.7, 256, 1.0, 9) == hosking_fgn(0.7, 256, 1.0, 9));
    CHECK(generate_bm(1024, 4).values == generate_bm(1024, 4).values);

    const Signal c = generate_fgn({0.7, 2048, 12346, 1.0});
    CHECK(a.values != c.values);
}

TEST_CASE("fBm is exactly the running sum of its fGn") {
    const FbmSpec spec{0.3, 4096, 77, 1.0};
    const Signal noise = generate_fgn(spec);
    const Signal path = generate_fbm(spec);
    REQUIRE(path.size() == noise.size());
    CHECK(path.values[0] == noise.values[0]);
    double acc = noise.values[0];
    for (std::size_t t = 1; t < path.size(); ++t) {
        acc += noise.values[t];
        CHECK(path.values[t] == doctest::Approx(acc).epsilon(1e-15));
    }
}

TEST_CASE("H = 0.5 noise is serially uncorrelated") {
    const Signal s = generate_fgn({0.5, 100000, 11, 1.0});
    CHECK(std::abs(lag_autocorr(s.values, 1)) < 3.0 / std::sqrt(100000.0));
}

TEST_CASE("empirical autocovariance matches the closed form across H") {
    // ensemble mean of the unbiased lag product moment vs gamma(k), judged
    // against the ensemble's own standard error
    constexpr std::size_t kLen = 16384;
    constexpr std::size_t kSeeds = 500;
    constexpr std::size_t kMaxLag = 20;
    for (double h : {0.2, 0.5, 0.8}) {
        CAPTURE(h);
        const FgnSampler sampler(h, kLen);
        CHECK(sampler.uses_embedding());

        std::vector<double> sum(kMaxLag + 1, 0.0), sumsq(kMaxLag + 1, 0.0);
        for (std::size_t seed = 0; seed < kSeeds; ++seed) {
            const std::vector<double> x = sampler.sample(1000 + seed);
            for (std::size_t k = 0; k <= kMaxLag; ++k) {
                double acc = 0.0;
                for (std::size_t t = 0; t + k < kLen; ++t) acc += x[t] * x[t + k];
                const double est = acc / static_cast<double>(kLen - k);
                sum[k] += est;
                sumsq[k] += est * est;
            }
        }
        for (std::size_t k = 0; k <= kMaxLag; ++k) {
            CAPTURE(k);
            const double n = static_cast<double>(kSeeds);
            const double mean = sum[k] / n;
            const double sd = std::sqrt(sumsq[k] / n - mean * mean);
            const double se = sd / std::sqrt(n);
            CHECK(std::abs(mean - fgn_autocovariance(h, 1.0, k)) <= 4.0 * se);
        }
    }
}

TEST_CASE("sequential synthesis agrees with the closed form and the sampler") {
    // the O(T^2) conditional-Gaussian path is exact too; cross-validate both
    // methods against gamma(1) on small series
    constexpr std::size_t kLen = 256;
    constexpr std::size_t kSeeds = 400;
    const double expect = fgn_autocovariance(0.7, 1.0, 1);
    const FgnSampler sampler(0.7, kLen);

    for (int method = 0; method < 2; ++method) {
        CAPTURE(method);
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t seed = 0; seed < kSeeds; ++seed) {
            const std::vector<double> x =
                method == 0 ? hosking_fgn(0.7, kLen, 1.0, 2000 + seed)
                            : sampler.sample(2000 + seed);
            double acc = 0.0;
            for (std::size_t t = 0; t + 1 < kLen; ++t) acc += x[t] * x[t + 1];
            const double est = acc / static_cast<double>(kLen - 1);
            sum += est;
            sumsq += est * est;
        }
        const double n = static_cast<double>(kSeeds);
        const double mean = sum / n;
        const double se = std::sqrt(sumsq / n - mean * mean) / std::sqrt(n);
        CHECK(std::abs(mean - expect) <= 4.0 * se);
    }
}

TEST_CASE("scale multiplies the noise linearly") {
    const Signal unit = generate_fgn({0.6, 1024, 3, 1.0});
    const Signal scaled = generate_fgn({0.6, 1024, 3, 3.0});
    for (std::size_t t = 0; t < unit.size(); ++t) {
        CHECK(scaled.values[t] ==
              doctest::Approx(3.0 * unit.values[t]).epsilon(1e-12));
    }
}

TEST_CASE("Brownian increments are centered and uncorrelated") {
    const Signal s = generate_bm(100000, 31);
    std::vector<double> inc(s.size());
    inc[0] = s.values[0];
    for (std::size_t t = 1; t < s.size(); ++t) {
        inc[t] = s.values[t] - s.values[t - 1];
    }
    double m = 0.0;
    for (double v : inc) m += v;
    m /= static_cast<double>(inc.size());
    CHECK(std::abs(m) < 3.0 / std::sqrt(100000.0));
    CHECK(std::abs(lag_autocorr(inc, 1)) < 3.0 / std::sqrt(100000.0));
}

TEST_CASE("distinct seeds give uncorrelated paths") {
    const Signal a = generate_fgn({0.5, 100000, 1, 1.0});
    const Signal b = generate_fgn({0.5, 100000, 2, 1.0});
    CHECK(std::abs(cross_corr(a.values, b.values)) < 3.0 / std::sqrt(100000.0));
}

TEST_CASE("Brownian ensemble variance grows linearly in time") {
    constexpr std::size_t kPaths = 200;
    double sum = 0.0;
    for (std::size_t p = 0; p < kPaths; ++p) {
        const Signal s = generate_bm(1000, 500 + p);
        sum += s.values[999] * s.values[999];
    }
    // 1000 summed unit increments: variance 1000, so the mean square over
    // 200 paths has standard error 1000 * sqrt(2/200)
    const double est = sum / static_cast<double>(kPaths);
    CHECK(std::abs(est - 1000.0) <= 4.0 * 1000.0 * std::sqrt(2.0 / 200.0));
}

TEST_CASE("H = 0.9 paths double their variance as 2^1.8") {
    constexpr std::size_t kPaths = 500;
    double half = 0.0, full = 0.0;
    for (std::size_t p = 0; p < kPaths; ++p) {
        const Signal s = generate_fbm({0.9, 1024, 7000 + p, 1.0});
        half += s.values[511] * s.values[511];
        full += s.values[1023] * s.values[1023];
    }
    // implied scaling exponent from the variance ratio at lag doubling
    const double h_hat = 0.5 * std::log2(full / half);
    CHECK(h_hat == doctest::Approx(0.9).epsilon(0.1));
}

TEST_CASE("increment correlation sign follows persistence") {
    // gamma(1) = 2^{2H-1} - 1: negative for H < 0.5, positive for H > 0.5
    for (double h : {0.3, 0.7}) {
        CAPTURE(h);
        double acc = 0.0;
        for (std::size_t seed = 0; seed < 50; ++seed) {
            const Signal s = generate_fgn({h, 4096, 9000 + seed, 1.0});
            acc += lag_autocorr(s.values, 1);
        }
        if (h < 0.5) {
            CHECK(acc / 50.0 < -0.1);
        } else {
            CHECK(acc / 50.0 > 0.1);
        }
    }
}
