#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "emdscale/emd.hpp"
#include "emdscale/errors.hpp"
#include "emdscale/scaling.hpp"
#include "emdscale/stats.hpp"
#include "emdscale/synth.hpp"

using namespace emdscale;

namespace {

// Component list with prescribed diagnostics; the regression consumes the
// stored fields, so exact scaling laws can be staged directly.
Decomposition staged(const std::vector<double>& taus,
                     const std::vector<double>& vars, std::size_t length) {
    Decomposition d;
    d.source.values.assign(length, 0.0);
    d.residue.assign(length, 0.0);
    for (std::size_t k = 0; k < taus.size(); ++k) {
        Imf imf;
        imf.index_k = k + 1;
        imf.zero_crossings =
            static_cast<std::size_t>(static_cast<double>(length) / taus[k]);
        imf.period_samples = taus[k];
        imf.variance = vars[k];
        imf.extrema_count = imf.zero_crossings;
        d.imfs.push_back(imf);
    }
    return d;
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace

TEST_CASE("an exact power law is recovered exactly") {
    const std::vector<double> taus{10, 20, 40, 80, 200};
    std::vector<double> vars = taus; // variance proportional to period: H = 0.5
    const Decomposition d = staged(taus, vars, 10000);
    const ScalingFit fit = fit_variance_scaling(d);
    CHECK(fit.n_imfs_used == 5);
    CHECK(fit.points.size() == 5);
    CHECK(close_rel(fit.h_star, 0.5, 1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(fit.log_intercept) < 1e-12);
}

TEST_CASE("components without zero crossings or variance stay off the plot") {
    Decomposition d = staged({10, 20, 40, 80}, {10, 20, 40, 80}, 10000);
    Imf dead;
    dead.index_k = 5;
    dead.zero_crossings = 0;
    dead.period_samples = std::nan("");
    dead.variance = 123.0;
    d.imfs.push_back(dead);
    Imf flat;
    flat.index_k = 6;
    flat.zero_crossings = 4;
    flat.period_samples = 2500.0;
    flat.variance = 0.0;
    d.imfs.push_back(flat);

    const ScalingFit fit = fit_variance_scaling(d);
    CHECK(fit.n_imfs_used == 4);
}

TEST_CASE("fewer than three usable components cannot be fitted") {
    const Decomposition d = staged({10, 20}, {10, 20}, 1000);
    CHECK_THROWS_AS(fit_variance_scaling(d), InsufficientComponentsError);
}

TEST_CASE("the estimator is half the regression slope") {
    const Signal s = generate_fbm({0.6, 8192, 13, 1.0});
    const ScalingFit fit = fit_variance_scaling(decompose(s));
    std::vector<double> xs, ys;
    for (const auto& [lt, lv] : fit.points) {
        xs.push_back(lt);
        ys.push_back(lv);
    }
    const LinearFit lf = linear_fit(xs, ys);
    CHECK(close_rel(fit.h_star, lf.slope / 2.0, 1e-12));
    CHECK(close_rel(fit.r_squared, lf.r_squared, 1e-12));
    CHECK(close_rel(fit.log_intercept, lf.intercept, 1e-12));
}

TEST_CASE("the estimator is invariant under amplitude rescaling") {
    const Signal s = generate_fbm({0.5, 4096, 29, 1.0});
    Signal scaled = s;
    for (double& v : scaled.values) v *= 40.0;
    const ScalingFit a = fit_variance_scaling(decompose(s));
    const ScalingFit b = fit_variance_scaling(decompose(scaled));
    CHECK(std::abs(a.h_star - b.h_star) < 1e-6);
    // every variance gains a factor 40^2: the intercept shifts by 2 log 40
    CHECK(b.log_intercept - a.log_intercept ==
          doctest::Approx(2.0 * std::log(40.0)).epsilon(1e-6));
}

TEST_CASE("generalized Hurst on known processes") {
    // exact self-affine ramp: |X(t+tau) - X(t)| = c tau, so H(1) = 1
    std::vector<double> ramp(2000);
    for (std::size_t t = 0; t < ramp.size(); ++t) {
        ramp[t] = 0.25 * static_cast<double>(t);
    }
    CHECK(generalized_hurst(ramp) == doctest::Approx(1.0).epsilon(1e-9));

    const Signal bm = generate_bm(100000, 31337);
    const double hg = generalized_hurst(bm.values);
    CHECK(hg > 0.47);
    CHECK(hg < 0.53);
}

TEST_CASE("generalized Hurst validates its input") {
    CHECK_THROWS_AS(generalized_hurst(std::vector<double>(2000, 1.0)),
                    DegenerateInputError); // constant: moments vanish
    CHECK_THROWS_AS(generalized_hurst(std::vector<double>(50, 1.0)),
                    DegenerateInputError); // shorter than 10 * max_lag
    const Signal bm = generate_bm(1000, 1);
    CHECK_THROWS_AS(generalized_hurst(bm.values, 0.0), ArgumentError);
    CHECK_THROWS_AS(generalized_hurst(bm.values, 1.0, 1), ArgumentError);
}

TEST_CASE("rescale factor is one against itself and linear in variance") {
    const Signal s = generate_bm(8192, 55);
    const Decomposition d = decompose(s);
    const ScalingFit fit = fit_variance_scaling(d);
    CHECK(close_rel(rescale_factor(fit, d), 1.0, 1e-12));

    // doubling every variance on the numerator side doubles the factor
    ScalingFit doubled = fit;
    for (auto& [lt, lv] : doubled.points) lv += std::log(2.0);
    CHECK(close_rel(rescale_factor(doubled, d), 2.0, 1e-12));
}

TEST_CASE("rescale factor matches a direct re-evaluation") {
    for (std::uint64_t p = 0; p < 3; ++p) {
        CAPTURE(p);
        const Signal x = generate_fbm({0.4 + 0.1 * static_cast<double>(p),
                                       3000, 700 + p, 1.0});
        const Signal b = generate_bm(3000, 800 + p);
        const Decomposition dx = decompose(x);
        const Decomposition db = decompose(b);
        const ScalingFit fx = fit_variance_scaling(dx);

        double num = 0.0;
        for (const Imf& imf : dx.imfs) {
            num += imf.variance / imf.period_samples;
        }
        num /= static_cast<double>(dx.imfs.size());
        double den = 0.0;
        for (const Imf& imf : db.imfs) {
            den += imf.variance / imf.period_samples;
        }
        den /= static_cast<double>(db.imfs.size());

        CHECK(close_rel(rescale_factor(fx, db), num / den, 1e-12));
    }
}

TEST_CASE("fixed-slope intercept is the geometric mean of variance per period") {
    const Signal b = generate_bm(4096, 91);
    const Decomposition db = decompose(b);
    const double c = 1.7;
    double acc = 0.0;
    for (const Imf& imf : db.imfs) {
        acc += std::log(c) + std::log(imf.variance) - std::log(imf.period_samples);
    }
    const double expect = std::exp(acc / static_cast<double>(db.imfs.size()));
    CHECK(close_rel(fixed_slope_intercept(db, c), expect, 1e-12));
    CHECK_THROWS_AS(fixed_slope_intercept(db, 0.0), ArgumentError);
}

TEST_CASE("baseline goodness of fit against the unit-slope line") {
    // points exactly on log(c c0 tau): zero residuals
    ScalingFit fit;
    const double c = 2.0, c0 = 3.0;
    for (double tau : {10.0, 100.0, 1000.0}) {
        fit.points.emplace_back(std::log(tau), std::log(c * c0 * tau));
    }
    CHECK(baseline_r2(fit, c, c0) == doctest::Approx(1.0).epsilon(1e-12));

    // a grossly wrong intercept overwhelms the total variance: negative
    CHECK(baseline_r2(fit, c, c0 * 1e6) < 0.0);

    // never above one
    for (double wrong : {0.1, 0.5, 2.0, 10.0}) {
        CHECK(baseline_r2(fit, c, c0 * wrong) <= 1.0);
    }

    // flat ordinates carry no total variance: zero unless the fit is exact
    ScalingFit flat;
    flat.points.emplace_back(std::log(10.0), std::log(4.0));
    flat.points.emplace_back(std::log(100.0), std::log(4.0));
    CHECK(baseline_r2(flat, 1.0, 1.0) == 0.0);

    CHECK_THROWS_AS(baseline_r2(fit, -1.0, c0), ArgumentError);
    CHECK_THROWS_AS(baseline_r2(ScalingFit{}, c, c0),
                    InsufficientComponentsError);
}

TEST_CASE("ensembles demand at least two replicates") {
    const Signal s = generate_bm(4096, 3);
    const Decomposition d = decompose(s);
    CHECK_THROWS_AS(baseline_compare(d, 1, 9), ArgumentError);
    CHECK_THROWS_AS(monte_carlo_h(0.5, 1024, 1, 9), ArgumentError);
}

TEST_CASE("baseline ensemble bookkeeping") {
    const Signal s = generate_bm(8192, 17);
    const Decomposition d = decompose(s);
    const BaselineEnsemble e = baseline_compare(d, 8, 4242);

    CHECK(e.replicates.size() == 8);
    CHECK(e.bm_length == 8192);
    CHECK(e.seed == 4242);
    CHECK(e.n_failed == 0);
    CHECK(e.p05 <= e.p95);

    double acc = 0.0;
    std::size_t idx = 0;
    for (const BaselineReplicate& rep : e.replicates) {
        CHECK(rep.replicate_index == idx++);
        CHECK(rep.c_i > 0.0);
        CHECK(rep.c0_i > 0.0);
        CHECK(rep.r2_bm_i <= 1.0);
        acc += rep.r2_bm_i;
    }
    CHECK(close_rel(e.mean_r2_bm, acc / 8.0, 1e-12));

    // a Brownian path scores well against its own kind
    CHECK(e.mean_r2_bm > 0.8);
}

TEST_CASE("baseline ensembles are deterministic") {
    const Signal s = generate_bm(4096, 23);
    const Decomposition d = decompose(s);
    const BaselineEnsemble a = baseline_compare(d, 6, 77, SiftConfig{}, Exec::serial);
    const BaselineEnsemble b = baseline_compare(d, 6, 77, SiftConfig{}, Exec::serial);
    REQUIRE(a.replicates.size() == b.replicates.size());
    for (std::size_t i = 0; i < a.replicates.size(); ++i) {
        CHECK(a.replicates[i].c_i == b.replicates[i].c_i);
        CHECK(a.replicates[i].c0_i == b.replicates[i].c0_i);
        CHECK(a.replicates[i].r2_bm_i == b.replicates[i].r2_bm_i);
    }
    CHECK(a.mean_r2_bm == b.mean_r2_bm);
}

TEST_CASE("simulation study bookkeeping and determinism") {
    const MonteCarloH a = monte_carlo_h(0.5, 4096, 6, 5);
    CHECK(a.h_stars.size() == 6);
    CHECK(a.n_used + a.n_failed == 6);
    CHECK(a.mean_h_star > 0.3);
    CHECK(a.mean_h_star < 0.7);
    CHECK(!a.with_generalized);
    CHECK(a.h_gs.empty());

    const MonteCarloH b = monte_carlo_h(0.5, 4096, 6, 5);
    CHECK(a.h_stars == b.h_stars);
    CHECK(a.mean_h_star == b.mean_h_star);
    CHECK(a.rmse == b.rmse);

    const MonteCarloH g =
        monte_carlo_h(0.5, 4096, 6, 5, SiftConfig{}, Exec::parallel, true);
    CHECK(g.with_generalized);
    CHECK(g.h_gs.size() == 6);
    CHECK(g.h_stars == a.h_stars); // the extra estimator does not disturb H*
}

TEST_CASE("ranking sorts descending with lexicographic tie-break") {
    std::vector<RankingRow> rows(4);
    rows[0].label = "delta";
    rows[0].mean_r2_bm = 0.90;
    rows[0].r_squared = 0.99;
    rows[1].label = "alpha";
    rows[1].mean_r2_bm = 0.95;
    rows[1].r_squared = 0.90;
    rows[2].label = "charlie";
    rows[2].mean_r2_bm = 0.90;
    rows[2].r_squared = 0.95;
    rows[3].label = "bravo";
    rows[3].mean_r2_bm = 0.99;
    rows[3].r_squared = 0.80;

    const std::vector<RankingRow> by_bm = rank(rows, RankMetric::mean_r2_bm);
    REQUIRE(by_bm.size() == 4);
    CHECK(by_bm[0].label == "bravo");
    CHECK(by_bm[1].label == "alpha");
    // 0.90 tie: charlie before delta
    CHECK(by_bm[2].label == "charlie");
    CHECK(by_bm[3].label == "delta");

    const std::vector<RankingRow> by_r2 = rank(rows, RankMetric::r_squared);
    CHECK(by_r2[0].label == "delta");
    CHECK(by_r2[3].label == "bravo");

    // output is a permutation of the input
    std::vector<std::string> labels;
    for (const RankingRow& r : by_bm) labels.push_back(r.label);
    std::sort(labels.begin(), labels.end());
    CHECK(labels == std::vector<std::string>{"alpha", "bravo", "charlie", "delta"});

    const std::vector<RankingRow> one = rank({rows[0]}, RankMetric::mean_r2_bm);
    CHECK(one.size() == 1);
    CHECK(one[0].label == "delta");
}
