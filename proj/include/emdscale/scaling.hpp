#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emdscale/emd.hpp"

namespace emdscale {

// Ensemble execution policy. Replicate seeds are derived from the ensemble
// seed and replicate index and aggregation runs in index order, so both
// policies produce bit-identical results; `serial` is the reference path.
enum class Exec {
    serial,
    parallel,
};

// Log-variance vs log-period regression over a decomposition's IMFs.
// h_star is half the regression slope. Natural logs throughout.
struct ScalingFit {
    std::vector<std::pair<double, double>> points; // (log period, log variance)
    double h_star = 0.0;
    double log_intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_imfs_used = 0;
};

// Regresses log IMF variance on log IMF period, residue excluded along with
// any component lacking zero crossings or variance. Throws
// InsufficientComponentsError below 3 usable IMFs.
ScalingFit fit_variance_scaling(const Decomposition& d);

struct MonteCarloH {
    double mean_h_star = 0.0;
    double rmse = 0.0;
    std::size_t n_used = 0;
    std::size_t n_failed = 0;
    std::vector<double> h_stars; // per replicate, NaN where the fit failed
    bool with_generalized = false;
    double mean_h_g = 0.0;
    double rmse_h_g = 0.0;
    std::vector<double> h_gs;
};

// Simulation study: generates n_reps fBm paths of the given Hurst exponent,
// decomposes and fits each, and reports the mean estimator and its RMSE
// against the true H. Optionally also runs the generalized Hurst estimator
// on every path for comparison.
MonteCarloH monte_carlo_h(double hurst, std::size_t length, std::size_t n_reps,
                          std::uint64_t seed, const SiftConfig& cfg = {},
                          Exec exec = Exec::parallel,
                          bool with_generalized = false);

// Generalized Hurst exponent: fits E|X(t+tau)-X(t)|^q ~ tau^(qH) over
// tau = 1..max_lag by log-log regression. Requires length >= 10*max_lag.
double generalized_hurst(std::span<const double> values, double q = 1.0,
                         std::size_t max_lag = 19);

// Ratio of mean variance-per-period between the analysed series' IMFs and a
// Brownian replicate's IMFs; the factor that rescales the replicate onto the
// series' level.
double rescale_factor(const ScalingFit& x_fit, const Decomposition& bm);

// Least-squares log-intercept of the rescaled replicate's points under a
// fixed unit slope in log-log space (H = 0.5): mean(log(c*var) - log tau).
// Returns the intercept constant c0 (not its log).
double fixed_slope_intercept(const Decomposition& bm, double c);

// Goodness of fit of the series' points against the fixed comparison line
// log(c * c0 * tau): 1 - SS_res/SS_tot. May be negative; never exceeds 1.
double baseline_r2(const ScalingFit& x_fit, double c, double c0);

struct BaselineReplicate {
    std::size_t replicate_index = 0;
    double c_i = 0.0;
    double c0_i = 0.0;
    double r2_bm_i = 0.0;
};

struct BaselineEnsemble {
    std::vector<BaselineReplicate> replicates;
    double mean_r2_bm = 0.0;
    double p05 = 0.0;
    double p95 = 0.0;
    std::size_t bm_length = 0;
    std::uint64_t seed = 0;
    std::size_t n_failed = 0;
};

// Monte-Carlo Brownian baseline: per replicate, generate Bm of the series'
// length, decompose, rescale, fit the slope-1 line, and score the series'
// points against it. A replicate with fewer than 3 usable IMFs is retried
// with fresh derived seeds (3 retries) before counting as failed; the
// ensemble throws EnsembleError when more than 10% of replicates fail.
BaselineEnsemble baseline_compare(const Decomposition& x, std::size_t n_reps,
                                  std::uint64_t seed, const SiftConfig& cfg = {},
                                  Exec exec = Exec::parallel);

struct RankingRow {
    std::string label;
    std::size_t n_imfs = 0;
    double io = 0.0;
    double r_squared = 0.0;
    double h_star = 0.0;
    double mean_r2_bm = 0.0;
};

enum class RankMetric {
    mean_r2_bm,
    r_squared,
};

// Descending sort by the chosen metric; ties broken by label.
std::vector<RankingRow> rank(std::vector<RankingRow> rows, RankMetric metric);

} // namespace emdscale
