#include "emdscale/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "emdscale/errors.hpp"
#include "emdscale/rng.hpp"
#include "emdscale/stats.hpp"
#include "emdscale/synth.hpp"

namespace emdscale {

namespace {

// IMFs that can appear on the log-log plot: a defined mean period and a
// positive variance. The residue is not part of d.imfs, so it never enters.
std::vector<const Imf*> usable_imfs(const Decomposition& d) {
    std::vector<const Imf*> out;
    out.reserve(d.imfs.size());
    for (const Imf& imf : d.imfs) {
        if (imf.zero_crossings == 0) continue;
        if (!(imf.variance > 0.0) || !std::isfinite(imf.period_samples)) continue;
        out.push_back(&imf);
    }
    return out;
}

// Runs body(i) for i in [0, n). The parallel path distributes replicates
// across OpenMP threads; results must be written to per-index slots so the
// outcome is identical to the serial reference.
template <typename Fn>
void run_replicates(std::size_t n, Exec exec, Fn&& body) {
#ifdef _OPENMP
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            body(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        body(i);
    }
}

} // namespace

ScalingFit fit_variance_scaling(const Decomposition& d) {
    const std::vector<const Imf*> used = usable_imfs(d);
    if (used.size() < 3) {
        throw InsufficientComponentsError(
            "variance scaling fit needs at least 3 oscillatory components, got " +
            std::to_string(used.size()));
    }

    ScalingFit fit;
    fit.points.reserve(used.size());
    std::vector<double> xs, ys;
    xs.reserve(used.size());
    ys.reserve(used.size());
    for (const Imf* imf : used) {
        const double lt = std::log(imf->period_samples);
        const double lv = std::log(imf->variance);
        fit.points.emplace_back(lt, lv);
        xs.push_back(lt);
        ys.push_back(lv);
    }

    const LinearFit lf = linear_fit(xs, ys);
    fit.h_star = lf.slope / 2.0;
    fit.log_intercept = lf.intercept;
    fit.r_squared = lf.r_squared;
    fit.n_imfs_used = used.size();
    return fit;
}

double generalized_hurst(std::span<const double> values, double q,
                         std::size_t max_lag) {
    if (!(q > 0.0)) {
        throw ArgumentError("generalized Hurst moment order must be positive");
    }
    if (max_lag < 2) {
        throw ArgumentError("generalized Hurst needs at least 2 lags");
    }
    if (values.size() < 10 * max_lag) {
        throw DegenerateInputError(
            "series too short for generalized Hurst: need at least " +
            std::to_string(10 * max_lag) + " samples, got " +
            std::to_string(values.size()));
    }

    std::vector<double> log_lag, log_moment;
    log_lag.reserve(max_lag);
    log_moment.reserve(max_lag);
    for (std::size_t tau = 1; tau <= max_lag; ++tau) {
        double sum = 0.0;
        const std::size_t count = values.size() - tau;
        if (q == 1.0) {
            for (std::size_t t = 0; t < count; ++t) {
                sum += std::abs(values[t + tau] - values[t]);
            }
        } else {
            for (std::size_t t = 0; t < count; ++t) {
                sum += std::pow(std::abs(values[t + tau] - values[t]), q);
            }
        }
        const double moment = sum / static_cast<double>(count);
        if (!(moment > 0.0)) {
            throw DegenerateInputError(
                "structure function vanishes at lag " + std::to_string(tau));
        }
        log_lag.push_back(std::log(static_cast<double>(tau)));
        log_moment.push_back(std::log(moment));
    }

    return linear_fit(log_lag, log_moment).slope / q;
}

MonteCarloH monte_carlo_h(double hurst, std::size_t length, std::size_t n_reps,
                          std::uint64_t seed, const SiftConfig& cfg, Exec exec,
                          bool with_generalized) {
    if (n_reps < 2) {
        throw ArgumentError("ensemble needs at least two replicates");
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> hs(n_reps, nan);
    std::vector<double> hgs(n_reps, nan);
    std::vector<std::uint8_t> ok(n_reps, 0);

    // Spectral weights depend only on (hurst, length), so one sampler is
    // shared by all replicates; sample() is const and thread safe.
    const FgnSampler sampler(hurst, length);

    run_replicates(n_reps, exec, [&](std::size_t i) {
        try {
            std::vector<double> path = sampler.sample(derive_seed(seed, i));
            for (std::size_t t = 1; t < path.size(); ++t) {
                path[t] += path[t - 1];
            }
            if (with_generalized) {
                hgs[i] = generalized_hurst(path);
            }
            Signal s;
            s.values = std::move(path);
            const Decomposition d = decompose(s, cfg);
            hs[i] = fit_variance_scaling(d).h_star;
            ok[i] = 1;
        } catch (const Error&) {
            ok[i] = 0;
        }
    });

    MonteCarloH out;
    out.with_generalized = with_generalized;
    double sum_h = 0.0, sq_h = 0.0, sum_g = 0.0, sq_g = 0.0;
    for (std::size_t i = 0; i < n_reps; ++i) {
        if (!ok[i]) {
            ++out.n_failed;
            continue;
        }
        ++out.n_used;
        sum_h += hs[i];
        sq_h += (hs[i] - hurst) * (hs[i] - hurst);
        if (with_generalized) {
            sum_g += hgs[i];
            sq_g += (hgs[i] - hurst) * (hgs[i] - hurst);
        }
    }
    if (out.n_used == 0) {
        throw EnsembleError("all " + std::to_string(n_reps) +
                            " simulation replicates failed");
    }
    const double n = static_cast<double>(out.n_used);
    out.mean_h_star = sum_h / n;
    out.rmse = std::sqrt(sq_h / n);
    out.h_stars = std::move(hs);
    if (with_generalized) {
        out.mean_h_g = sum_g / n;
        out.rmse_h_g = std::sqrt(sq_g / n);
        out.h_gs = std::move(hgs);
    }
    return out;
}

double rescale_factor(const ScalingFit& x_fit, const Decomposition& bm) {
    const std::vector<const Imf*> bm_used = usable_imfs(bm);
    if (bm_used.size() < 3) {
        throw InsufficientComponentsError(
            "replicate decomposition has fewer than 3 oscillatory components");
    }

    double x_sum = 0.0;
    for (const auto& [lt, lv] : x_fit.points) {
        x_sum += std::exp(lv - lt);
    }
    double bm_sum = 0.0;
    for (const Imf* imf : bm_used) {
        bm_sum += imf->variance / imf->period_samples;
    }
    const double x_mean = x_sum / static_cast<double>(x_fit.points.size());
    const double bm_mean = bm_sum / static_cast<double>(bm_used.size());
    if (!(bm_mean > 0.0)) {
        throw NumericError("replicate variance-per-period mean is not positive");
    }
    return x_mean / bm_mean;
}

double fixed_slope_intercept(const Decomposition& bm, double c) {
    if (!(c > 0.0)) {
        throw ArgumentError("rescale factor must be positive");
    }
    const std::vector<const Imf*> bm_used = usable_imfs(bm);
    if (bm_used.size() < 3) {
        throw InsufficientComponentsError(
            "replicate decomposition has fewer than 3 oscillatory components");
    }

    const double log_c = std::log(c);
    double sum = 0.0;
    for (const Imf* imf : bm_used) {
        sum += log_c + std::log(imf->variance) - std::log(imf->period_samples);
    }
    return std::exp(sum / static_cast<double>(bm_used.size()));
}

double baseline_r2(const ScalingFit& x_fit, double c, double c0) {
    if (!(c > 0.0) || !(c0 > 0.0)) {
        throw ArgumentError("comparison line constants must be positive");
    }
    if (x_fit.points.empty()) {
        throw InsufficientComponentsError("scaling fit carries no points");
    }

    const double log_cc0 = std::log(c * c0);
    double mean_lv = 0.0;
    for (const auto& [lt, lv] : x_fit.points) {
        mean_lv += lv;
    }
    mean_lv /= static_cast<double>(x_fit.points.size());

    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& [lt, lv] : x_fit.points) {
        const double predicted = log_cc0 + lt;
        ss_res += (lv - predicted) * (lv - predicted);
        ss_tot += (lv - mean_lv) * (lv - mean_lv);
    }
    if (ss_tot == 0.0) {
        return ss_res == 0.0 ? 1.0 : 0.0;
    }
    return 1.0 - ss_res / ss_tot;
}

BaselineEnsemble baseline_compare(const Decomposition& x, std::size_t n_reps,
                                  std::uint64_t seed, const SiftConfig& cfg,
                                  Exec exec) {
    if (n_reps < 2) {
        throw ArgumentError("ensemble needs at least two replicates");
    }
    const ScalingFit x_fit = fit_variance_scaling(x);
    const std::size_t len = x.source.size();

    struct Slot {
        bool ok = false;
        BaselineReplicate rep;
    };
    std::vector<Slot> slots(n_reps);

    run_replicates(n_reps, exec, [&](std::size_t i) {
        const std::uint64_t rep_seed = derive_seed(seed, i);
        // A pathological replicate (too few components to fit) is redrawn
        // under a fresh derived seed before counting as a failure.
        for (std::uint64_t attempt = 0; attempt <= 3; ++attempt) {
            const std::uint64_t s =
                attempt == 0 ? rep_seed : derive_seed(rep_seed, attempt);
            try {
                const Signal bm = generate_bm(len, s);
                const Decomposition d = decompose(bm, cfg);
                const double c = rescale_factor(x_fit, d);
                const double c0 = fixed_slope_intercept(d, c);
                const double r2 = baseline_r2(x_fit, c, c0);
                slots[i] = {true, {i, c, c0, r2}};
                return;
            } catch (const Error&) {
                continue;
            }
        }
    });

    BaselineEnsemble out;
    out.bm_length = len;
    out.seed = seed;
    out.replicates.reserve(n_reps);
    std::vector<double> r2s;
    r2s.reserve(n_reps);
    for (const Slot& slot : slots) {
        if (!slot.ok) {
            ++out.n_failed;
            continue;
        }
        out.replicates.push_back(slot.rep);
        r2s.push_back(slot.rep.r2_bm_i);
    }
    if (out.n_failed * 10 > n_reps) {
        throw EnsembleError(std::to_string(out.n_failed) + " of " +
                            std::to_string(n_reps) +
                            " replicates failed (limit is 10%)");
    }

    out.mean_r2_bm = mean(r2s);
    out.p05 = percentile(r2s, 0.05);
    out.p95 = percentile(r2s, 0.95);
    return out;
}

std::vector<RankingRow> rank(std::vector<RankingRow> rows, RankMetric metric) {
    std::sort(rows.begin(), rows.end(),
              [metric](const RankingRow& a, const RankingRow& b) {
                  const double ka =
                      metric == RankMetric::mean_r2_bm ? a.mean_r2_bm : a.r_squared;
                  const double kb =
                      metric == RankMetric::mean_r2_bm ? b.mean_r2_bm : b.r_squared;
                  if (ka != kb) return ka > kb;
                  return a.label < b.label;
              });
    return rows;
}

} // namespace emdscale
