#include "emdscale/emd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "emdscale/errors.hpp"
#include "emdscale/spline.hpp"
#include "emdscale/stats.hpp"

namespace emdscale {

namespace {

// One knot of an envelope extension beyond the series ends.
struct Knot {
    double t;
    double v;
};

// Mirrors up to `nb` extrema of `idx` (skipping the first `skip`) about the
// time `sym`, optionally preceded by an end-sample anchor knot. Produces
// ascending times strictly left of the series for sym near 0.
void mirror_left(std::span<const double> x, const std::vector<std::size_t>& idx,
                 std::size_t skip, std::size_t nb, double sym, bool anchor,
                 std::vector<Knot>& out) {
    out.clear();
    const std::size_t take = std::min(nb, idx.size() > skip ? idx.size() - skip : 0);
    for (std::size_t k = skip + take; k-- > skip;) {
        out.push_back({2.0 * sym - static_cast<double>(idx[k]), x[idx[k]]});
    }
    if (anchor) out.push_back({0.0, x.front()});
}

void mirror_right(std::span<const double> x, const std::vector<std::size_t>& idx,
                  std::size_t skip_back, std::size_t nb, double sym, bool anchor,
                  std::vector<Knot>& out) {
    out.clear();
    if (anchor) out.push_back({static_cast<double>(x.size() - 1), x.back()});
    const std::size_t take =
        std::min(nb, idx.size() > skip_back ? idx.size() - skip_back : 0);
    const std::size_t last = idx.size() - skip_back;
    for (std::size_t k = last - take; k < last; ++k) {
        out.push_back({2.0 * sym - static_cast<double>(idx[k]), x[idx[k]]});
    }
    std::reverse(out.end() - static_cast<std::ptrdiff_t>(take), out.end());
}

// Envelope end extension in the symmetric style: mirror `nb` extrema about
// the outermost extremum; when the end sample protrudes past it (a drifting
// series usually does at one end), the end sample itself joins the
// protruded side's knots and becomes the mirror point. A mirror that fails
// to reach past the series start/end falls back to mirroring about the end
// sample. Without this, slow components inherit spurious end swings.
struct EnvelopeExtension {
    std::vector<Knot> left_max, left_min, right_max, right_min;
};

EnvelopeExtension extend_ends(std::span<const double> x,
                              const ExtremaIndices& ext, std::size_t nb) {
    const auto& mx = ext.maxima;
    const auto& mn = ext.minima;
    EnvelopeExtension e;
    if (nb == 0) return e;

    // left end
    {
        bool anchor_min = false, anchor_max = false;
        std::size_t skip_max = 0, skip_min = 0, take_min = nb;
        double sym = 0.0;
        if (mx[0] < mn[0]) {
            if (x[0] > x[mn[0]]) {
                skip_max = 1;
                sym = static_cast<double>(mx[0]);
            } else {
                anchor_min = true;
                take_min = nb - 1;
            }
        } else {
            if (x[0] < x[mx[0]]) {
                skip_min = 1;
                sym = static_cast<double>(mn[0]);
            } else {
                anchor_max = true;
            }
        }
        const std::size_t take_max = anchor_max ? nb - 1 : nb;
        mirror_left(x, mx, skip_max, take_max, sym, anchor_max, e.left_max);
        mirror_left(x, mn, skip_min, take_min, sym, anchor_min, e.left_min);
        const bool covers = (!e.left_max.empty() && e.left_max.front().t <= 0.0) &&
                            (!e.left_min.empty() && e.left_min.front().t <= 0.0);
        if (!covers) {
            mirror_left(x, mx, 0, nb, 0.0, false, e.left_max);
            mirror_left(x, mn, 0, nb, 0.0, false, e.left_min);
        }
    }

    // right end
    {
        const double last = static_cast<double>(x.size() - 1);
        bool anchor_min = false, anchor_max = false;
        std::size_t skip_max = 0, skip_min = 0, take_min = nb;
        double sym = last;
        if (mx.back() > mn.back()) {
            if (x.back() > x[mn.back()]) {
                skip_max = 1;
                sym = static_cast<double>(mx.back());
            } else {
                anchor_min = true;
                take_min = nb - 1;
            }
        } else {
            if (x.back() < x[mx.back()]) {
                skip_min = 1;
                sym = static_cast<double>(mn.back());
            } else {
                anchor_max = true;
            }
        }
        const std::size_t take_max = anchor_max ? nb - 1 : nb;
        mirror_right(x, mx, skip_max, take_max, sym, anchor_max, e.right_max);
        mirror_right(x, mn, skip_min, take_min, sym, anchor_min, e.right_min);
        const bool covers = (!e.right_max.empty() && e.right_max.back().t >= last) &&
                            (!e.right_min.empty() && e.right_min.back().t >= last);
        if (!covers) {
            mirror_right(x, mx, 0, nb, last, false, e.right_max);
            mirror_right(x, mn, 0, nb, last, false, e.right_min);
        }
    }
    return e;
}

// Spline through extension + interior extrema, sampled at 0..T-1. Extension
// knots that do not lie strictly outside the interior span are dropped, so
// knot times stay strictly increasing.
std::vector<double> envelope(std::span<const double> values,
                             const std::vector<std::size_t>& extrema,
                             const std::vector<Knot>& left,
                             const std::vector<Knot>& right) {
    const double first = static_cast<double>(extrema.front());
    const double last = static_cast<double>(extrema.back());

    std::vector<double> xs, ys;
    xs.reserve(extrema.size() + left.size() + right.size());
    ys.reserve(xs.capacity());
    for (const Knot& k : left) {
        if (k.t < first && (xs.empty() || k.t > xs.back())) {
            xs.push_back(k.t);
            ys.push_back(k.v);
        }
    }
    for (std::size_t i : extrema) {
        xs.push_back(static_cast<double>(i));
        ys.push_back(values[i]);
    }
    for (const Knot& k : right) {
        if (k.t > last && k.t > xs.back()) {
            xs.push_back(k.t);
            ys.push_back(k.v);
        }
    }
    return CubicSpline(std::move(xs), std::move(ys), SplineEnds::not_a_knot)
        .sample_integers(values.size());
}

bool condition_one(std::size_t extrema_count, std::size_t zero_crossings) {
    const auto e = static_cast<long long>(extrema_count);
    const auto z = static_cast<long long>(zero_crossings);
    return std::llabs(e - z) <= 1;
}

Imf finalize_imf(std::vector<double> values) {
    Imf imf;
    imf.zero_crossings = count_zero_crossings(values);
    const ExtremaIndices ext = find_local_extrema(values);
    imf.extrema_count = ext.maxima.size() + ext.minima.size();
    imf.period_samples =
        imf.zero_crossings > 0
            ? static_cast<double>(values.size()) / static_cast<double>(imf.zero_crossings)
            : std::numeric_limits<double>::quiet_NaN();
    imf.variance = variance(values);
    imf.values = std::move(values);
    return imf;
}

} // namespace

Imf sift(std::span<const double> residual, const SiftConfig& cfg) {
    const std::size_t n = residual.size();
    if (n < 3) {
        throw NotSiftableError("sift needs length >= 3");
    }

    std::vector<double> h(residual.begin(), residual.end());
    ExtremaIndices ext = find_local_extrema(h);
    if (ext.maxima.size() < 2 || ext.minima.size() < 2) {
        throw NotSiftableError("sift needs >= 2 maxima and >= 2 minima, got " +
                               std::to_string(ext.maxima.size()) + "/" +
                               std::to_string(ext.minima.size()));
    }

    // A candidate is accepted only after the acceptance test (extrema and
    // zero crossings equal or off by one, and SD below threshold) holds for
    // this many consecutive refinements. A single coincidental pass leaves
    // modes mixed across scales: random-walk inputs then separate into about
    // 13 modes instead of the expected one mode per octave, and the trailing
    // modes absorb several octaves each. Sixteen consecutive passes push the
    // dyadic cascade through the full depth without oversifting the fast
    // modes into constant-amplitude carriers.
    constexpr std::size_t kStablePasses = 16;

    std::vector<double> next(n);
    std::size_t stable = 0;
    for (std::size_t iter = 0; iter < cfg.max_sift_iterations; ++iter) {
        const EnvelopeExtension ends = extend_ends(h, ext, cfg.envelope_boundary);
        const std::vector<double> upper = envelope(h, ext.maxima, ends.left_max, ends.right_max);
        const std::vector<double> lower = envelope(h, ext.minima, ends.left_min, ends.right_min);

        // SD_i = sum_t (h_{i-1}(t) - h_i(t))^2 / sum_t h_{i-1}(t)^2; the
        // subtracted envelope mean is exactly h_{i-1} - h_i.
        double num = 0.0;
        double den = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double env_mean = 0.5 * (upper[t] + lower[t]);
            next[t] = h[t] - env_mean;
            num += env_mean * env_mean;
            den += h[t] * h[t];
        }
        const double sd = den > 0.0 ? num / den : 0.0;

        h.swap(next);
        ext = find_local_extrema(h);
        const bool cond1 =
            condition_one(ext.maxima.size() + ext.minima.size(), count_zero_crossings(h));
        stable = (cond1 && sd < cfg.sd_threshold) ? stable + 1 : 0;
        if (stable >= kStablePasses) {
            break;
        }
        if (ext.maxima.size() < 2 || ext.minima.size() < 2) {
            break; // candidate lost its envelopes; cannot refine further
        }
    }
    return finalize_imf(std::move(h));
}

Decomposition decompose(const Signal& s, const SiftConfig& cfg) {
    validate_finite(s);
    if (s.size() < 3) {
        throw DegenerateInputError("decompose needs length >= 3, got " +
                                   std::to_string(s.size()));
    }

    Decomposition d;
    d.source = s;
    d.residue = s.values;

    // Amplitude below which the running residue counts as exhausted. An
    // input that is itself a sum of exact modes sifts down to rounding
    // noise, which still oscillates; without the floor that noise keeps
    // spawning components of magnitude ~1e-16.
    double source_peak = 0.0;
    for (double v : s.values) source_peak = std::max(source_peak, std::abs(v));
    const double amplitude_floor = 1e-12 * source_peak;

    while (d.imfs.size() < cfg.max_imfs) {
        double residue_peak = 0.0;
        for (double v : d.residue) residue_peak = std::max(residue_peak, std::abs(v));
        if (residue_peak <= amplitude_floor) {
            break; // what is left is rounding noise, not structure
        }
        const ExtremaIndices ext = find_local_extrema(d.residue);
        if (ext.maxima.size() < 2 || ext.minima.size() < 2) {
            break; // residue is constant, monotone, or nearly extrema-free
        }
        Imf imf = sift(d.residue, cfg);
        imf.index_k = d.imfs.size() + 1;
        for (std::size_t t = 0; t < d.residue.size(); ++t) {
            d.residue[t] -= imf.values[t];
        }
        d.imfs.push_back(std::move(imf));
    }

    d.io = d.imfs.empty() ? 0.0 : index_of_orthogonality(d);
    return d;
}

double index_of_orthogonality(const Decomposition& d) {
    constexpr double kEnergyFloor = 1e-30;
    const std::size_t n = d.source.size();

    // IO = sum_t cross(t) / sum_t x(t)^2 with the residue as component n+1
    // and cross(t) = (sum_k C_k)^2 - sum_k C_k^2, twice the sum over
    // unordered pairs j != k. Cross energy is measured against total signal
    // energy, so a perfectly orthogonal decomposition scores zero and
    // |IO| << 1 means the components barely overlap.
    double cross = 0.0;
    double energy = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double x = d.source.values[t];
        double component_sum = d.residue[t];
        double square_sum = d.residue[t] * d.residue[t];
        for (const Imf& imf : d.imfs) {
            component_sum += imf.values[t];
            square_sum += imf.values[t] * imf.values[t];
        }
        cross += component_sum * component_sum - square_sum;
        energy += x * x;
    }
    return energy > kEnergyFloor ? cross / energy : 0.0;
}

double imf_period(const Imf& imf, std::size_t total_length) {
    if (imf.zero_crossings == 0) {
        throw UndefinedPeriodError("IMF " + std::to_string(imf.index_k) +
                                   " has no zero crossings");
    }
    return static_cast<double>(total_length) / static_cast<double>(imf.zero_crossings);
}

Signal trend(const Decomposition& d, std::size_t slow_imf_count) {
    if (slow_imf_count > d.imfs.size()) {
        throw ArgumentError("trend: requested " + std::to_string(slow_imf_count) +
                            " IMFs, decomposition has " + std::to_string(d.imfs.size()));
    }
    Signal out;
    out.values = d.residue;
    out.sample_interval_seconds = d.source.sample_interval_seconds;
    out.label = d.source.label;
    for (std::size_t j = d.imfs.size() - slow_imf_count; j < d.imfs.size(); ++j) {
        for (std::size_t t = 0; t < out.values.size(); ++t) {
            out.values[t] += d.imfs[j].values[t];
        }
    }
    return out;
}

} // namespace emdscale
