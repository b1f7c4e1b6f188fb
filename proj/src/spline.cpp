#include "emdscale/spline.hpp"

#include <utility>

#include "emdscale/errors.hpp"

namespace emdscale {

CubicSpline::CubicSpline(std::vector<double> xs, std::vector<double> ys, SplineEnds ends)
    : x_(std::move(xs)), a_(std::move(ys)) {
    const std::size_t n = x_.size();
    if (n < 2 || a_.size() != n) {
        throw ArgumentError("CubicSpline needs >= 2 knots with matching y");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) {
            throw ArgumentError("CubicSpline knots must be strictly increasing");
        }
    }

    b_.assign(n, 0.0);
    c_.assign(n, 0.0);
    d_.assign(n, 0.0);

    if (n == 2) {
        b_[0] = (a_[1] - a_[0]) / (x_[1] - x_[0]);
        b_[1] = b_[0];
        return;
    }

    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
    }

    if (ends == SplineEnds::not_a_knot && n == 3) {
        // Both conditions collapse onto one knot: the parabola through all
        // three points.
        const double f01 = (a_[1] - a_[0]) / h[0];
        const double f12 = (a_[2] - a_[1]) / h[1];
        const double f012 = (f12 - f01) / (h[0] + h[1]);
        c_[0] = c_[1] = c_[2] = f012;
    } else if (ends == SplineEnds::not_a_knot) {
        // Second derivatives c_1..c_{n-2} from the interior continuity rows,
        // with c_0 and c_{n-1} eliminated via the third-derivative
        // continuity conditions at x_1 and x_{n-2}.
        std::vector<double> diag(n, 0.0), sup(n, 0.0), sub(n, 0.0), rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            sub[i] = h[i - 1];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            sup[i] = h[i];
            rhs[i] = 3.0 * ((a_[i + 1] - a_[i]) / h[i] - (a_[i] - a_[i - 1]) / h[i - 1]);
        }
        // c_0 = ((h_0 + h_1) c_1 - h_0 c_2) / h_1  folded into row 1
        diag[1] += h[0] * (h[0] + h[1]) / h[1];
        sup[1] -= h[0] * h[0] / h[1];
        sub[1] = 0.0;
        // c_{n-1} = ((h_{n-3} + h_{n-2}) c_{n-2} - h_{n-2} c_{n-3}) / h_{n-3}
        diag[n - 2] += h[n - 2] * (h[n - 3] + h[n - 2]) / h[n - 3];
        sub[n - 2] -= h[n - 2] * h[n - 2] / h[n - 3];
        sup[n - 2] = 0.0;

        for (std::size_t i = 2; i + 1 < n; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        c_[n - 2] = rhs[n - 2] / diag[n - 2];
        for (std::size_t j = n - 2; j-- > 1;) {
            c_[j] = (rhs[j] - sup[j] * c_[j + 1]) / diag[j];
        }
        c_[0] = ((h[0] + h[1]) * c_[1] - h[0] * c_[2]) / h[1];
        c_[n - 1] = ((h[n - 3] + h[n - 2]) * c_[n - 2] - h[n - 2] * c_[n - 3]) / h[n - 3];
    } else {
        // Natural boundary: zero second derivative at both outer knots.
        std::vector<double> alpha(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            alpha[i] = 3.0 * ((a_[i + 1] - a_[i]) / h[i] - (a_[i] - a_[i - 1]) / h[i - 1]);
        }

        std::vector<double> l(n), mu(n), z(n);
        l[0] = 1.0;
        mu[0] = 0.0;
        z[0] = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            l[i] = 2.0 * (x_[i + 1] - x_[i - 1]) - h[i - 1] * mu[i - 1];
            mu[i] = h[i] / l[i];
            z[i] = (alpha[i] - h[i - 1] * z[i - 1]) / l[i];
        }
        c_[n - 1] = 0.0;
        for (std::size_t j = n - 1; j-- > 0;) {
            c_[j] = z[j] - mu[j] * c_[j + 1];
        }
    }

    for (std::size_t j = n - 1; j-- > 0;) {
        b_[j] = (a_[j + 1] - a_[j]) / h[j] - h[j] * (c_[j + 1] + 2.0 * c_[j]) / 3.0;
        d_[j] = (c_[j + 1] - c_[j]) / (3.0 * h[j]);
    }
}

double CubicSpline::eval_segment(std::size_t seg, double x) const {
    const double dx = x - x_[seg];
    return a_[seg] + dx * (b_[seg] + dx * (c_[seg] + dx * d_[seg]));
}

double CubicSpline::operator()(double x) const {
    const std::size_t n = x_.size();
    if (x <= x_[0]) {
        return eval_segment(0, x);
    }
    if (x >= x_[n - 1]) {
        // Extrapolate the final segment's polynomial.
        return eval_segment(n - 2, x);
    }
    std::size_t lo = 0;
    std::size_t hi = n - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (x_[mid] <= x) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return eval_segment(lo, x);
}

std::vector<double> CubicSpline::sample_integers(std::size_t count) const {
    std::vector<double> out(count);
    const std::size_t n = x_.size();
    std::size_t seg = 0;
    for (std::size_t t = 0; t < count; ++t) {
        const double x = static_cast<double>(t);
        while (seg + 2 < n && x >= x_[seg + 1]) {
            ++seg;
        }
        out[t] = eval_segment(seg, x);
    }
    return out;
}

} // namespace emdscale
