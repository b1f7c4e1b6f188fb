#pragma once

#include <cstddef>
#include <vector>

namespace emdscale {

// End conditions for CubicSpline. `natural` zeroes the second derivative at
// the outer knots; `not_a_knot` makes the two outermost segment pairs share
// one cubic each, which keeps end curvature and matches the conventional
// interpolant of numerical environments.
enum class SplineEnds { natural, not_a_knot };

// Cubic spline through (x, y) knots with strictly increasing x. Two knots
// degrade to the straight line through them, three under not_a_knot to the
// parabola. Evaluation outside the knot range extrapolates the boundary
// segment.
class CubicSpline {
public:
    CubicSpline(std::vector<double> xs, std::vector<double> ys,
                SplineEnds ends = SplineEnds::natural);

    double operator()(double x) const;

    // Evaluates the spline at x = 0, 1, ..., count-1 in one left-to-right
    // sweep; equivalent to calling operator() per point but O(count + knots).
    std::vector<double> sample_integers(std::size_t count) const;

    std::size_t knot_count() const { return x_.size(); }

private:
    double eval_segment(std::size_t seg, double x) const;

    std::vector<double> x_;
    std::vector<double> a_; // value at left knot
    std::vector<double> b_; // first derivative coefficients
    std::vector<double> c_; // second
    std::vector<double> d_; // third
};

} // namespace emdscale
