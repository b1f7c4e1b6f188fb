#include <doctest.h>

#include <cmath>
#include <vector>

#include "emdscale/spline.hpp"

using namespace emdscale;

namespace {

const std::vector<double> kKnotX{0.0, 1.0, 2.5, 4.0, 7.0, 9.0};
const std::vector<double> kKnotY{1.0, -0.5, 2.0, 0.0, 3.0, -1.0};
const std::vector<double> kEvalX{-1.0, 0.0, 0.5, 1.7,  2.5,
                                 3.3,  5.5, 8.2, 9.0, 10.5};

// reference values computed with an independent spline implementation
const std::vector<double> kNatural{
    2.5000000000000009,   1.0, -0.084562697576396229, 0.60922202708504081,
    2.0,                  1.1620103812980531, 1.1919783983140151,
    1.228569020021077,    -0.99999999999999956, -4.6138369336143299};
const std::vector<double> kNotAKnot{
    11.255555555555556,   1.0, -0.51111111111111107, 0.80355555555555558,
    2.0,                  1.1465481481481485, 0.83749999999999958,
    2.2064000000000012,   -1.0, -15.870833333333328};

bool close(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace

TEST_CASE("natural spline matches the reference interpolant") {
    const CubicSpline cs(kKnotX, kKnotY, SplineEnds::natural);
    for (std::size_t i = 0; i < kEvalX.size(); ++i) {
        CAPTURE(kEvalX[i]);
        CHECK(close(cs(kEvalX[i]), kNatural[i]));
    }
}

TEST_CASE("not-a-knot spline matches the reference interpolant") {
    const CubicSpline cs(kKnotX, kKnotY, SplineEnds::not_a_knot);
    for (std::size_t i = 0; i < kEvalX.size(); ++i) {
        CAPTURE(kEvalX[i]);
        CHECK(close(cs(kEvalX[i]), kNotAKnot[i]));
    }
}

TEST_CASE("both end rules interpolate the knots exactly") {
    for (SplineEnds ends : {SplineEnds::natural, SplineEnds::not_a_knot}) {
        const CubicSpline cs(kKnotX, kKnotY, ends);
        for (std::size_t i = 0; i < kKnotX.size(); ++i) {
            CHECK(close(cs(kKnotX[i]), kKnotY[i]));
        }
    }
}

TEST_CASE("two knots degrade to the straight line through them") {
    for (SplineEnds ends : {SplineEnds::natural, SplineEnds::not_a_knot}) {
        const CubicSpline cs({1.0, 3.0}, {2.0, 6.0}, ends);
        CHECK(close(cs(0.0), 0.0));
        CHECK(close(cs(2.0), 4.0));
        CHECK(close(cs(5.0), 10.0));
    }
}

TEST_CASE("three knots under not-a-knot give the parabola through them") {
    const CubicSpline cs({0.0, 2.0, 5.0}, {1.0, 4.0, -2.0},
                         SplineEnds::not_a_knot);
    CHECK(close(cs(-1.0), -2.6000000000000005));
    CHECK(close(cs(1.0), 3.2000000000000002));
    CHECK(close(cs(3.5), 2.5749999999999997));
    CHECK(close(cs(6.0), -6.799999999999998));
}

TEST_CASE("natural ends have vanishing second derivative") {
    const CubicSpline cs(kKnotX, kKnotY, SplineEnds::natural);
    const double h = 1e-5;
    auto second = [&](double x) {
        return (cs(x - h) - 2.0 * cs(x) + cs(x + h)) / (h * h);
    };
    CHECK(std::abs(second(kKnotX.front())) < 1e-4);
    CHECK(std::abs(second(kKnotX.back())) < 1e-4);
}

TEST_CASE("integer sweep agrees with pointwise evaluation") {
    // knots deliberately extend beyond the sampled range on both sides, as
    // envelope splines with mirrored boundary extrema do
    const std::vector<double> xs{-7.3, -2.0, 1.5, 4.0, 9.25, 14.0, 18.5};
    const std::vector<double> ys{0.4, -1.0, 2.2, -0.3, 0.9, -2.0, 1.1};
    for (SplineEnds ends : {SplineEnds::natural, SplineEnds::not_a_knot}) {
        const CubicSpline cs(xs, ys, ends);
        const std::vector<double> swept = cs.sample_integers(16);
        REQUIRE(swept.size() == 16);
        for (std::size_t t = 0; t < swept.size(); ++t) {
            CHECK(close(swept[t], cs(static_cast<double>(t))));
        }
    }
}
