#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "error.hpp"

namespace rcm::quad {

struct Tolerance {
    double absolute = 1e-12;
    double relative = 1e-12;
    int max_subdivisions = 2000;
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kNodes = {
    0.000000000000000000e+00, 2.077849550078984676e-01, 4.058451513773971669e-01,
    5.860872354676911302e-01, 7.415311855993944398e-01, 8.648644233597690727e-01,
    9.491079123427585245e-01, 9.914553711208126392e-01,
};
inline constexpr std::array<double, 8> kKronrod = {
    2.094821410847278280e-01, 2.044329400752988924e-01, 1.903505780647854099e-01,
    1.690047266392679028e-01, 1.406532597155259187e-01, 1.047900103222501838e-01,
    6.309209262997855329e-02, 2.293532201052922496e-02,
};
// Gauss weights for nodes 0, 2, 4, 6.
inline constexpr std::array<double, 4> kGauss = {
    4.179591836734693878e-01, 3.818300505051189450e-01,
    2.797053914892766679e-01, 1.294849661688696933e-01,
};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrod[0];
    double gauss = fc * kGauss[0];
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kNodes[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrod[i] * pair;
        if (i % 2 == 0)
            gauss += kGauss[i / 2] * pair;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace detail

// Globally adaptive Gauss-Kronrod quadrature on a finite interval. The
// segment with the largest error estimate is bisected until the summed
// error meets max(absolute, relative*|value|).
template <class F>
Estimate integrate(F&& f, double a, double b, const Tolerance& tol = {})
{
    std::priority_queue<detail::Segment> heap;
    heap.push(detail::gk15(f, a, b));
    double value = heap.top().value;
    double error = heap.top().error;
    int splits = 0;
    while (error > std::max(tol.absolute, tol.relative * std::abs(value))) {
        if (splits >= tol.max_subdivisions)
            fail(ErrorKind::Convergence, "adaptive quadrature did not converge within " +
                                             std::to_string(tol.max_subdivisions) + " subdivisions");
        const detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = detail::gk15(f, worst.a, mid);
        const auto right = detail::gk15(f, mid, worst.b);
        heap.push(left);
        heap.push(right);
        ++splits;
        value += left.value + right.value - worst.value;
        error = std::max(0.0, error + left.error + right.error - worst.error);
    }
    return {value, error, splits};
}

} // namespace rcm::quad
