#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <utility>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "error.hpp"
#include "params.hpp"

// Independent reference computations used to validate the closed forms and
// the union-find clustering. Nothing here calls into analytic.hpp or
// graph.hpp; integration is done with Boost.Math rather than the in-house
// Gauss-Kronrod driver, and in different integration variables.
namespace rcm::oracle {

struct QuadratureSpec {
    double absolute_tolerance = 1e-14;
    double relative_tolerance = 1e-12;
    // Refinement levels for the double-exponential rules, bisection depth
    // for Gauss-Kronrod.
    int max_subdivisions = 15;

    void validate() const
    {
        if (!(absolute_tolerance > 0.0) || !(relative_tolerance > 0.0) || max_subdivisions < 1)
            fail(ErrorKind::InvalidArgument, "quadrature tolerances must be positive");
    }
};

namespace detail {

// v_d by the recursion v_d = 2 pi v_{d-2} / d.
inline double ball_volume_recursive(int d)
{
    double v = (d % 2 == 0) ? 1.0 : 2.0;
    for (int k = (d % 2 == 0) ? 2 : 3; k <= d; k += 2)
        v *= 2.0 * std::numbers::pi / k;
    return v;
}

inline void require_finite(const ModelParams& p)
{
    p.validate();
    if (!(std::min(p.alpha, p.tau * p.alpha) > p.d))
        fail(ErrorKind::DivergentIntegral, "oracle: min{alpha, tau*alpha} <= d, integral diverges");
}

inline void check(double value, double error, const QuadratureSpec& spec, const char* what)
{
    if (!std::isfinite(value) || error > 1e3 * std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(value)))
        fail(ErrorKind::Convergence, std::string("oracle quadrature did not converge: ") + what);
}

template <class F>
double gk(F f, double a, double b, const QuadratureSpec& spec, const char* what)
{
    double error = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, static_cast<unsigned>(spec.max_subdivisions), spec.relative_tolerance * 1e-2, &error);
    check(v, std::abs(error), spec, what);
    return v;
}

template <class F>
double half_line(F f, double a, const QuadratureSpec& spec, const char* what)
{
    double error = 0.0;
    double l1 = 0.0;
    double v = 0.0;
    try {
        boost::math::quadrature::exp_sinh<double> rule(static_cast<std::size_t>(spec.max_subdivisions));
        v = rule.integrate(f, a, std::numeric_limits<double>::infinity(), spec.relative_tolerance * 1e-2, &error, &l1);
    } catch (const std::exception& e) {
        fail(ErrorKind::Convergence, std::string("oracle quadrature failed (") + what + "): " + e.what());
    }
    check(v, error, spec, what);
    return v;
}

// tanh-sinh for integrands with algebraic endpoint behaviour.
template <class F>
double finite_interval(F f, double a, double b, const QuadratureSpec& spec, const char* what)
{
    double error = 0.0;
    double l1 = 0.0;
    double v = 0.0;
    try {
        boost::math::quadrature::tanh_sinh<double> rule(static_cast<std::size_t>(spec.max_subdivisions));
        v = rule.integrate(f, a, b, spec.relative_tolerance * 1e-2, &error, &l1);
    } catch (const std::exception& e) {
        fail(ErrorKind::Convergence, std::string("oracle quadrature failed (") + what + "): " + e.what());
    }
    check(v, error, spec, what);
    return v;
}

// K(s) = int_0^inf (1 - e^-u) u^{-s-1} du for 0 < s < 1, split at u = 1.
// The u^{-s} singularity at 0 and the u^{-s-1} tail are integrated exactly;
// the smooth remainders numerically.
inline double radial_kernel(double s, const QuadratureSpec& spec)
{
    const double near = finite_interval(
        [s](double u) {
            // series of 1 - e^-u - u below 1e-3 avoids cancellation
            if (u < 1e-3)
                return (-0.5 + u / 6.0 - u * u / 24.0) * std::pow(u, 1.0 - s);
            return (-std::expm1(-u) - u) * std::pow(u, -s - 1.0);
        },
        0.0, 1.0, spec, "radial kernel on [0,1]");
    const double far = half_line([s](double u) { return std::exp(-u) * std::pow(u, -s - 1.0); }, 1.0, spec,
                                 "radial kernel on [1,inf)");
    return 1.0 / (1.0 - s) + near + 1.0 / s - far;
}

} // namespace detail

// I(w) = int_{R^d} E[1 - exp(-lambda w W |x|^-alpha)] dx by quadrature.
// Polar coordinates and t = r^-alpha give, for partner weight w',
//   d v_d / alpha * int_0^inf (1 - e^{-a t}) t^{-d/alpha - 1} dt,  a = lambda w w'.
// Rescaling u = a t leaves a^{d/alpha} K(d/alpha); the average over w'
// (Pareto density, integrated in log w') is a second quadrature.
inline double quadrature_integral(const ModelParams& p, double w, const QuadratureSpec& spec = {})
{
    detail::require_finite(p);
    spec.validate();
    if (!(w >= 1.0))
        fail(ErrorKind::Domain, "oracle: weight must be >= 1");
    const double s = p.d / p.alpha;
    const double radial = p.d * detail::ball_volume_recursive(p.d) / p.alpha * detail::radial_kernel(s, spec);
    const double lw = std::log(p.lambda * w);
    // w' = e^y, density tau e^{-tau y} dy
    const double mixed = detail::half_line(
        [&](double y) { return p.tau * std::exp(-p.tau * y + s * (lw + y)); }, 0.0, spec, "partner-weight average");
    return radial * mixed;
}

// P0[D0 = k] as the Poisson mixture over the origin's weight:
//   int_1^inf tau w^{-tau-1} Poisson(k; nu I(w)) dw,
// with I(w) = I(1) w^{d/alpha} from quadrature_integral. Integrated in
// y = log w up to Y where the Pareto tail mass e^{-tau Y} is below
// absolute_tolerance / 10 (the Poisson factor is at most 1).
inline double mixing_pmf_oracle(const ModelParams& p, long long k, const QuadratureSpec& spec = {})
{
    detail::require_finite(p);
    spec.validate();
    if (k < 0)
        fail(ErrorKind::Domain, "oracle: k must be >= 0");
    const double s = p.d / p.alpha;
    const double log_mu1 = std::log(p.nu * quadrature_integral(p, 1.0, spec));
    const double kk = static_cast<double>(k);
    const double log_kfact = std::lgamma(kk + 1.0);
    auto f = [&](double y) {
        const double log_mu = log_mu1 + s * y;
        return p.tau * std::exp(-p.tau * y + kk * log_mu - std::exp(log_mu) - log_kfact);
    };
    const double y_max = std::log(10.0 / spec.absolute_tolerance) / p.tau;
    // Split at the Poisson peak mu(y) = k so the rule sees it.
    const double y_peak = k > 0 ? (std::log(kk) - log_mu1) / s : 0.0;
    double total = 0.0;
    if (y_peak > 0.0 && y_peak < y_max) {
        total += detail::gk(f, 0.0, y_peak, spec, "mixture below peak");
        total += detail::gk(f, y_peak, y_max, spec, "mixture above peak");
    } else {
        total += detail::gk(f, 0.0, y_max, spec, "mixture");
    }
    return total;
}

// Breadth-first labelling; each vertex gets the smallest id of its component.
inline std::vector<std::uint32_t> bfs_components(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                                 std::size_t n)
{
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& [a, b] : edges) {
        if (a >= n || b >= n)
            fail(ErrorKind::InvalidArgument, "bfs_components: edge endpoint out of range");
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> label(n, unset);
    std::queue<std::uint32_t> frontier;
    for (std::uint32_t start = 0; start < n; ++start) {
        if (label[start] != unset)
            continue;
        label[start] = start; // smallest unvisited id opens its component
        frontier.push(start);
        while (!frontier.empty()) {
            const auto v = frontier.front();
            frontier.pop();
            for (auto u : adj[v])
                if (label[u] == unset) {
                    label[u] = start;
                    frontier.push(u);
                }
        }
    }
    return label;
}

} // namespace rcm::oracle
