#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "params.hpp"
#include "quadrature.hpp"

// Closed-form degree laws of the heterogeneous random-connection model and
// the percolation regime table. Everything here is a pure function of
// ModelParams.
namespace rcm::analytic {

// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d)
{
    if (d < 1)
        fail(ErrorKind::InvalidArgument, "invalid dimension d=" + std::to_string(d) + " (need d >= 1)");
    const double half = 0.5 * d;
    return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

namespace detail {

inline void require_finite_degree(const ModelParams& p)
{
    p.validate();
    if (!finite_degree(p))
        fail(ErrorKind::DivergentIntegral,
             "min{alpha, tau*alpha} <= d: the expected number of neighbours diverges "
             "and the degree is infinite almost surely");
}

// log(nu * v_d * Gamma(1 - d/alpha) * tau / (tau - d/alpha))
inline double log_base(const ModelParams& p)
{
    const double s = p.d / p.alpha;
    return std::log(p.nu) + std::log(unit_ball_volume(p.d)) + std::lgamma(1.0 - s) +
           std::log(p.tau / (p.tau - s));
}

} // namespace detail

// I(w): expected number of neighbours per unit intensity of a particle of
// weight w, i.e. the integral over R^d of the connection probability
// averaged over the partner's weight.
inline double integral_closed_form(const ModelParams& p, double w)
{
    detail::require_finite_degree(p);
    if (!(w >= 1.0))
        fail(ErrorKind::Domain, "weight must be >= 1 (Pareto support), got " + std::to_string(w));
    const double s = p.d / p.alpha;
    return std::exp(detail::log_base(p) - std::log(p.nu) + s * std::log(p.lambda * w));
}

inline double log_c1_constant(const ModelParams& p)
{
    detail::require_finite_degree(p);
    return p.tail_exponent() * detail::log_base(p) + p.tau * std::log(p.lambda);
}

// c1 in P[D0 > n] ~ c1 n^{-tau alpha / d}. Evaluated in log space; can be
// +inf for extreme tail exponents, use log_c1_constant then.
inline double c1_constant(const ModelParams& p) { return std::exp(log_c1_constant(p)); }

// E[D0] = nu v_d Gamma(1 - d/alpha) (tau/(tau - d/alpha))^2 lambda^{d/alpha}
inline double mean_degree(const ModelParams& p)
{
    detail::require_finite_degree(p);
    const double s = p.d / p.alpha;
    return std::exp(detail::log_base(p) + std::log(p.tau / (p.tau - s)) + s * std::log(p.lambda));
}

// Leading-order tail c1 n^{-tau alpha/d}.
inline double tail_asymptotic(const ModelParams& p, long long n)
{
    if (n < 1)
        fail(ErrorKind::Domain, "tail_asymptotic needs n >= 1");
    return std::exp(log_c1_constant(p) - p.tail_exponent() * std::log(static_cast<double>(n)));
}

// P0[D0 = k]. With beta = tau alpha/d and a = c1^{1/beta},
//   P0[D0 = k] = beta c1 / k! * int_a^inf t^{k - beta - 1} e^{-t} dt,
// an upper incomplete gamma with possibly negative shape. Substituting
// t = a (1 + v) gives
//   beta a^k e^{-a} / k! * int_0^inf (1 + v)^{k - beta - 1} e^{-a v} dv,
// integrated adaptively in log-scale around the integrand's peak, with the
// tail beyond the cut bounded analytically.
inline double degree_pmf(const ModelParams& p, long long k, const quad::Tolerance& tol = {})
{
    detail::require_finite_degree(p);
    if (k < 0)
        fail(ErrorKind::Domain, "degree_pmf needs k >= 0");
    const double beta = p.tail_exponent();
    const double a = std::exp(log_c1_constant(p) / beta);
    const double kk = static_cast<double>(k);
    const double m = kk - beta - 1.0;

    const double peak = m > a ? m / a - 1.0 : 0.0;
    const double g_peak = m * std::log1p(peak) - a * peak;
    // g(v) - g(peak), formed without cancelling two large terms
    auto rel = [&](double v) { return m * std::log1p((v - peak) / (1.0 + peak)) - a * (v - peak); };
    auto integrand = [&](double v) { return std::exp(rel(v)); };
    // Upper bound on int_V^inf e^{g - g_peak}: g is concave past the peak
    // when m > 0; for m <= 0, (1+v)^m <= (1+V)^m.
    auto remainder = [&](double cut) {
        const double slope = m > 0.0 ? a - m / (1.0 + cut) : a;
        return std::exp(rel(cut)) / slope;
    };

    const double width = (std::sqrt(std::max(m, 0.0)) + 1.0) / a;
    double cut = peak + width;
    int doublings = 0;
    while (remainder(cut) > 1e-3 * tol.relative) {
        cut = peak + (cut - peak) * 2.0;
        if (++doublings > 200)
            fail(ErrorKind::Convergence, "degree_pmf: tail cut-off search failed");
    }

    quad::Tolerance inner = tol;
    inner.absolute = 0.0;
    double scaled = 0.0;
    if (peak > 0.0)
        scaled += quad::integrate(integrand, 0.0, peak, inner).value;
    scaled += quad::integrate(integrand, peak, cut, inner).value;
    scaled += 0.5 * remainder(cut); // midpoint of [0, bound]

    const double log_prefactor = std::log(beta) + kk * std::log(a) - a - std::lgamma(kk + 1.0) + g_peak;
    return std::exp(log_prefactor) * scaled;
}

// P0[D0 = k] for k = 0, 1, ... until the accumulated mass reaches 1 - tail_tol.
inline std::vector<double> degree_pmf_table(const ModelParams& p, double tail_tol = 1e-8,
                                            long long k_cap = 1'000'000)
{
    std::vector<double> table;
    double mass = 0.0;
    double carry = 0.0; // Kahan compensation
    for (long long k = 0; k <= k_cap; ++k) {
        const double v = degree_pmf(p, k);
        table.push_back(v);
        const double y = v - carry;
        const double t = mass + y;
        carry = (t - mass) - y;
        mass = t;
        if (1.0 - mass < tail_tol)
            return table;
    }
    fail(ErrorKind::Convergence, "degree_pmf_table: tail mass above tolerance at k_cap");
}

// Percolation regime as a function of (d, alpha, tau). The tau*alpha = 2d
// boundary is reported separately: lambda_c is finite there but its
// positivity is open.
inline Regime classify_regime(const ModelParams& p)
{
    p.validate();
    using rcm::detail::approx_equal;
    using rcm::detail::less_or_equal;
    const double d = p.d;
    const double ta = p.tau_alpha();
    if (!finite_degree(p))
        return Regime::InfiniteDegree;
    if (approx_equal(ta, 2.0 * d))
        return Regime::BoundaryFiniteUnknownPositivity;
    if (ta < 2.0 * d)
        return Regime::LambdaCZero;
    if (p.d >= 2)
        return Regime::LambdaCPositiveFinite;
    // d = 1, tau*alpha > 2; alpha > 1 holds since the degree is finite.
    if (less_or_equal(p.alpha, 2.0))
        return Regime::LambdaCPositiveFinite;
    return Regime::LambdaCInfinite;
}

struct AnalyticReport {
    ModelParams params;
    double v_d = 0.0;
    Regime regime = Regime::InfiniteDegree;
    std::optional<double> c1;
    std::optional<double> log_c1;
    std::optional<double> mean_degree;

    // I(w); requires the finite-degree regime.
    double integral_at(double w) const { return integral_closed_form(params, w); }
};

inline AnalyticReport analyze(const ModelParams& p)
{
    AnalyticReport r;
    r.params = p;
    r.v_d = unit_ball_volume(p.d);
    r.regime = classify_regime(p);
    if (r.regime != Regime::InfiniteDegree) {
        r.log_c1 = log_c1_constant(p);
        r.c1 = std::exp(*r.log_c1);
        r.mean_degree = mean_degree(p);
    }
    return r;
}

} // namespace rcm::analytic
