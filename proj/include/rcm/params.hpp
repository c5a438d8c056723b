#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "error.hpp"

namespace rcm {

// Parameters of the heterogeneous random-connection model. Weights are
// Pareto(1, tau): F(w) = 1 - w^-tau on [1, inf). Two particles at distance r
// with weights wx, wy are joined with probability 1 - exp(-lambda wx wy r^-alpha).
struct ModelParams {
    int d = 1;
    double nu = 1.0;     // Poisson intensity
    double lambda = 1.0; // connection scale
    double alpha = 2.0;  // distance decay exponent
    double tau = 3.0;    // Pareto tail exponent

    // Throws Error(InvalidArgument) naming the first offending field.
    void validate() const
    {
        if (d < 1)
            fail(ErrorKind::InvalidArgument, "invalid dimension d=" + std::to_string(d) + " (need d >= 1)");
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                fail(ErrorKind::InvalidArgument, std::string(name) + " must be a finite positive number");
        };
        positive(nu, "nu");
        positive(lambda, "lambda");
        positive(alpha, "alpha");
        positive(tau, "tau");
    }

    double tau_alpha() const { return tau * alpha; }

    // tau*alpha/d, the tail exponent of the degree distribution.
    double tail_exponent() const { return tau * alpha / d; }
};

namespace detail {

// Relative slack used for threshold comparisons such as tau*alpha == 2d.
inline constexpr double kThresholdSlack = 1e-12;

inline bool approx_equal(double a, double b)
{
    return std::abs(a - b) <= kThresholdSlack * std::max(std::abs(a), std::abs(b));
}

// a < b with a and b treated as equal inside the slack.
inline bool definitely_less(double a, double b) { return a < b && !approx_equal(a, b); }

inline bool less_or_equal(double a, double b) { return a <= b || approx_equal(a, b); }

} // namespace detail

// min{alpha, tau*alpha} > d: the mean number of neighbours of a particle is finite.
inline bool finite_degree(const ModelParams& p)
{
    return detail::definitely_less(static_cast<double>(p.d), std::min(p.alpha, p.tau_alpha()));
}

enum class Regime {
    InfiniteDegree,
    LambdaCZero,
    LambdaCPositiveFinite,
    LambdaCInfinite,
    BoundaryFiniteUnknownPositivity,
};

inline std::string_view to_string(Regime r)
{
    switch (r) {
    case Regime::InfiniteDegree: return "InfiniteDegree";
    case Regime::LambdaCZero: return "LambdaCZero";
    case Regime::LambdaCPositiveFinite: return "LambdaCPositiveFinite";
    case Regime::LambdaCInfinite: return "LambdaCInfinite";
    case Regime::BoundaryFiniteUnknownPositivity: return "BoundaryFiniteUnknownPositivity";
    }
    return "unknown";
}

enum class Boundary { Torus, Free };

inline std::string_view to_string(Boundary b) { return b == Boundary::Torus ? "torus" : "free"; }

inline Boundary parse_boundary(std::string_view s)
{
    if (s == "torus")
        return Boundary::Torus;
    if (s == "free")
        return Boundary::Free;
    fail(ErrorKind::InvalidArgument, "boundary must be 'torus' or 'free', got '" + std::string(s) + "'");
}

// The box [-L/2, L/2)^d.
struct BoxDomain {
    int d = 1;
    double side = 1.0;
    Boundary boundary = Boundary::Torus;

    void validate() const
    {
        if (d < 1)
            fail(ErrorKind::InvalidArgument, "invalid dimension d=" + std::to_string(d));
        if (!(side > 0.0) || !std::isfinite(side))
            fail(ErrorKind::InvalidArgument, "box side L must be a finite positive number");
    }

    double volume() const { return std::pow(side, d); }

    bool operator==(const BoxDomain&) const = default;
};

} // namespace rcm
