#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "params.hpp"
#include "philox.hpp"

namespace rcm {

// Particle budget for a single cloud, overridable through RCM_MAX_PARTICLES.
inline std::uint64_t max_particles()
{
    if (const char* env = std::getenv("RCM_MAX_PARTICLES")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return v;
    }
    return 50'000'000;
}

// Inverse-CDF draw from Pareto(1, tau): survival w^-tau on [1, inf).
inline double sample_pareto(double tau, double u)
{
    if (!(u > 0.0 && u < 1.0))
        fail(ErrorKind::Domain, "sample_pareto: u must lie in (0, 1)");
    if (!(tau > 0.0))
        fail(ErrorKind::InvalidArgument, "sample_pareto: tau must be positive");
    return std::exp(-std::log1p(-u) / tau);
}

namespace detail {

// Poisson(mean) from the keyed stream (rng, stream, attempt index). Small
// means use sequential inversion, large means Hormann's PTRS.
inline std::uint64_t sample_poisson(const CounterRng& rng, std::uint32_t stream, double mean)
{
    if (mean <= 0.0)
        return 0;
    if (mean < 10.0) {
        const double u = rng.uniform(stream, 0, 0);
        double p = std::exp(-mean);
        double cdf = p;
        std::uint64_t k = 0;
        while (u > cdf && k < 1000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (std::uint32_t attempt = 0;; ++attempt) {
        const double U = rng.uniform(stream, attempt, 0, 0) - 0.5;
        const double V = rng.uniform(stream, attempt, 0, 1);
        const double us = 0.5 - std::abs(U);
        const double k = std::floor((2.0 * a / us + b) * U + mean + 0.43);
        if (us >= 0.07 && V <= vr)
            return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && V > us))
            continue;
        if (std::log(V) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0))
            return static_cast<std::uint64_t>(k);
    }
}

} // namespace detail

struct Particle {
    std::uint32_t id;
    std::span<const double> position;
    double weight;
};

// Marked Poisson cloud in a centred box. Storage is columnar: coordinates
// of particle i occupy coords[i*d, (i+1)*d).
class PointCloud {
public:
    PointCloud() = default;
    PointCloud(BoxDomain domain, std::uint64_t seed, bool palm)
        : domain_(domain), seed_(seed), palm_(palm)
    {
    }

    const BoxDomain& domain() const noexcept { return domain_; }
    std::uint64_t seed() const noexcept { return seed_; }
    bool palm() const noexcept { return palm_; }
    int dim() const noexcept { return domain_.d; }
    std::size_t size() const noexcept { return weights_.size(); }
    bool empty() const noexcept { return weights_.empty(); }

    std::span<const double> position(std::size_t i) const
    {
        return {coords_.data() + i * static_cast<std::size_t>(domain_.d), static_cast<std::size_t>(domain_.d)};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    Particle operator[](std::size_t i) const { return {static_cast<std::uint32_t>(i), position(i), weights_[i]}; }

    const std::vector<double>& coords() const noexcept { return coords_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    void reserve(std::size_t n)
    {
        coords_.reserve(n * static_cast<std::size_t>(domain_.d));
        weights_.reserve(n);
    }

    void push_back(std::span<const double> position, double weight)
    {
        if (position.size() != static_cast<std::size_t>(domain_.d))
            fail(ErrorKind::InvalidArgument, "particle dimension does not match the domain");
        if (!(weight >= 1.0))
            fail(ErrorKind::Domain, "particle weight must be >= 1");
        coords_.insert(coords_.end(), position.begin(), position.end());
        weights_.push_back(weight);
    }

    bool operator==(const PointCloud&) const = default;

private:
    BoxDomain domain_{};
    std::uint64_t seed_ = 0;
    bool palm_ = false;
    std::vector<double> coords_;
    std::vector<double> weights_;
};

namespace detail {

inline void append_poisson_particles(PointCloud& cloud, const ModelParams& params, std::uint64_t seed)
{
    const BoxDomain& dom = cloud.domain();
    const double mean = params.nu * dom.volume();
    const std::uint64_t budget = max_particles();
    if (!(mean <= static_cast<double>(budget)))
        fail(ErrorKind::Capacity, "expected particle count " + std::to_string(mean) +
                                      " exceeds the particle budget " + std::to_string(budget));
    const CounterRng rng(seed);
    const std::uint64_t n = sample_poisson(rng, streams::kCount, mean);
    if (n + cloud.size() > budget)
        fail(ErrorKind::Capacity, "sampled particle count exceeds the particle budget");

    const double half = 0.5 * dom.side;
    const auto d = static_cast<std::uint32_t>(dom.d);
    std::vector<double> x(d);
    cloud.reserve(cloud.size() + n);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t k = 0; k < d; ++k) {
            double c = -half + rng.uniform(streams::kCloud, i, 0, k) * dom.side;
            if (c >= half)
                c = std::nextafter(half, -half);
            x[k] = c;
        }
        cloud.push_back(x, sample_pareto(params.tau, rng.uniform(streams::kCloud, i, 0, d)));
    }
}

inline void validate_sampling_inputs(const ModelParams& params, const BoxDomain& domain)
{
    params.validate();
    domain.validate();
    if (params.d != domain.d)
        fail(ErrorKind::InvalidArgument, "model dimension and box dimension differ");
}

} // namespace detail

// Homogeneous Poisson cloud of intensity nu in the box with i.i.d.
// Pareto(1, tau) weights. Particle i draws from stream "cloud", index i.
inline PointCloud sample_cloud(const ModelParams& params, const BoxDomain& domain, std::uint64_t seed)
{
    detail::validate_sampling_inputs(params, domain);
    PointCloud cloud(domain, seed, false);
    detail::append_poisson_particles(cloud, params, seed);
    return cloud;
}

// Palm version: an extra particle at the exact origin (index 0) with an
// independent weight; particles 1.. coincide with sample_cloud(seed).
inline PointCloud sample_palm_cloud(const ModelParams& params, const BoxDomain& domain, std::uint64_t seed)
{
    detail::validate_sampling_inputs(params, domain);
    PointCloud cloud(domain, seed, true);
    const std::vector<double> origin(static_cast<std::size_t>(domain.d), 0.0);
    cloud.push_back(origin, sample_pareto(params.tau, CounterRng(seed).uniform(streams::kPalm, 0, 0)));
    detail::append_poisson_particles(cloud, params, seed);
    return cloud;
}

// Euclidean distance; minimum-image on the torus.
inline double distance(const BoxDomain& domain, std::span<const double> a, std::span<const double> b)
{
    double sum = 0.0;
    const bool torus = domain.boundary == Boundary::Torus;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double delta = std::abs(a[k] - b[k]);
        if (torus)
            delta = std::min(delta, domain.side - delta);
        sum += delta * delta;
    }
    return std::sqrt(sum);
}

} // namespace rcm
