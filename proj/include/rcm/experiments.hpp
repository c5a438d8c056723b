#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "analytic.hpp"
#include "cloud.hpp"
#include "disjoint_set.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "philox.hpp"

// Monte Carlo drivers. Replica r of an experiment keyed by `seed` uses
// replica_seed(seed, r) for both its cloud and its pair variates, so results
// are identical for any worker count.
namespace rcm::experiments {

struct DegreeStudyResult {
    ModelParams params;
    double side = 0.0;
    std::uint64_t replicas = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> histogram; // histogram[k] = #replicas with palm degree k
    std::vector<double> analytic_pmf;     // P0[D0 = k] for the same k range
    double tv_distance = 0.0;
    double sample_mean = 0.0;
    double standard_error = 0.0;
};

struct TailFitResult {
    double exponent = 0.0;
    std::uint64_t n_min = 0;
    std::uint64_t n_max = 0;
    double standard_error = 0.0;
    double target = 0.0;
};

struct ThetaScanResult {
    ModelParams params;
    std::vector<double> lambdas;
    std::vector<double> spanning_freq;
    std::vector<double> origin_cluster_mean;
    std::uint64_t replicas = 0;
    double side = 0.0;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    // replica_spanning[r][g]: origin's component spans at lambdas[g].
    std::vector<std::vector<std::uint8_t>> replica_spanning;
    std::uint64_t monotone_violations = 0;
    bool monotone = true;
};

struct SideTrend {
    double from_side = 0.0;
    double to_side = 0.0;
    double difference = 0.0; // freq(to) - freq(from)
    double joint_se = 0.0;
    std::string direction; // "increasing", "decreasing" or "flat" at 2 joint SE
};

struct FiniteSizeReport {
    ModelParams params;
    Regime regime = Regime::InfiniteDegree;
    std::vector<double> sides;
    std::vector<double> spanning_freq;
    std::vector<double> standard_error;
    std::uint64_t replicas = 0;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    std::vector<SideTrend> trends;
    // Regime-specific expectation at 2 joint SE: nondecreasing for
    // LambdaCZero, nonincreasing for LambdaCInfinite; true otherwise.
    bool consistent_with_regime = true;
};

enum class Adjacency { Face, Moore };

inline std::string_view to_string(Adjacency a) { return a == Adjacency::Face ? "face" : "moore"; }

inline Adjacency parse_adjacency(std::string_view s)
{
    if (s == "face")
        return Adjacency::Face;
    if (s == "moore")
        return Adjacency::Moore;
    fail(ErrorKind::InvalidArgument, "adjacency must be 'face' or 'moore', got '" + std::string(s) + "'");
}

struct SiteBondReport {
    ModelParams params;
    double cube_side = 0.0;
    std::uint32_t extent = 0;
    Adjacency adjacency = Adjacency::Face;
    double max_distance = 0.0; // r(n, d)
    double p_site = 0.0;
    double p_bond = 0.0;
    std::uint64_t replicas = 0;
    std::uint64_t seed = 0;
    double spanning_freq = 0.0;
    double standard_error = 0.0;
};

namespace detail {

inline double binomial_se(double p, std::uint64_t n) { return n ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0; }

inline std::uint64_t side_seed(std::uint64_t seed, std::size_t side_index)
{
    return replica_seed(seed, (std::uint64_t{1} << 40) + side_index);
}

struct PalmOutcome {
    std::uint8_t spanning = 0;
    std::uint32_t origin_size = 0;
};

inline PalmOutcome palm_outcome(const ModelParams& params, std::shared_ptr<const PointCloud> cloud,
                                std::uint64_t seed, double epsilon)
{
    const Graph g = build_graph_fast(params, std::move(cloud), seed, epsilon);
    const ClusterStats stats = components(g);
    return {static_cast<std::uint8_t>(stats.spanning), stats.origin_cluster_size.value_or(0)};
}

} // namespace detail

// Palm-particle degree over R independent torus boxes of side L, compared
// with the exact degree law.
inline DegreeStudyResult run_degree_study(const ModelParams& params, double side, std::uint64_t replicas,
                                          std::uint64_t seed, unsigned workers = 1)
{
    params.validate();
    const Regime regime = analytic::classify_regime(params);
    if (regime == Regime::InfiniteDegree)
        fail(ErrorKind::RegimeRefusal,
             "degree study refused: min{alpha, tau*alpha} <= d makes the degree infinite, "
             "and a finite box would silently truncate it");
    if (replicas == 0)
        fail(ErrorKind::InvalidArgument, "degree study needs at least one replica");
    const BoxDomain domain{params.d, side, Boundary::Torus};
    domain.validate();

    struct Sample {
        std::uint32_t degree = 0;
    };
    const auto samples = run_indexed(replicas, workers, [&](std::size_t r) {
        const std::uint64_t rs = replica_seed(seed, r);
        const PointCloud cloud = sample_palm_cloud(params, domain, rs);
        return Sample{palm_degree(params, cloud, rs)};
    });

    DegreeStudyResult out;
    out.params = params;
    out.side = side;
    out.replicas = replicas;
    out.seed = seed;
    std::uint32_t max_degree = 0;
    for (const auto& s : samples)
        max_degree = std::max(max_degree, s.degree);
    out.histogram.assign(max_degree + 1, 0);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& s : samples) {
        ++out.histogram[s.degree];
        sum += s.degree;
        sum_sq += static_cast<double>(s.degree) * s.degree;
    }
    const double n = static_cast<double>(replicas);
    out.sample_mean = sum / n;
    const double var = replicas > 1 ? (sum_sq - n * out.sample_mean * out.sample_mean) / (n - 1.0) : 0.0;
    out.standard_error = std::sqrt(std::max(var, 0.0) / n);

    out.analytic_pmf.resize(out.histogram.size());
    double analytic_mass = 0.0;
    double abs_diff = 0.0;
    for (std::size_t k = 0; k < out.histogram.size(); ++k) {
        out.analytic_pmf[k] = analytic::degree_pmf(params, static_cast<long long>(k));
        analytic_mass += out.analytic_pmf[k];
        abs_diff += std::abs(static_cast<double>(out.histogram[k]) / n - out.analytic_pmf[k]);
    }
    // analytic mass beyond the largest observed degree counts fully
    out.tv_distance = std::clamp(0.5 * (abs_diff + std::max(0.0, 1.0 - analytic_mass)), 0.0, 1.0);
    return out;
}

// Least-squares slope of log P[D > n] against log n over the fixed window
// [empirical 90th percentile, largest n with >= 30 exceedances].
inline TailFitResult fit_tail_exponent(const std::vector<std::uint64_t>& histogram, double target)
{
    const std::uint64_t total = std::accumulate(histogram.begin(), histogram.end(), std::uint64_t{0});
    if (total == 0)
        fail(ErrorKind::InvalidArgument, "fit_tail_exponent: empty sample");
    // exceed[n] = #{D > n}
    std::vector<std::uint64_t> exceed(histogram.size(), 0);
    std::uint64_t above = total;
    for (std::size_t n = 0; n < histogram.size(); ++n) {
        above -= histogram[n];
        exceed[n] = above;
    }
    std::uint64_t n_min = 0;
    while (n_min < histogram.size() && 10 * (total - exceed[n_min]) < 9 * total)
        ++n_min;
    n_min = std::max<std::uint64_t>(n_min, 1);
    std::uint64_t n_max = 0;
    for (std::size_t n = 0; n < exceed.size(); ++n)
        if (exceed[n] >= 30)
            n_max = n;
    if (n_min >= exceed.size() || exceed[n_min] < 100 || n_max <= n_min)
        fail(ErrorKind::InvalidArgument, "fit_tail_exponent: insufficient tail (need >= 100 samples above the "
                                         "90th percentile and a window of at least two points)");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n_max - n_min + 1);
    std::vector<double> xs, ys;
    for (std::uint64_t n = n_min; n <= n_max; ++n) {
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(static_cast<double>(exceed[n]) / static_cast<double>(total));
        xs.push_back(x);
        ys.push_back(y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double cxx = sxx - sx * sx / m;
    const double slope = (sxy - sx * sy / m) / cxx;
    const double intercept = (sy - slope * sx) / m;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + slope * xs[i]);
        rss += e * e;
    }
    TailFitResult out;
    out.exponent = -slope;
    out.n_min = n_min;
    out.n_max = n_max;
    out.standard_error = m > 2 ? std::sqrt(rss / (m - 2.0) / cxx) : 0.0;
    out.target = target;
    return out;
}

inline TailFitResult fit_tail_exponent(const DegreeStudyResult& study)
{
    return fit_tail_exponent(study.histogram, study.params.tail_exponent());
}

// Coupled lambda scan on free-boundary Palm clouds: each replica keeps one
// cloud and one set of pair variates across the whole grid, so its
// spanning indicator is nondecreasing in lambda pathwise.
inline ThetaScanResult run_theta_scan(const ModelParams& params, const std::vector<double>& lambdas, double side,
                                      std::uint64_t replicas, std::uint64_t seed, unsigned workers = 1,
                                      double epsilon = 0.0)
{
    params.validate();
    if (lambdas.empty() || !std::is_sorted(lambdas.begin(), lambdas.end()))
        fail(ErrorKind::InvalidArgument, "theta scan needs a nonempty ascending lambda grid");
    for (double l : lambdas)
        if (!(l > 0.0))
            fail(ErrorKind::InvalidArgument, "theta scan lambdas must be positive");
    const BoxDomain domain{params.d, side, Boundary::Free};
    domain.validate();

    struct Replica {
        std::vector<std::uint8_t> spanning;
        std::vector<std::uint32_t> origin_size;
    };
    const auto runs = run_indexed(replicas, workers, [&](std::size_t r) {
        const std::uint64_t rs = replica_seed(seed, r);
        const auto cloud = std::make_shared<const PointCloud>(sample_palm_cloud(params, domain, rs));
        Replica rep;
        for (double lambda : lambdas) {
            ModelParams at = params;
            at.lambda = lambda;
            const auto o = detail::palm_outcome(at, cloud, rs, epsilon);
            rep.spanning.push_back(o.spanning);
            rep.origin_size.push_back(o.origin_size);
        }
        return rep;
    });

    ThetaScanResult out;
    out.params = params;
    out.lambdas = lambdas;
    out.replicas = replicas;
    out.side = side;
    out.seed = seed;
    out.epsilon = epsilon;
    out.spanning_freq.assign(lambdas.size(), 0.0);
    out.origin_cluster_mean.assign(lambdas.size(), 0.0);
    for (const auto& rep : runs) {
        for (std::size_t g = 0; g < lambdas.size(); ++g) {
            out.spanning_freq[g] += rep.spanning[g];
            out.origin_cluster_mean[g] += rep.origin_size[g];
        }
        for (std::size_t g = 1; g < lambdas.size(); ++g)
            if (rep.spanning[g] < rep.spanning[g - 1])
                ++out.monotone_violations;
        out.replica_spanning.push_back(rep.spanning);
    }
    for (std::size_t g = 0; g < lambdas.size(); ++g) {
        out.spanning_freq[g] /= static_cast<double>(std::max<std::uint64_t>(replicas, 1));
        out.origin_cluster_mean[g] /= static_cast<double>(std::max<std::uint64_t>(replicas, 1));
    }
    out.monotone = out.monotone_violations == 0;
    return out;
}

// Spanning frequency of the origin's component across box sides at fixed
// lambda, with the trend between consecutive sides.
inline FiniteSizeReport run_finite_size_contrast(const ModelParams& params, const std::vector<double>& sides,
                                                 std::uint64_t replicas, std::uint64_t seed, unsigned workers = 1,
                                                 double epsilon = 0.0)
{
    params.validate();
    if (sides.size() < 2)
        fail(ErrorKind::InvalidArgument, "finite-size contrast needs at least two box sides; trend undefined");
    if (replicas == 0)
        fail(ErrorKind::InvalidArgument, "finite-size contrast needs at least one replica");

    FiniteSizeReport out;
    out.params = params;
    out.regime = analytic::classify_regime(params);
    out.sides = sides;
    out.replicas = replicas;
    out.seed = seed;
    out.epsilon = epsilon;
    for (std::size_t s = 0; s < sides.size(); ++s) {
        const BoxDomain domain{params.d, sides[s], Boundary::Free};
        domain.validate();
        const std::uint64_t base = detail::side_seed(seed, s);
        const auto runs = run_indexed(replicas, workers, [&](std::size_t r) {
            const std::uint64_t rs = replica_seed(base, r);
            auto cloud = std::make_shared<const PointCloud>(sample_palm_cloud(params, domain, rs));
            return detail::palm_outcome(params, std::move(cloud), rs, epsilon);
        });
        double hits = 0.0;
        for (const auto& o : runs)
            hits += o.spanning;
        const double freq = hits / static_cast<double>(replicas);
        out.spanning_freq.push_back(freq);
        out.standard_error.push_back(detail::binomial_se(freq, replicas));
    }
    for (std::size_t s = 1; s < sides.size(); ++s) {
        SideTrend t;
        t.from_side = sides[s - 1];
        t.to_side = sides[s];
        t.difference = out.spanning_freq[s] - out.spanning_freq[s - 1];
        t.joint_se = std::hypot(out.standard_error[s], out.standard_error[s - 1]);
        t.direction = t.difference > 2.0 * t.joint_se ? "increasing"
                      : t.difference < -2.0 * t.joint_se ? "decreasing"
                                                          : "flat";
        if (out.regime == Regime::LambdaCZero && t.direction == "decreasing")
            out.consistent_with_regime = false;
        if (out.regime == Regime::LambdaCInfinite && t.direction == "increasing")
            out.consistent_with_regime = false;
        out.trends.push_back(t);
    }
    return out;
}

// Largest distance between two points of neighbouring cubes of side n.
inline double neighbour_cube_distance(int d, double n, Adjacency adjacency)
{
    return adjacency == Adjacency::Face ? n * std::sqrt(d + 3.0) : n * std::sqrt(4.0 * d);
}

// Site-bond percolation on {0..extent-1}^d: sites open with p_site, bonds
// between open nearest neighbours open with p_bond. Returns the fraction of
// replicas with an open cluster joining the faces x_0 = 0 and x_0 = extent-1.
inline double simulate_site_bond(int d, std::uint32_t extent, double p_site, double p_bond, std::uint64_t replicas,
                                 std::uint64_t seed, unsigned workers = 1)
{
    if (d < 1 || extent == 0)
        fail(ErrorKind::InvalidArgument, "site-bond lattice needs d >= 1 and extent >= 1");
    double sites_d = std::pow(static_cast<double>(extent), d);
    if (sites_d > static_cast<double>(max_particles()))
        fail(ErrorKind::Capacity, "site-bond lattice exceeds the particle budget");
    const auto sites = static_cast<std::uint32_t>(sites_d);

    struct Outcome {
        std::uint8_t spanning = 0;
    };
    const auto runs = run_indexed(replicas, workers, [&](std::size_t r) {
        const CounterRng rng(replica_seed(seed, r));
        std::vector<std::uint8_t> open(sites);
        for (std::uint32_t v = 0; v < sites; ++v)
            open[v] = rng.uniform(streams::kSite, v, 0) < p_site;
        DisjointSet forest(sites);
        std::uint32_t stride = 1;
        for (int k = 0; k < d; ++k) {
            for (std::uint32_t v = 0; v < sites; ++v) {
                if ((v / stride) % extent == extent - 1)
                    continue;
                const std::uint32_t u = v + stride;
                if (open[v] && open[u] && rng.uniform(streams::kBond, v, static_cast<std::uint32_t>(k)) < p_bond)
                    forest.unite(v, u);
            }
            stride *= extent;
        }
        // axis 0 has stride 1: x_0 = v % extent
        std::vector<std::uint8_t> low_root(sites, 0);
        for (std::uint32_t v = 0; v < sites; ++v)
            if (open[v] && v % extent == 0)
                low_root[forest.find(v)] = 1;
        for (std::uint32_t v = 0; v < sites; ++v)
            if (open[v] && v % extent == extent - 1 && low_root[forest.find(v)])
                return Outcome{1};
        return Outcome{0};
    });
    double hits = 0.0;
    for (const auto& o : runs)
        hits += o.spanning;
    return replicas ? hits / static_cast<double>(replicas) : 0.0;
}

// Coarse-graining into cubes of side n: a cube is good with probability
// 1 - exp(-nu n^d), and particles in good neighbouring cubes connect with
// probability at least 1 - exp(-lambda r^-alpha). The induced site-bond
// model is simulated on an extent^d grid.
inline SiteBondReport site_bond_renormalization(const ModelParams& params, double cube_side, std::uint32_t extent,
                                                std::uint64_t seed, std::uint64_t replicas = 100,
                                                Adjacency adjacency = Adjacency::Face, unsigned workers = 1)
{
    params.validate();
    if (!(cube_side > 0.0))
        fail(ErrorKind::InvalidArgument, "cube side n must be positive");
    SiteBondReport out;
    out.params = params;
    out.cube_side = cube_side;
    out.extent = extent;
    out.adjacency = adjacency;
    out.replicas = replicas;
    out.seed = seed;
    out.max_distance = neighbour_cube_distance(params.d, cube_side, adjacency);
    out.p_site = -std::expm1(-params.nu * std::pow(cube_side, params.d));
    out.p_bond = -std::expm1(-params.lambda * std::pow(out.max_distance, -params.alpha));
    out.spanning_freq = simulate_site_bond(params.d, extent, out.p_site, out.p_bond, replicas, seed, workers);
    out.standard_error = detail::binomial_se(out.spanning_freq, replicas);
    return out;
}

} // namespace rcm::experiments
