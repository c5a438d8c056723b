#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "analytic.hpp"
#include "cloud.hpp"
#include "graph.hpp"
#include "oracle.hpp"
#include "philox.hpp"

// Cross-checks of the closed forms and the clustering against the
// independent oracles. Used by `rcm validate` and the acceptance suite.
namespace rcm::validation {

struct CheckResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;     // largest observed discrepancy
    double tolerance = 0.0;
    std::uint64_t cases = 0;
};

// Valid (min{alpha, tau alpha} > d) parameter tuples with nu, lambda,
// alpha, tau drawn uniformly from [0.1, 10] and d from {1, 2, 3}.
inline std::vector<ModelParams> random_valid_params(std::size_t count, std::uint64_t seed)
{
    const CounterRng rng(seed);
    constexpr std::uint32_t stream = stream_id("validation-params");
    std::vector<ModelParams> out;
    for (std::uint32_t draw = 0; out.size() < count; ++draw) {
        auto u = [&](std::uint32_t slot) { return 0.1 + 9.9 * rng.uniform(stream, draw, 0, slot); };
        ModelParams p;
        p.d = 1 + static_cast<int>(rng.uniform(stream, draw, 0, 4) * 3.0);
        p.nu = u(0);
        p.lambda = u(1);
        p.alpha = u(2);
        p.tau = u(3);
        if (finite_degree(p))
            out.push_back(p);
    }
    return out;
}

// Closed-form I(w) against radial + partner-weight quadrature.
inline CheckResult integral_vs_quadrature(std::size_t tuples = 50, std::uint64_t seed = 2024, double tol = 1e-8)
{
    CheckResult r{"closed_form_vs_quadrature", true, 0.0, tol, 0};
    const CounterRng rng(seed);
    const auto params = random_valid_params(tuples, seed);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double w = std::exp(std::log(100.0) * rng.uniform(stream_id("validation-w"), static_cast<std::uint32_t>(i), 0));
        const double closed = analytic::integral_closed_form(params[i], w);
        const double quad = oracle::quadrature_integral(params[i], w);
        const double rel = std::abs(closed - quad) / std::abs(quad);
        r.worst = std::max(r.worst, rel);
        ++r.cases;
    }
    r.pass = r.worst <= tol;
    return r;
}

// degree_pmf (incomplete-gamma route) against the Poisson-mixture oracle.
inline CheckResult pmf_dual_route(const ModelParams& p = {1, 1.0, 1.0, 2.0, 3.0}, long long k_max = 50,
                                  double tol = 1e-8)
{
    CheckResult r{"pmf_dual_route", true, 0.0, tol, 0};
    for (long long k = 0; k <= k_max; ++k) {
        const double diff = std::abs(analytic::degree_pmf(p, k) - oracle::mixing_pmf_oracle(p, k));
        r.worst = std::max(r.worst, diff);
        ++r.cases;
    }
    r.pass = r.worst <= tol;
    return r;
}

// Union-find partitions of random model graphs against BFS labelling.
inline CheckResult union_find_vs_bfs(std::size_t graphs = 500, std::uint64_t seed = 7)
{
    CheckResult r{"union_find_vs_bfs", true, 0.0, 0.0, 0};
    const CounterRng rng(seed);
    constexpr std::uint32_t stream = stream_id("validation-graphs");
    for (std::uint32_t g = 0; r.cases < graphs; ++g) {
        ModelParams p;
        p.d = 1 + static_cast<int>(rng.uniform(stream, g, 0, 0) * 2.0);
        p.alpha = p.d + 0.5 + 2.0 * rng.uniform(stream, g, 0, 1);
        p.tau = 0.8 + 2.0 * rng.uniform(stream, g, 0, 2);
        p.lambda = 0.05 + 1.5 * rng.uniform(stream, g, 0, 3);
        p.nu = 1.0;
        // expected count <= ~150 keeps n <= 200 with overwhelming probability
        const double side = std::pow(20.0 + 130.0 * rng.uniform(stream, g, 0, 4), 1.0 / p.d);
        const BoxDomain dom{p.d, side, rng.uniform(stream, g, 0, 5) < 0.5 ? Boundary::Torus : Boundary::Free};
        const std::uint64_t s = rng.bits64(stream, g, 1);
        const Graph graph = build_graph(p, sample_cloud(p, dom, s), s);
        if (graph.size() > 200)
            continue;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        for (const auto& e : graph.edges())
            edges.emplace_back(e.i, e.j);
        const bool same = graph.component_labels() == oracle::bfs_components(edges, graph.size());
        if (!same) {
            r.pass = false;
            r.worst += 1.0;
        }
        ++r.cases;
    }
    return r;
}

} // namespace rcm::validation
