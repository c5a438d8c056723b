#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "cloud.hpp"
#include "disjoint_set.hpp"
#include "error.hpp"
#include "params.hpp"
#include "philox.hpp"

namespace rcm {

// Pair budget for the exact O(n^2) builder, overridable through RCM_MAX_PAIRS.
inline std::uint64_t max_pairs()
{
    if (const char* env = std::getenv("RCM_MAX_PAIRS")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return v;
    }
    return 20'000'000'000ull;
}

// lambda wx wy r^-alpha; the connection probability is 1 - exp(-strength).
inline double connection_strength(const ModelParams& p, double wx, double wy, double r)
{
    if (!(r > 0.0))
        fail(ErrorKind::Domain, "degenerate pair: two particles at distance 0");
    return p.lambda * wx * wy * std::pow(r, -p.alpha);
}

inline double connection_probability(const ModelParams& p, double wx, double wy, double r)
{
    if (!(wx >= 1.0 && wy >= 1.0))
        fail(ErrorKind::Domain, "weights must be >= 1");
    return -std::expm1(-connection_strength(p, wx, wy, r));
}

// U_ij for the unordered pair {i, j}; the same variate is used at every
// lambda, which couples graphs monotonically in lambda.
inline double pair_uniform(std::uint64_t seed, std::uint32_t i, std::uint32_t j)
{
    if (i > j)
        std::swap(i, j);
    return CounterRng(seed).uniform(streams::kEdge, i, j);
}

struct Edge {
    std::uint32_t i;
    std::uint32_t j;
    auto operator<=>(const Edge&) const = default;
};

struct BuildStats {
    std::uint64_t tested_pairs = 0;
    std::uint64_t skipped_pairs = 0;
    // epsilon * skipped_pairs bounds the expected number of missed edges.
    double missed_edge_bound = 0.0;
};

struct ClusterStats {
    std::vector<std::uint32_t> sizes; // descending
    std::optional<std::uint32_t> origin_cluster_size;
    bool spanning = false;
};

class Graph {
public:
    Graph(ModelParams params, std::shared_ptr<const PointCloud> cloud, std::vector<Edge> edges, BuildStats stats)
        : params_(params), cloud_(std::move(cloud)), edges_(std::move(edges)), stats_(stats),
          degree_(cloud_->size(), 0), root_(cloud_->size())
    {
        std::sort(edges_.begin(), edges_.end());
        DisjointSet forest(cloud_->size());
        for (const Edge& e : edges_) {
            ++degree_[e.i];
            ++degree_[e.j];
            forest.unite(e.i, e.j);
        }
        for (std::uint32_t v = 0; v < root_.size(); ++v)
            root_[v] = forest.find(v);
    }

    const ModelParams& params() const noexcept { return params_; }
    const PointCloud& cloud() const noexcept { return *cloud_; }
    std::shared_ptr<const PointCloud> cloud_ref() const noexcept { return cloud_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const BuildStats& stats() const noexcept { return stats_; }
    std::size_t size() const noexcept { return degree_.size(); }

    std::uint32_t degree_of(std::size_t id) const
    {
        if (id >= degree_.size())
            fail(ErrorKind::InvalidArgument, "unknown particle id " + std::to_string(id));
        return degree_[id];
    }

    // Root of id's tree in the flattened disjoint-set forest (not canonical).
    std::uint32_t find(std::uint32_t id) const { return root_[id]; }

    // Component label = smallest id in the component.
    std::vector<std::uint32_t> component_labels() const
    {
        const std::size_t n = size();
        std::vector<std::uint32_t> min_of_root(n, std::numeric_limits<std::uint32_t>::max());
        std::vector<std::uint32_t> labels(n);
        for (std::uint32_t v = 0; v < n; ++v) {
            auto& m = min_of_root[find(v)];
            m = std::min(m, v);
        }
        for (std::uint32_t v = 0; v < n; ++v)
            labels[v] = min_of_root[find(v)];
        return labels;
    }

private:
    ModelParams params_;
    std::shared_ptr<const PointCloud> cloud_;
    std::vector<Edge> edges_;
    BuildStats stats_;
    std::vector<std::uint32_t> degree_;
    std::vector<std::uint32_t> root_;
};

namespace detail {

inline void check_graph_inputs(const ModelParams& params, const PointCloud& cloud)
{
    params.validate();
    if (params.d != cloud.dim())
        fail(ErrorKind::InvalidArgument, "model dimension and cloud dimension differ");
}

inline std::uint64_t pair_count(std::size_t n) { return n < 2 ? 0 : std::uint64_t{n} * (n - 1) / 2; }

inline void check_pair_budget(std::size_t n)
{
    if (pair_count(n) > max_pairs())
        fail(ErrorKind::Capacity, "pair count " + std::to_string(pair_count(n)) + " exceeds the pair budget " +
                                      std::to_string(max_pairs()));
}

} // namespace detail

// Reference O(n^2) construction: {i, j} is an edge iff U_ij < p_ij.
inline Graph build_graph(const ModelParams& params, std::shared_ptr<const PointCloud> cloud, std::uint64_t seed)
{
    detail::check_graph_inputs(params, *cloud);
    const std::size_t n = cloud->size();
    detail::check_pair_budget(n);
    const CounterRng rng(seed);
    std::vector<Edge> edges;
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto xi = cloud->position(i);
        const double wi = cloud->weight(i);
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const double r = distance(cloud->domain(), xi, cloud->position(j));
            const double p = -std::expm1(-connection_strength(params, wi, cloud->weight(j), r));
            if (rng.uniform(streams::kEdge, i, j) < p)
                edges.push_back({i, j});
        }
    }
    return Graph(params, std::move(cloud), std::move(edges), BuildStats{detail::pair_count(n), 0, 0.0});
}

inline Graph build_graph(const ModelParams& params, const PointCloud& cloud, std::uint64_t seed)
{
    return build_graph(params, std::make_shared<const PointCloud>(cloud), seed);
}

namespace detail {

// Uniform grid over the box with per-cell maximum weight.
struct CellGrid {
    int d = 1;
    std::uint32_t per_dim = 1;
    double cell = 1.0;
    std::vector<std::vector<std::uint32_t>> members;
    std::vector<double> max_weight;

    CellGrid(const ModelParams& params, const PointCloud& cloud)
    {
        const BoxDomain& dom = cloud.domain();
        d = dom.d;
        // About two particles per cell on average.
        const double target = std::pow(2.0 / params.nu, 1.0 / d);
        const double want = std::floor(dom.side / target);
        const double cap = std::floor(std::pow(std::max<double>(cloud.size(), 1.0), 1.0 / d)) + 1.0;
        per_dim = static_cast<std::uint32_t>(std::clamp(want, 1.0, std::min(cap, 1e6)));
        cell = dom.side / per_dim;
        std::size_t total = 1;
        for (int k = 0; k < d; ++k)
            total *= per_dim;
        members.resize(total);
        max_weight.assign(total, 0.0);
        const double half = 0.5 * dom.side;
        for (std::uint32_t i = 0; i < cloud.size(); ++i) {
            const auto x = cloud.position(i);
            std::size_t index = 0;
            for (int k = d - 1; k >= 0; --k) {
                auto c = static_cast<std::int64_t>(std::floor((x[k] + half) / cell));
                c = std::clamp<std::int64_t>(c, 0, per_dim - 1);
                index = index * per_dim + static_cast<std::size_t>(c);
            }
            members[index].push_back(i);
            max_weight[index] = std::max(max_weight[index], cloud.weight(i));
        }
    }

    std::vector<std::uint32_t> coordinates(std::size_t index) const
    {
        std::vector<std::uint32_t> c(d);
        for (int k = 0; k < d; ++k) {
            c[k] = static_cast<std::uint32_t>(index % per_dim);
            index /= per_dim;
        }
        return c;
    }

    // Lower bound on the distance between any two points of the two cells.
    double gap(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b, bool torus) const
    {
        double sum = 0.0;
        for (int k = 0; k < d; ++k) {
            std::int64_t delta = std::abs(static_cast<std::int64_t>(a[k]) - static_cast<std::int64_t>(b[k]));
            if (torus)
                delta = std::min<std::int64_t>(delta, per_dim - delta);
            const double g = static_cast<double>(std::max<std::int64_t>(delta - 1, 0)) * cell;
            sum += g * g;
        }
        return std::sqrt(sum);
    }
};

} // namespace detail

// Cell-grid construction. Pairs with lambda wx wy r^-alpha < epsilon are
// skipped without drawing; whole cell pairs are skipped when the bound
// built from the cell weight maxima and the cell gap is below epsilon.
// With epsilon = 0 the edge set equals build_graph's.
inline Graph build_graph_fast(const ModelParams& params, std::shared_ptr<const PointCloud> cloud,
                              std::uint64_t seed, double epsilon)
{
    detail::check_graph_inputs(params, *cloud);
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        fail(ErrorKind::InvalidArgument, "epsilon must lie in [0, 1)");
    const std::size_t n = cloud->size();
    const BoxDomain& dom = cloud->domain();
    const bool torus = dom.boundary == Boundary::Torus;
    const CounterRng rng(seed);
    const detail::CellGrid grid(params, *cloud);
    const double global_max = n ? *std::max_element(cloud->weights().begin(), cloud->weights().end()) : 1.0;

    std::vector<Edge> edges;
    std::uint64_t tested = 0;
    auto try_pair = [&](std::uint32_t i, std::uint32_t j) {
        if (i > j)
            std::swap(i, j);
        const double r = distance(dom, cloud->position(i), cloud->position(j));
        const double strength = connection_strength(params, cloud->weight(i), cloud->weight(j), r);
        if (strength < epsilon)
            return;
        ++tested;
        if (rng.uniform(streams::kEdge, i, j) < -std::expm1(-strength))
            edges.push_back({i, j});
    };

    const std::size_t cells = grid.members.size();
    const auto per_dim = static_cast<std::int64_t>(grid.per_dim);
    std::vector<std::vector<std::uint32_t>> axis(grid.d);
    for (std::size_t a = 0; a < cells; ++a) {
        if (grid.members[a].empty())
            continue;
        const auto ca = grid.coordinates(a);
        // Reach of cell a against the heaviest particle anywhere.
        std::int64_t k_reach = per_dim;
        if (epsilon > 0.0) {
            const double reach = std::pow(params.lambda * grid.max_weight[a] * global_max / epsilon, 1.0 / params.alpha);
            k_reach = static_cast<std::int64_t>(std::min(std::ceil(reach / grid.cell) + 1.0, static_cast<double>(per_dim)));
        }
        for (int k = 0; k < grid.d; ++k) {
            axis[k].clear();
            if (2 * k_reach + 1 >= per_dim) {
                for (std::int64_t c = 0; c < per_dim; ++c)
                    axis[k].push_back(static_cast<std::uint32_t>(c));
            } else {
                for (std::int64_t c = ca[k] - k_reach; c <= ca[k] + k_reach; ++c) {
                    if (torus)
                        axis[k].push_back(static_cast<std::uint32_t>(((c % per_dim) + per_dim) % per_dim));
                    else if (c >= 0 && c < per_dim)
                        axis[k].push_back(static_cast<std::uint32_t>(c));
                }
            }
        }
        // Odometer over the candidate cells.
        std::vector<std::size_t> digit(grid.d, 0);
        std::vector<std::uint32_t> cb(grid.d);
        bool any = true;
        for (int k = 0; k < grid.d; ++k)
            any = any && !axis[k].empty();
        while (any) {
            std::size_t b = 0;
            for (int k = grid.d - 1; k >= 0; --k) {
                cb[k] = axis[k][digit[k]];
                b = b * grid.per_dim + cb[k];
            }
            if (b >= a && !grid.members[b].empty()) {
                const double gap = grid.gap(ca, cb, torus);
                const bool reachable = epsilon == 0.0 || gap == 0.0 ||
                                       params.lambda * grid.max_weight[a] * grid.max_weight[b] *
                                               std::pow(gap, -params.alpha) >= epsilon;
                if (reachable) {
                    const auto& ma = grid.members[a];
                    const auto& mb = grid.members[b];
                    if (a == b) {
                        for (std::size_t x = 0; x < ma.size(); ++x)
                            for (std::size_t y = x + 1; y < ma.size(); ++y)
                                try_pair(ma[x], ma[y]);
                    } else {
                        for (std::uint32_t i : ma)
                            for (std::uint32_t j : mb)
                                try_pair(i, j);
                    }
                }
            }
            int k = 0;
            while (k < grid.d && ++digit[k] == axis[k].size()) {
                digit[k] = 0;
                ++k;
            }
            if (k == grid.d)
                break;
        }
    }

    BuildStats stats;
    stats.tested_pairs = tested;
    stats.skipped_pairs = detail::pair_count(n) - tested;
    stats.missed_edge_bound = epsilon * static_cast<double>(stats.skipped_pairs);
    return Graph(params, std::move(cloud), std::move(edges), stats);
}

inline Graph build_graph_fast(const ModelParams& params, const PointCloud& cloud, std::uint64_t seed, double epsilon)
{
    return build_graph_fast(params, std::make_shared<const PointCloud>(cloud), seed, epsilon);
}

// Degree of particle 0 without building the whole graph; same pair
// variates as build_graph.
inline std::uint32_t palm_degree(const ModelParams& params, const PointCloud& cloud, std::uint64_t seed)
{
    detail::check_graph_inputs(params, cloud);
    if (cloud.empty())
        fail(ErrorKind::InvalidArgument, "palm_degree on an empty cloud");
    const CounterRng rng(seed);
    const auto origin = cloud.position(0);
    const double w0 = cloud.weight(0);
    std::uint32_t degree = 0;
    for (std::uint32_t j = 1; j < cloud.size(); ++j) {
        const double r = distance(cloud.domain(), origin, cloud.position(j));
        const double p = -std::expm1(-connection_strength(params, w0, cloud.weight(j), r));
        if (rng.uniform(streams::kEdge, 0, j) < p)
            ++degree;
    }
    return degree;
}

inline std::uint32_t degree_of(const Graph& g, std::size_t id) { return g.degree_of(id); }

// Width of the face bands used by the spanning rule: one mean
// inter-particle spacing, nu^{-1/d}.
inline double face_band(const ModelParams& params) { return std::pow(params.nu, -1.0 / params.d); }

// Component sizes, the origin's component (palm clouds), and whether the
// origin's component (any component for non-palm clouds) touches two
// opposite faces of a free-boundary box.
inline ClusterStats components(const Graph& g)
{
    ClusterStats out;
    const std::size_t n = g.size();
    const auto labels = g.component_labels();
    std::vector<std::uint32_t> count(n, 0);
    for (auto l : labels)
        ++count[l];
    for (std::uint32_t v = 0; v < n; ++v)
        if (count[v] > 0)
            out.sizes.push_back(count[v]);
    std::sort(out.sizes.begin(), out.sizes.end(), std::greater<>());

    const PointCloud& cloud = g.cloud();
    if (cloud.palm() && n > 0)
        out.origin_cluster_size = count[labels[0]];

    if (cloud.domain().boundary == Boundary::Free && n > 0) {
        const int d = cloud.dim();
        const double half = 0.5 * cloud.domain().side;
        const double band = face_band(g.params());
        // Bits per component: 2k = touches low face of axis k, 2k+1 = high face.
        std::vector<std::vector<bool>> touch(n);
        for (std::uint32_t v = 0; v < n; ++v) {
            const auto x = cloud.position(v);
            for (int k = 0; k < d; ++k) {
                const bool low = x[k] < -half + band;
                const bool high = x[k] >= half - band;
                if (!low && !high)
                    continue;
                auto& t = touch[labels[v]];
                if (t.empty())
                    t.assign(2 * static_cast<std::size_t>(d), false);
                if (low)
                    t[2 * k] = true;
                if (high)
                    t[2 * k + 1] = true;
            }
        }
        auto spans = [&](std::uint32_t label) {
            const auto& t = touch[label];
            for (int k = 0; k < d && !t.empty(); ++k)
                if (t[2 * k] && t[2 * k + 1])
                    return true;
            return false;
        };
        if (cloud.palm()) {
            out.spanning = spans(labels[0]);
        } else {
            for (std::uint32_t v = 0; v < n && !out.spanning; ++v)
                if (labels[v] == v)
                    out.spanning = spans(v);
        }
    }
    return out;
}

} // namespace rcm
