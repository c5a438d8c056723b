// Acceptance suite: one PASS/FAIL line per criterion. Settings and seeds are
// fixed in advance; a failing criterion is reported, never retried.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rcm/rcm.hpp"
#include "regime_table.hpp"

namespace fs = std::filesystem;
using namespace rcm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const ModelParams kReference{1, 1.0, 1.0, 2.0, 3.0};

Outcome closed_form_vs_quadrature()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = validation::integral_vs_quadrature(50, 2024, 1e-8);
    const double secs = seconds_since(t0);
    return {r.pass && r.cases == 50 && secs < 10.0,
            fmt("50 tuples, worst relative error %.2e (tol 1e-8), %.2f s (limit 10 s)", r.worst, secs)};
}

Outcome pmf_dual_route()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = validation::pmf_dual_route(kReference, 50, 1e-8);
    const double secs = seconds_since(t0);
    return {r.pass && secs < 30.0,
            fmt("k = 0..50, worst absolute difference %.2e (tol 1e-8), %.2f s (limit 30 s)", r.worst, secs)};
}

Outcome mean_degree_study()
{
    const auto s = experiments::run_degree_study(kReference, 200.0, 10'000, 3001);
    const double target = 5.1046672;
    const double z = (s.sample_mean - target) / s.standard_error;
    return {std::abs(z) <= 3.0, fmt("L=200 torus, R=1e4: mean %.4f, SE %.4f, target %.7f, |z| = %.2f (limit 3)",
                                    s.sample_mean, s.standard_error, target, std::abs(z))};
}

Outcome tail_exponent()
{
    const auto s = experiments::run_degree_study(kReference, 500.0, 100'000, 4001);
    try {
        const auto fit = experiments::fit_tail_exponent(s);
        return {fit.exponent >= 5.1 && fit.exponent <= 6.9,
                fmt("L=500, R=1e5: slope %.3f +- %.3f over n in [%llu, %llu] (bracket [5.1, 6.9], target 6)",
                    fit.exponent, fit.standard_error, (unsigned long long)fit.n_min, (unsigned long long)fit.n_max)};
    } catch (const Error& e) {
        return {false, std::string("tail fit failed: ") + e.what()};
    }
}

Outcome coupling_monotonicity()
{
    // d=2, alpha=3, tau=3, free box of side 16, lambda from 0.1 to 51.2
    const ModelParams base{2, 1.0, 1.0, 3.0, 3.0};
    const BoxDomain dom{2, 16.0, Boundary::Free};
    std::vector<double> grid;
    for (int g = 0; g < 10; ++g)
        grid.push_back(0.1 * std::pow(2.0, g));
    std::uint64_t edge_violations = 0, span_violations = 0, size_violations = 0;
    std::uint64_t spanning_total = 0;
    for (std::uint64_t r = 0; r < 100; ++r) {
        const std::uint64_t rs = replica_seed(5001, r);
        const auto cloud = std::make_shared<const PointCloud>(sample_palm_cloud(base, dom, rs));
        std::vector<Edge> prev_edges;
        bool prev_span = false;
        std::uint32_t prev_size = 0;
        for (double lambda : grid) {
            ModelParams p = base;
            p.lambda = lambda;
            const Graph g = build_graph(p, cloud, rs);
            const auto stats = components(g);
            if (!std::includes(g.edges().begin(), g.edges().end(), prev_edges.begin(), prev_edges.end()))
                ++edge_violations;
            if (prev_span && !stats.spanning)
                ++span_violations;
            if (*stats.origin_cluster_size < prev_size)
                ++size_violations;
            spanning_total += stats.spanning;
            prev_edges = g.edges();
            prev_span = stats.spanning;
            prev_size = *stats.origin_cluster_size;
        }
    }
    const auto scan = experiments::run_theta_scan(base, grid, 16.0, 100, 5001);
    const bool ok = edge_violations == 0 && span_violations == 0 && size_violations == 0 && scan.monotone;
    return {ok, fmt("100 replicas x 10 lambdas: %llu edge-inclusion, %llu spanning, %llu origin-size exceptions; "
                    "scan violations %llu; spanning freq %.2f -> %.2f",
                    (unsigned long long)edge_violations, (unsigned long long)span_violations,
                    (unsigned long long)size_violations, (unsigned long long)scan.monotone_violations,
                    scan.spanning_freq.front(), scan.spanning_freq.back())};
}

Outcome regime_table()
{
    std::array<int, 5> seen{};
    int mismatches = 0;
    for (const auto& c : kRegimeTable) {
        const Regime got = analytic::classify_regime(ModelParams{c.d, 1.0, 1.0, c.alpha, c.tau});
        mismatches += got != c.expected;
        ++seen[static_cast<int>(c.expected)];
    }
    const bool all_labels = std::all_of(seen.begin(), seen.end(), [](int n) { return n > 0; });
    return {mismatches == 0 && all_labels,
            fmt("%zu tuples, %d mismatches, all five labels covered: %s", kRegimeTable.size(), mismatches,
                all_labels ? "yes" : "no")};
}

Outcome union_find_vs_bfs()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = validation::union_find_vs_bfs(500, 7);
    const double secs = seconds_since(t0);
    return {r.pass && r.cases == 500 && secs < 10.0,
            fmt("500 graphs (n <= 200), %.0f mismatching partitions, %.2f s (limit 10 s)", r.worst, secs)};
}

Outcome finite_size_zero_regime()
{
    // d=2, alpha=3, tau=1: tau alpha = 3 < 4
    const ModelParams p{2, 1.0, 3e-3, 3.0, 1.0};
    const auto rep = experiments::run_finite_size_contrast(p, {32.0, 64.0}, 300, 8001, 1, 1e-9);
    const auto& t = rep.trends.at(0);
    return {rep.regime == Regime::LambdaCZero && t.difference >= -2.0 * t.joint_se,
            fmt("lambda=0.003, R=300: freq(32) = %.3f, freq(64) = %.3f, difference %+.3f, 2 joint SE = %.3f",
                rep.spanning_freq[0], rep.spanning_freq[1], t.difference, 2.0 * t.joint_se)};
}

Outcome finite_size_infinite_regime()
{
    // d=1, alpha=3, tau=2: min{alpha, tau alpha} = 3 > 2
    const ModelParams p{1, 1.0, 5.0, 3.0, 2.0};
    const auto rep = experiments::run_finite_size_contrast(p, {256.0, 1024.0}, 1000, 8002, 1, 1e-9);
    const auto& t = rep.trends.at(0);
    return {rep.regime == Regime::LambdaCInfinite && t.difference <= 2.0 * t.joint_se,
            fmt("lambda=5, R=1000: freq(256) = %.3f, freq(1024) = %.3f, difference %+.3f, 2 joint SE = %.3f",
                rep.spanning_freq[0], rep.spanning_freq[1], t.difference, 2.0 * t.joint_se)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"degree", "degree --R 2000 --L 100 --seed 9001"},
        {"theta", "theta --d 2 --alpha 3 --tau 3 --L 12 --R 100 --lambdas 0.25,1,4 --epsilon 1e-9 --seed 9002"},
        {"fss", "fss --d 1 --alpha 3 --tau 2 --lambda 5 --sides 32,64 --R 200 --seed 9003"},
        {"sitebond", "sitebond --d 2 --n 1 --extent 16 --R 200 --seed 9004"},
    };
    const fs::path root = fs::temp_directory_path() / "rcm_acceptance_determinism";
    int compared = 0, differing = 0, failed = 0;
    for (const auto& [name, args] : runs) {
        std::vector<fs::path> dirs;
        for (const char* variant : {"w1", "w1_again", "w4"}) {
            const fs::path dir = root / (name + "_" + variant);
            fs::remove_all(dir);
            fs::create_directories(dir);
            const std::string workers = std::string(variant) == "w4" ? "4" : "1";
            const std::string cmd = std::string(RCM_CLI_PATH) + " " + args + " --workers " + workers + " --out " +
                                    dir.string() + " >/dev/null 2>&1";
            failed += std::system(cmd.c_str()) != 0;
            dirs.push_back(dir);
        }
        for (const std::string& file : {name + ".csv", std::string("summary.json")})
            for (std::size_t k = 1; k < dirs.size(); ++k) {
                ++compared;
                const std::string a = slurp(dirs[0] / file);
                differing += a.empty() || a != slurp(dirs[k] / file);
            }
    }
    return {failed == 0 && differing == 0,
            fmt("4 commands x (workers 1, rerun, workers 4): %d file comparisons, %d differ, %d runs failed", compared,
                differing, failed)};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"C1 closed form vs quadrature oracle", closed_form_vs_quadrature},
        {"C2 dual-route degree pmf", pmf_dual_route},
        {"C3 mean degree (Monte Carlo)", mean_degree_study},
        {"C4 tail exponent", tail_exponent},
        {"C5 exact coupling monotonicity", coupling_monotonicity},
        {"C6 regime classifier truth table", regime_table},
        {"C7 union-find vs BFS", union_find_vs_bfs},
        {"C8(i) finite-size trend, lambda_c = 0 regime", finite_size_zero_regime},
        {"C8(ii) finite-size trend, lambda_c = inf regime", finite_size_infinite_regime},
        {"C9 byte-identical outputs across reruns and worker counts", determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
