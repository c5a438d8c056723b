#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include <json.hpp>

#include "analytic.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "philox.hpp"

// JSON documents emitted by the CLI. Everything here is a function of the
// effective configuration and the results, so reruns are byte-identical;
// wall time and worker count go to a separate timing document.
namespace rcm::report {

using nlohmann::json;

inline json params_json(const ModelParams& p)
{
    return {{"d", p.d}, {"nu", p.nu}, {"lambda", p.lambda}, {"alpha", p.alpha}, {"tau", p.tau}};
}

// Effective configuration without the output location and worker count,
// which do not affect results.
inline json config_json(const config::RunConfig& c)
{
    json j = params_json(c.params);
    j["L"] = c.side ? json(*c.side) : json(nullptr);
    j["boundary"] = c.boundary ? json(std::string(to_string(*c.boundary))) : json(nullptr);
    j["R"] = c.replicas;
    j["lambdas"] = c.lambdas;
    j["sides"] = c.sides;
    j["epsilon"] = c.epsilon;
    j["n"] = c.cube_side;
    j["extent"] = c.extent;
    j["adjacency"] = std::string(experiments::to_string(c.adjacency));
    j["kmax"] = c.kmax;
    j["seed"] = c.seed;
    j["abs_tol"] = c.abs_tol;
    j["rel_tol"] = c.rel_tol;
    j["max_subdivisions"] = c.max_subdivisions;
    return j;
}

// 40 hex digits derived from the command and its effective configuration.
inline std::string run_id(std::string_view command, const json& config)
{
    const std::string text = std::string(command) + '\n' + config.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    const CounterRng rng(h);
    const auto a = rng.block(stream_id("run-id"), 0, 0);
    const auto b = rng.block(stream_id("run-id"), 1, 0);
    char buf[41];
    std::snprintf(buf, sizeof buf, "%08x%08x%08x%08x%08x", a[0], a[1], a[2], a[3], b[0]);
    return buf;
}

inline json summary(std::string_view command, const config::RunConfig& c, json results)
{
    json j;
    const json cfg = config_json(c);
    j["command"] = std::string(command);
    j["run_id"] = run_id(command, cfg);
    j["config"] = cfg;
    j["seed"] = c.seed;
    j["results"] = std::move(results);
    return j;
}

inline json analytic_json(const analytic::AnalyticReport& r, std::uint32_t kmax, const quad::Tolerance& tol = {})
{
    json j;
    j["params"] = params_json(r.params);
    j["v_d"] = r.v_d;
    j["regime"] = std::string(to_string(r.regime));
    j["finite_degree"] = r.regime != Regime::InfiniteDegree;
    j["tail_exponent"] = r.params.tail_exponent();
    if (r.regime != Regime::InfiniteDegree) {
        j["log_c1"] = *r.log_c1;
        if (std::isfinite(*r.c1))
            j["c1"] = *r.c1;
        j["mean_degree"] = *r.mean_degree;
        j["integral_at_1"] = r.integral_at(1.0);
        json pmf = json::array();
        for (std::uint32_t k = 0; k <= kmax; ++k)
            pmf.push_back(analytic::degree_pmf(r.params, k, tol));
        j["pmf"] = pmf;
    }
    return j;
}

inline json degree_json(const experiments::DegreeStudyResult& s)
{
    json j;
    j["L"] = s.side;
    j["R"] = s.replicas;
    j["sample_mean"] = s.sample_mean;
    j["standard_error"] = s.standard_error;
    j["tv_distance"] = s.tv_distance;
    j["max_degree"] = s.histogram.empty() ? 0 : s.histogram.size() - 1;
    j["analytic_mean_degree"] = analytic::mean_degree(s.params);
    try {
        const auto fit = experiments::fit_tail_exponent(s);
        j["tail_fit"] = {{"exponent", fit.exponent},
                         {"standard_error", fit.standard_error},
                         {"n_min", fit.n_min},
                         {"n_max", fit.n_max},
                         {"target", fit.target}};
    } catch (const Error& e) {
        j["tail_fit"] = {{"error", e.what()}};
    }
    return j;
}

inline json theta_json(const experiments::ThetaScanResult& s)
{
    return {{"L", s.side},
            {"R", s.replicas},
            {"lambdas", s.lambdas},
            {"spanning_freq", s.spanning_freq},
            {"origin_cluster_mean", s.origin_cluster_mean},
            {"monotone", s.monotone},
            {"monotone_violations", s.monotone_violations},
            {"epsilon", s.epsilon}};
}

inline json fss_json(const experiments::FiniteSizeReport& r)
{
    json trends = json::array();
    for (const auto& t : r.trends)
        trends.push_back({{"from_L", t.from_side},
                          {"to_L", t.to_side},
                          {"difference", t.difference},
                          {"joint_se", t.joint_se},
                          {"direction", t.direction}});
    return {{"regime", std::string(to_string(r.regime))},
            {"lambda", r.params.lambda},
            {"sides", r.sides},
            {"spanning_freq", r.spanning_freq},
            {"standard_error", r.standard_error},
            {"R", r.replicas},
            {"trends", trends},
            {"consistent_with_regime", r.consistent_with_regime}};
}

inline json sitebond_json(const experiments::SiteBondReport& r)
{
    return {{"n", r.cube_side},
            {"extent", r.extent},
            {"adjacency", std::string(experiments::to_string(r.adjacency))},
            {"r", r.max_distance},
            {"p_site", r.p_site},
            {"p_bond", r.p_bond},
            {"spanning_freq", r.spanning_freq},
            {"standard_error", r.standard_error},
            {"R", r.replicas}};
}

inline json error_json(ErrorKind kind, std::string_view message)
{
    return {{"error", {{"kind", std::string(to_string(kind))}, {"message", std::string(message)}}}};
}

} // namespace rcm::report
