#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "experiments.hpp"
#include "params.hpp"

// Run configuration: flat "key = value" text, one entry per line, '#'
// starts a comment. Every key has a long command-line flag of the same name.
namespace rcm::config {

struct RunConfig {
    ModelParams params;
    std::optional<double> side;              // L; per-command default when absent
    std::optional<Boundary> boundary;        // per-command default when absent
    std::uint64_t replicas = 1000;           // R
    std::vector<double> lambdas;             // theta grid
    std::vector<double> sides;               // fss box sides
    double epsilon = 0.0;                    // pruning cutoff, 0 = exact
    double cube_side = 1.0;                  // n (site-bond)
    std::uint32_t extent = 32;               // site-bond grid extent
    experiments::Adjacency adjacency = experiments::Adjacency::Face;
    std::uint32_t kmax = 50;                 // pmf values printed by `analytic`
    std::uint64_t seed = 1;
    std::string out = ".";
    unsigned workers = 1;
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_subdivisions = 2000;
};

inline const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys = {
        "d",       "nu",     "lambda",    "alpha",     "tau",  "L",    "boundary", "R",
        "lambdas", "sides",  "epsilon",   "n",         "extent", "adjacency", "kmax", "seed",
        "out",     "workers", "abs_tol",  "rel_tol",   "max_subdivisions",
    };
    return keys;
}

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] inline void type_mismatch(const std::string& key, const std::string& expected, const std::string& value)
{
    fail(ErrorKind::Config, "type mismatch for '" + key + "': expected " + expected + ", got '" + value + "'");
}

inline double to_double(const std::string& key, const std::string& value)
{
    double v = 0.0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        type_mismatch(key, "a number", value);
    return v;
}

template <class Int>
Int to_integer(const std::string& key, const std::string& value)
{
    Int v{};
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        type_mismatch(key, "an integer", value);
    return v;
}

inline std::vector<double> to_list(const std::string& key, const std::string& value)
{
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(to_double(key, trim(item)));
    if (out.empty())
        type_mismatch(key, "a comma-separated list of numbers", value);
    return out;
}

[[noreturn]] inline void violation(const std::string& key, const std::string& rule)
{
    fail(ErrorKind::Config, "constraint violation for '" + key + "': " + rule);
}

} // namespace detail

// Sets one entry. Unknown keys and malformed values are rejected by name.
inline void apply_entry(RunConfig& c, const std::string& key, const std::string& raw)
{
    using namespace detail;
    const std::string value = trim(raw);
    if (key == "d")
        c.params.d = to_integer<int>(key, value);
    else if (key == "nu")
        c.params.nu = to_double(key, value);
    else if (key == "lambda")
        c.params.lambda = to_double(key, value);
    else if (key == "alpha")
        c.params.alpha = to_double(key, value);
    else if (key == "tau")
        c.params.tau = to_double(key, value);
    else if (key == "L")
        c.side = to_double(key, value);
    else if (key == "boundary") {
        if (value != "torus" && value != "free")
            type_mismatch(key, "'torus' or 'free'", value);
        c.boundary = parse_boundary(value);
    } else if (key == "R")
        c.replicas = to_integer<std::uint64_t>(key, value);
    else if (key == "lambdas")
        c.lambdas = to_list(key, value);
    else if (key == "sides")
        c.sides = to_list(key, value);
    else if (key == "epsilon")
        c.epsilon = to_double(key, value);
    else if (key == "n")
        c.cube_side = to_double(key, value);
    else if (key == "extent")
        c.extent = to_integer<std::uint32_t>(key, value);
    else if (key == "adjacency") {
        if (value != "face" && value != "moore")
            type_mismatch(key, "'face' or 'moore'", value);
        c.adjacency = experiments::parse_adjacency(value);
    } else if (key == "kmax")
        c.kmax = to_integer<std::uint32_t>(key, value);
    else if (key == "seed")
        c.seed = to_integer<std::uint64_t>(key, value);
    else if (key == "out")
        c.out = value;
    else if (key == "workers")
        c.workers = to_integer<unsigned>(key, value);
    else if (key == "abs_tol")
        c.abs_tol = to_double(key, value);
    else if (key == "rel_tol")
        c.rel_tol = to_double(key, value);
    else if (key == "max_subdivisions")
        c.max_subdivisions = to_integer<int>(key, value);
    else
        fail(ErrorKind::Config, "unknown key '" + key + "'");
}

// Parses config text into ordered (key, value) entries.
inline std::vector<std::pair<std::string, std::string>> parse_entries(std::string_view text)
{
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream is{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected 'key = value'");
        out.emplace_back(detail::trim(std::string_view(t).substr(0, eq)), detail::trim(std::string_view(t).substr(eq + 1)));
    }
    return out;
}

inline void validate(const RunConfig& c)
{
    using detail::violation;
    if (c.params.d < 1)
        violation("d", "must be an integer >= 1");
    if (!(c.params.nu > 0.0))
        violation("nu", "must be > 0");
    if (!(c.params.lambda > 0.0))
        violation("lambda", "must be > 0");
    if (!(c.params.alpha > 0.0))
        violation("alpha", "must be > 0");
    if (!(c.params.tau > 0.0))
        violation("tau", "must be > 0");
    if (c.side && !(*c.side > 0.0))
        violation("L", "must be > 0");
    if (c.replicas == 0)
        violation("R", "must be >= 1");
    for (double l : c.lambdas)
        if (!(l > 0.0))
            violation("lambdas", "entries must be > 0");
    for (std::size_t i = 1; i < c.lambdas.size(); ++i)
        if (c.lambdas[i] < c.lambdas[i - 1])
            violation("lambdas", "must be ascending");
    for (double s : c.sides)
        if (!(s > 0.0))
            violation("sides", "entries must be > 0");
    if (!(c.epsilon >= 0.0 && c.epsilon < 1.0))
        violation("epsilon", "must lie in [0, 1)");
    if (!(c.cube_side > 0.0))
        violation("n", "must be > 0");
    if (c.extent == 0)
        violation("extent", "must be >= 1");
    if (c.workers == 0)
        violation("workers", "must be >= 1");
    if (!(c.abs_tol > 0.0))
        violation("abs_tol", "must be > 0");
    if (!(c.rel_tol > 0.0))
        violation("rel_tol", "must be > 0");
    if (c.max_subdivisions < 1)
        violation("max_subdivisions", "must be >= 1");
}

// File entries first, then flag entries; later entries win.
inline RunConfig parse_config(const std::optional<std::string>& path,
                              const std::vector<std::pair<std::string, std::string>>& flags)
{
    RunConfig c;
    if (path) {
        std::ifstream in(*path);
        if (!in)
            fail(ErrorKind::Io, "cannot read config file '" + *path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        for (const auto& [k, v] : parse_entries(buf.str()))
            apply_entry(c, k, v);
    }
    for (const auto& [k, v] : flags)
        apply_entry(c, k, v);
    validate(c);
    return c;
}

} // namespace rcm::config
