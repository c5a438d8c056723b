// rcm: command-line driver for the heterogeneous random-connection model.
//
//   rcm analytic  closed-form quantities and regime (JSON on stdout)
//   rcm degree    Palm degree study          -> degree.csv, summary.json
//   rcm theta     coupled lambda scan        -> theta.csv, summary.json
//   rcm fss       finite-size contrast       -> fss.csv, summary.json
//   rcm sitebond  site-bond renormalization  -> sitebond.csv, summary.json
//   rcm validate  oracle cross-checks (JSON on stdout)
//
// Exit codes: 0 ok, 1 internal, 2 invalid configuration, 3 regime refusal,
// 4 capacity, 5 I/O, 6 numerical non-convergence, 7 validation failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rcm/rcm.hpp"

namespace {

using rcm::Error;
using rcm::ErrorKind;
using rcm::report::json;

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Domain:
    case ErrorKind::Config: return 2;
    case ErrorKind::DivergentIntegral:
    case ErrorKind::RegimeRefusal: return 3;
    case ErrorKind::Capacity: return 4;
    case ErrorKind::Io: return 5;
    case ErrorKind::Convergence: return 6;
    }
    return 1;
}

struct Options {
    std::optional<std::string> config_path;
    std::map<std::string, std::string> overrides;
};

void add_common_options(CLI::App* sub, Options& opts)
{
    sub->add_option_function<std::string>(
        "--config", [&opts](const std::string& p) { opts.config_path = p; }, "config file (key = value lines)");
    for (const auto& key : rcm::config::known_keys())
        sub->add_option_function<std::string>(
            "--" + key, [&opts, key](const std::string& v) { opts.overrides[key] = v; }, "override '" + key + "'");
}

rcm::config::RunConfig effective_config(const Options& opts)
{
    // flags are applied in the fixed key order so the result is independent
    // of their position on the command line
    std::vector<std::pair<std::string, std::string>> flags;
    for (const auto& key : rcm::config::known_keys())
        if (auto it = opts.overrides.find(key); it != opts.overrides.end())
            flags.emplace_back(key, it->second);
    return rcm::config::parse_config(opts.config_path, flags);
}

std::filesystem::path output_dir(const rcm::config::RunConfig& c)
{
    const std::filesystem::path dir(c.out);
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        rcm::fail(ErrorKind::Io, "output directory '" + c.out + "' does not exist");
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text) || !out.flush())
        rcm::fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
}

void write_outputs(const rcm::config::RunConfig& c, const std::string& command, const std::string& csv_name,
                   const std::string& csv, json results, double seconds)
{
    const auto dir = output_dir(c);
    write_file(dir / csv_name, csv);
    write_file(dir / "summary.json", rcm::report::summary(command, c, std::move(results)).dump(2) + "\n");
    const json timing = {{"command", command}, {"wall_time_seconds", seconds}, {"workers", c.workers}};
    write_file(dir / "timing.json", timing.dump(2) + "\n");
}

double side_or(const rcm::config::RunConfig& c, double fallback) { return c.side.value_or(fallback); }

void require_boundary(const rcm::config::RunConfig& c, rcm::Boundary wanted, const std::string& command)
{
    if (c.boundary && *c.boundary != wanted)
        rcm::fail(ErrorKind::Config, "constraint violation for 'boundary': " + command + " requires " +
                                         std::string(rcm::to_string(wanted)));
}

int cmd_analytic(const rcm::config::RunConfig& c)
{
    const auto report = rcm::analytic::analyze(c.params);
    const rcm::quad::Tolerance tol{c.abs_tol, c.rel_tol, c.max_subdivisions};
    json j = rcm::report::analytic_json(report, c.kmax, tol);
    if (report.regime == rcm::Regime::InfiniteDegree) {
        const std::string msg = "min{alpha, tau*alpha} <= d: the degree is infinite almost surely";
        j.update(rcm::report::error_json(ErrorKind::DivergentIntegral, msg));
        std::cout << j.dump(2) << '\n';
        std::cerr << "rcm: " << msg << '\n';
        return exit_code(ErrorKind::DivergentIntegral);
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_degree(const rcm::config::RunConfig& c)
{
    require_boundary(c, rcm::Boundary::Torus, "degree");
    output_dir(c);
    const auto t0 = std::chrono::steady_clock::now();
    const auto study = rcm::experiments::run_degree_study(c.params, side_or(c, 200.0), c.replicas, c.seed, c.workers);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs(c, "degree", "degree.csv", rcm::io::degree_csv(study), rcm::report::degree_json(study), secs);
    return 0;
}

int cmd_theta(const rcm::config::RunConfig& c)
{
    require_boundary(c, rcm::Boundary::Free, "theta");
    if (c.lambdas.empty())
        rcm::fail(ErrorKind::Config, "constraint violation for 'lambdas': theta needs a lambda grid");
    output_dir(c);
    const auto t0 = std::chrono::steady_clock::now();
    const auto scan =
        rcm::experiments::run_theta_scan(c.params, c.lambdas, side_or(c, 32.0), c.replicas, c.seed, c.workers, c.epsilon);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs(c, "theta", "theta.csv", rcm::io::theta_csv(scan), rcm::report::theta_json(scan), secs);
    return 0;
}

int cmd_fss(const rcm::config::RunConfig& c)
{
    require_boundary(c, rcm::Boundary::Free, "fss");
    output_dir(c);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = rcm::experiments::run_finite_size_contrast(c.params, c.sides, c.replicas, c.seed, c.workers, c.epsilon);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs(c, "fss", "fss.csv", rcm::io::fss_csv(rep), rcm::report::fss_json(rep), secs);
    return 0;
}

int cmd_sitebond(const rcm::config::RunConfig& c)
{
    output_dir(c);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = rcm::experiments::site_bond_renormalization(c.params, c.cube_side, c.extent, c.seed, c.replicas,
                                                                 c.adjacency, c.workers);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs(c, "sitebond", "sitebond.csv", rcm::io::sitebond_csv(rep), rcm::report::sitebond_json(rep), secs);
    return 0;
}

int cmd_validate()
{
    json checks = json::array();
    bool all = true;
    for (const auto& r : {rcm::validation::integral_vs_quadrature(), rcm::validation::pmf_dual_route(),
                          rcm::validation::union_find_vs_bfs()}) {
        checks.push_back(
            {{"name", r.name}, {"pass", r.pass}, {"worst", r.worst}, {"tolerance", r.tolerance}, {"cases", r.cases}});
        all = all && r.pass;
    }
    std::cout << json{{"checks", checks}, {"pass", all}}.dump(2) << '\n';
    return all ? 0 : 7;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Heterogeneous random-connection model: closed forms, oracles and Monte Carlo experiments"};
    app.require_subcommand(1);
    Options opts;
    std::map<std::string, CLI::App*> subs;
    for (const char* name : {"analytic", "degree", "theta", "fss", "sitebond", "validate"}) {
        subs[name] = app.add_subcommand(name);
        add_common_options(subs[name], opts);
    }
    subs["analytic"]->description("closed-form degree law and percolation regime");
    subs["degree"]->description("Palm degree study on a torus");
    subs["theta"]->description("coupled lambda scan of the spanning probability");
    subs["fss"]->description("spanning frequency across box sides at fixed lambda");
    subs["sitebond"]->description("site-bond renormalization demonstrator");
    subs["validate"]->description("closed forms and union-find against independent oracles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (subs["validate"]->parsed())
            return cmd_validate();
        const auto cfg = effective_config(opts);
        if (subs["analytic"]->parsed())
            return cmd_analytic(cfg);
        if (subs["degree"]->parsed())
            return cmd_degree(cfg);
        if (subs["theta"]->parsed())
            return cmd_theta(cfg);
        if (subs["fss"]->parsed())
            return cmd_fss(cfg);
        if (subs["sitebond"]->parsed())
            return cmd_sitebond(cfg);
    } catch (const Error& e) {
        std::cout << rcm::report::error_json(e.kind(), e.what()).dump(2) << '\n';
        std::cerr << "rcm: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cout << json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump(2) << '\n';
        std::cerr << "rcm: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
