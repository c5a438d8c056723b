#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "rcm/config.hpp"
#include "rcm/io.hpp"
#include "rcm/report.hpp"

using namespace rcm;
using config::parse_config;
using config::RunConfig;

namespace {

std::string config_error(const std::optional<std::string>& path,
                         const std::vector<std::pair<std::string, std::string>>& flags)
{
    try {
        parse_config(path, flags);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Config);
        return e.what();
    }
    ADD_FAILURE() << "config accepted";
    return {};
}

std::string temp_file(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

} // namespace

TEST(Config, FlagOverridesFile)
{
    const auto path = temp_file("rcm_cfg_override.conf", "lambda = 1.0\nalpha = 2.5 # trailing comment\n\n# full line\n");
    EXPECT_EQ(parse_config(path, {}).params.lambda, 1.0);
    const auto c = parse_config(path, {{"lambda", "2.0"}});
    EXPECT_EQ(c.params.lambda, 2.0);
    EXPECT_EQ(c.params.alpha, 2.5);
}

TEST(Config, Defaults)
{
    const RunConfig c = parse_config(std::nullopt, {});
    EXPECT_EQ(c.epsilon, 0.0);
    EXPECT_EQ(c.params.d, 1);
    EXPECT_EQ(c.params.tau, 3.0);
    EXPECT_FALSE(c.side.has_value());
    EXPECT_FALSE(c.boundary.has_value());
    EXPECT_EQ(c.workers, 1u);
}

TEST(Config, ErrorsNameTheField)
{
    EXPECT_NE(config_error(std::nullopt, {{"tau", "-1"}}).find("'tau'"), std::string::npos);
    const auto path = temp_file("rcm_cfg_bad_tau.conf", "tau = -1\n");
    EXPECT_NE(config_error(path, {}).find("constraint violation for 'tau'"), std::string::npos);
    EXPECT_NE(config_error(std::nullopt, {{"gamma", "1"}}).find("unknown key 'gamma'"), std::string::npos);
    EXPECT_NE(config_error(std::nullopt, {{"R", "ten"}}).find("type mismatch for 'R'"), std::string::npos);
    EXPECT_NE(config_error(std::nullopt, {{"d", "1.5"}}).find("type mismatch for 'd'"), std::string::npos);
    EXPECT_NE(config_error(std::nullopt, {{"boundary", "periodic"}}).find("'boundary'"), std::string::npos);
    EXPECT_NE(config_error(std::nullopt, {{"lambdas", "1,x"}}).find("'lambdas'"), std::string::npos);
    EXPECT_NE(config_error(std::nullopt, {{"lambdas", "2,1"}}).find("'lambdas'"), std::string::npos);
    EXPECT_NE(config_error(std::nullopt, {{"epsilon", "1"}}).find("'epsilon'"), std::string::npos);
    EXPECT_NE(config_error(std::nullopt, {{"workers", "0"}}).find("'workers'"), std::string::npos);
    const auto junk = temp_file("rcm_cfg_junk.conf", "just words\n");
    EXPECT_NE(config_error(junk, {}).find("line 1"), std::string::npos);
}

TEST(Config, MissingFileIsIoError)
{
    try {
        parse_config(std::string("/nonexistent/rcm.conf"), {});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
    }
}

TEST(Config, ListsAndEnums)
{
    const auto c = parse_config(std::nullopt, {{"lambdas", "0.5, 1,2"},
                                               {"sides", "256,1024"},
                                               {"boundary", "free"},
                                               {"adjacency", "moore"},
                                               {"seed", "18446744073709551615"}});
    EXPECT_EQ(c.lambdas, (std::vector<double>{0.5, 1, 2}));
    EXPECT_EQ(c.sides, (std::vector<double>{256, 1024}));
    EXPECT_EQ(*c.boundary, Boundary::Free);
    EXPECT_EQ(c.adjacency, experiments::Adjacency::Moore);
    EXPECT_EQ(c.seed, 18446744073709551615ull);
}

TEST(Report, SummaryEchoesEffectiveConfig)
{
    auto c = parse_config(std::nullopt, {{"lambda", "2"}, {"seed", "9"}, {"out", "/tmp"}, {"workers", "4"}});
    const auto j = report::summary("degree", c, {{"x", 1}});
    EXPECT_EQ(j["config"]["lambda"], 2.0);
    EXPECT_EQ(j["seed"], 9u);
    EXPECT_FALSE(j["config"].contains("out"));
    EXPECT_FALSE(j["config"].contains("workers"));
    EXPECT_EQ(j["run_id"].get<std::string>().size(), 40u);
    // the run id ignores workers and output location
    c.workers = 1;
    c.out = ".";
    EXPECT_EQ(report::summary("degree", c, {})["run_id"], j["run_id"]);
    c.seed = 10;
    EXPECT_NE(report::summary("degree", c, {})["run_id"], j["run_id"]);
}

TEST(Io, NumbersRoundTrip)
{
    for (double v : {0.1, 1.0 / 3.0, 5925.391748284699, 1e-300, 2.5e17})
        EXPECT_EQ(std::stod(io::format_number(v)), v);
    EXPECT_EQ(io::format_number(0.5), "0.5");
}

TEST(Io, CsvSchemas)
{
    experiments::DegreeStudyResult s;
    s.replicas = 4;
    s.histogram = {1, 0, 3};
    s.analytic_pmf = {0.25, 0.5, 0.125};
    EXPECT_EQ(io::degree_csv(s), "k,count,empirical_p,analytic_p\n0,1,0.25,0.25\n1,0,0,0.5\n2,3,0.75,0.125\n");

    experiments::ThetaScanResult t;
    t.lambdas = {0.5, 1};
    t.spanning_freq = {0, 0.25};
    t.origin_cluster_mean = {1, 2.5};
    t.replicas = 4;
    EXPECT_EQ(io::theta_csv(t), "lambda,spanning_freq,origin_cluster_mean,replicas\n0.5,0,1,4\n1,0.25,2.5,4\n");

    experiments::FiniteSizeReport f;
    f.params.lambda = 5;
    f.sides = {256, 1024};
    f.spanning_freq = {0.5, 0.25};
    f.standard_error = {0.05, 0.04};
    EXPECT_EQ(io::fss_csv(f), "L,lambda,spanning_freq,stderr\n256,5,0.5,0.05\n1024,5,0.25,0.04\n");
}
