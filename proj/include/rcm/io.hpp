#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cloud.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "graph.hpp"
#include "params.hpp"

// Text formats. Numbers are written in the shortest decimal form that
// round-trips to the same double, with '.' as decimal separator.
namespace rcm::io {

inline std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_number(std::uint64_t v) { return std::to_string(v); }

// Cloud format: one header line with the values
//   d nu lambda alpha tau L boundary seed palm
// followed by one line per particle: id x_1 ... x_d weight
inline void write_cloud(std::ostream& os, const ModelParams& params, const PointCloud& cloud)
{
    const BoxDomain& dom = cloud.domain();
    os << dom.d << ' ' << format_number(params.nu) << ' ' << format_number(params.lambda) << ' '
       << format_number(params.alpha) << ' ' << format_number(params.tau) << ' ' << format_number(dom.side) << ' '
       << to_string(dom.boundary) << ' ' << cloud.seed() << ' ' << (cloud.palm() ? 1 : 0) << '\n';
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        os << i;
        for (double x : cloud.position(i))
            os << ' ' << format_number(x);
        os << ' ' << format_number(cloud.weight(i)) << '\n';
    }
}

struct CloudFile {
    ModelParams params;
    PointCloud cloud;
};

inline CloudFile read_cloud(std::istream& is)
{
    CloudFile out;
    std::string header;
    if (!std::getline(is, header))
        fail(ErrorKind::Io, "cloud file: missing header line");
    std::istringstream hs(header);
    std::string boundary;
    std::uint64_t seed = 0;
    int palm = 0;
    BoxDomain dom;
    if (!(hs >> dom.d >> out.params.nu >> out.params.lambda >> out.params.alpha >> out.params.tau >> dom.side >>
          boundary >> seed >> palm))
        fail(ErrorKind::Io, "cloud file: malformed header line");
    out.params.d = dom.d;
    dom.boundary = parse_boundary(boundary);
    out.cloud = PointCloud(dom, seed, palm != 0);
    std::string line;
    std::vector<double> x(static_cast<std::size_t>(dom.d));
    std::size_t expected = 0;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::size_t id = 0;
        double w = 0.0;
        if (!(ls >> id))
            fail(ErrorKind::Io, "cloud file: malformed particle line");
        for (auto& c : x)
            if (!(ls >> c))
                fail(ErrorKind::Io, "cloud file: malformed particle line");
        if (!(ls >> w) || id != expected)
            fail(ErrorKind::Io, "cloud file: malformed particle line");
        out.cloud.push_back(x, w);
        ++expected;
    }
    return out;
}

// Edge list: "i j" per line, sorted lexicographically.
inline void write_edges(std::ostream& os, const Graph& g)
{
    for (const Edge& e : g.edges())
        os << e.i << ' ' << e.j << '\n';
}

// "id component_root" per line; the root is the smallest id in the component.
inline void write_components(std::ostream& os, const Graph& g)
{
    const auto labels = g.component_labels();
    for (std::size_t v = 0; v < labels.size(); ++v)
        os << v << ' ' << labels[v] << '\n';
}

inline std::string degree_csv(const experiments::DegreeStudyResult& study)
{
    std::ostringstream os;
    os << "k,count,empirical_p,analytic_p\n";
    const double n = static_cast<double>(study.replicas);
    for (std::size_t k = 0; k < study.histogram.size(); ++k)
        os << k << ',' << study.histogram[k] << ',' << format_number(static_cast<double>(study.histogram[k]) / n)
           << ',' << format_number(study.analytic_pmf[k]) << '\n';
    return os.str();
}

inline std::string theta_csv(const experiments::ThetaScanResult& scan)
{
    std::ostringstream os;
    os << "lambda,spanning_freq,origin_cluster_mean,replicas\n";
    for (std::size_t g = 0; g < scan.lambdas.size(); ++g)
        os << format_number(scan.lambdas[g]) << ',' << format_number(scan.spanning_freq[g]) << ','
           << format_number(scan.origin_cluster_mean[g]) << ',' << scan.replicas << '\n';
    return os.str();
}

inline std::string fss_csv(const experiments::FiniteSizeReport& report)
{
    std::ostringstream os;
    os << "L,lambda,spanning_freq,stderr\n";
    for (std::size_t s = 0; s < report.sides.size(); ++s)
        os << format_number(report.sides[s]) << ',' << format_number(report.params.lambda) << ','
           << format_number(report.spanning_freq[s]) << ',' << format_number(report.standard_error[s]) << '\n';
    return os.str();
}

inline std::string sitebond_csv(const experiments::SiteBondReport& report)
{
    std::ostringstream os;
    os << "n,extent,adjacency,r,p_site,p_bond,spanning_freq,stderr,replicas\n";
    os << format_number(report.cube_side) << ',' << report.extent << ',' << experiments::to_string(report.adjacency)
       << ',' << format_number(report.max_distance) << ',' << format_number(report.p_site) << ','
       << format_number(report.p_bond) << ',' << format_number(report.spanning_freq) << ','
       << format_number(report.standard_error) << ',' << report.replicas << '\n';
    return os.str();
}

} // namespace rcm::io
