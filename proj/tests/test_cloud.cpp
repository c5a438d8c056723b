#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "rcm/cloud.hpp"
#include "rcm/io.hpp"

using namespace rcm;

namespace {

ModelParams params_d(int d, double nu = 1.0, double tau = 3.0) { return {d, nu, 1.0, d + 1.0, tau}; }

template <class F>
ErrorKind kind_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no rcm::Error thrown";
    return ErrorKind::InvalidArgument;
}

// Two-sample Kolmogorov-Smirnov statistic for integer samples.
double ks_statistic(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double worst = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const auto v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v)
            ++i;
        while (j < b.size() && b[j] == v)
            ++j;
        worst = std::max(worst, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return worst;
}

} // namespace

TEST(Pareto, Endpoints)
{
    EXPECT_NEAR(sample_pareto(3.0, 1e-15), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(sample_pareto(1.0, 0.5), 2.0);
    EXPECT_EQ(kind_of([] { sample_pareto(2.0, 0.0); }), ErrorKind::Domain);
    EXPECT_EQ(kind_of([] { sample_pareto(2.0, 1.0); }), ErrorKind::Domain);
    EXPECT_EQ(kind_of([] { sample_pareto(-1.0, 0.5); }), ErrorKind::InvalidArgument);
}

TEST(Pareto, SurvivalAtTwo)
{
    const CounterRng rng(123);
    constexpr int n = 1'000'000;
    int above = 0;
    for (int i = 0; i < n; ++i)
        above += sample_pareto(3.0, rng.uniform(stream_id("pareto-test"), i, 0)) > 2.0;
    const double p = 0.125;
    EXPECT_NEAR(double(above) / n, p, 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Poisson, EmptyBoxFrequency)
{
    // nu L^d = 4
    const auto p = params_d(2);
    const BoxDomain dom{2, 2.0, Boundary::Free};
    constexpr int seeds = 100'000;
    int empty = 0;
    for (int s = 0; s < seeds; ++s)
        empty += sample_cloud(p, dom, s).empty();
    const double q = std::exp(-4.0);
    EXPECT_NEAR(double(empty) / seeds, q, 3.0 * std::sqrt(q * (1 - q) / seeds));
}

TEST(Poisson, MeanCount)
{
    const auto p = params_d(2);
    const BoxDomain dom{2, 10.0, Boundary::Torus};
    constexpr int seeds = 10'000;
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s)
        sum += double(sample_cloud(p, dom, s).size());
    EXPECT_NEAR(sum / seeds, 100.0, 3.0 * 10.0 / std::sqrt(double(seeds)));
}

TEST(Poisson, LargeMeanMomentsViaRejectionSampler)
{
    double sum = 0.0, sq = 0.0;
    constexpr int n = 20'000;
    const double mean = 1000.0;
    for (int s = 0; s < n; ++s) {
        const double k = double(detail::sample_poisson(CounterRng(s), streams::kCount, mean));
        sum += k;
        sq += k * k;
    }
    const double m = sum / n;
    const double var = sq / n - m * m;
    EXPECT_NEAR(m, mean, 4.0 * std::sqrt(mean / n));
    // sd of the sample variance ~ sqrt(2 mean^2 / n) for large mean
    EXPECT_NEAR(var, mean, 4.0 * std::sqrt(2.0 * mean * mean / n));
}

TEST(Cloud, DeterministicAndSeedSensitive)
{
    const auto p = params_d(3);
    const BoxDomain dom{3, 6.0, Boundary::Free};
    const auto a = sample_cloud(p, dom, 99);
    const auto b = sample_cloud(p, dom, 99);
    EXPECT_EQ(a, b);
    std::ostringstream sa, sb;
    io::write_cloud(sa, p, a);
    io::write_cloud(sb, p, b);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_NE(a, sample_cloud(p, dom, 100));
}

TEST(Cloud, SupportInvariants)
{
    for (int d = 1; d <= 3; ++d) {
        const auto p = params_d(d, 2.0, 1.5);
        const BoxDomain dom{d, 7.0, Boundary::Free};
        const auto c = sample_cloud(p, dom, 5 + d);
        for (std::size_t i = 0; i < c.size(); ++i) {
            EXPECT_GE(c.weight(i), 1.0);
            for (double x : c.position(i)) {
                EXPECT_GE(x, -3.5);
                EXPECT_LT(x, 3.5);
            }
        }
    }
}

TEST(Cloud, WeightsIndependentOfPositions)
{
    const auto p = params_d(2, 1.0, 5.0);
    const BoxDomain dom{2, 320.0, Boundary::Torus}; // ~1e5 particles
    const auto c = sample_cloud(p, dom, 2718);
    ASSERT_GT(c.size(), 90'000u);
    const double n = double(c.size());
    for (int k = 0; k < 2; ++k) {
        double sw = 0, sx = 0, sww = 0, sxx = 0, swx = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double w = c.weight(i), x = c.position(i)[k];
            sw += w;
            sx += x;
            sww += w * w;
            sxx += x * x;
            swx += w * x;
        }
        const double cov = swx / n - sw / n * sx / n;
        const double corr = cov / std::sqrt((sww / n - sw * sw / n / n) * (sxx / n - sx * sx / n / n));
        EXPECT_LT(std::abs(corr), 4.0 / std::sqrt(n)) << "axis " << k;
    }
}

TEST(Cloud, CapacityGuard)
{
    ::setenv("RCM_MAX_PARTICLES", "50", 1);
    const auto p = params_d(2);
    EXPECT_EQ(kind_of([&] { sample_cloud(p, BoxDomain{2, 100.0, Boundary::Free}, 1); }), ErrorKind::Capacity);
    EXPECT_NO_THROW(sample_cloud(p, BoxDomain{2, 2.0, Boundary::Free}, 1));
    ::unsetenv("RCM_MAX_PARTICLES");
    EXPECT_NO_THROW(sample_cloud(p, BoxDomain{2, 100.0, Boundary::Free}, 1));
}

TEST(Cloud, RejectsMismatchedDomain)
{
    EXPECT_EQ(kind_of([] { sample_cloud(params_d(2), BoxDomain{3, 1.0, Boundary::Free}, 1); }),
              ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { sample_cloud(params_d(2), BoxDomain{2, -1.0, Boundary::Free}, 1); }),
              ErrorKind::InvalidArgument);
}

TEST(Palm, OriginAndTail)
{
    const auto p = params_d(2);
    const BoxDomain dom{2, 12.0, Boundary::Torus};
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto palm = sample_palm_cloud(p, dom, s);
        const auto plain = sample_cloud(p, dom, s);
        ASSERT_TRUE(palm.palm());
        ASSERT_EQ(palm.size(), plain.size() + 1);
        for (double x : palm.position(0))
            EXPECT_EQ(x, 0.0);
        for (std::size_t i = 0; i < plain.size(); ++i) {
            EXPECT_EQ(palm.weight(i + 1), plain.weight(i));
            EXPECT_TRUE(std::ranges::equal(palm.position(i + 1), plain.position(i)));
        }
    }
}

TEST(Palm, CountDistributionMatchesPlainCloud)
{
    const auto p = params_d(1);
    const BoxDomain dom{1, 20.0, Boundary::Free};
    constexpr std::uint64_t seeds = 10'000;
    std::vector<std::uint64_t> palm_counts, plain_counts;
    for (std::uint64_t s = 0; s < seeds; ++s) {
        palm_counts.push_back(sample_palm_cloud(p, dom, s).size() - 1);
        plain_counts.push_back(sample_cloud(p, dom, s + 1'000'000).size());
    }
    // two-sample KS critical value at level 0.001
    EXPECT_LT(ks_statistic(palm_counts, plain_counts), 1.95 * std::sqrt(2.0 / seeds));
}

TEST(Palm, OriginWeightIsPareto)
{
    const auto p = params_d(1, 1.0, 3.0);
    const BoxDomain dom{1, 1.0, Boundary::Free};
    constexpr int seeds = 100'000;
    int above = 0;
    for (int s = 0; s < seeds; ++s)
        above += sample_palm_cloud(p, dom, s).weight(0) > 2.0;
    EXPECT_NEAR(double(above) / seeds, 0.125, 3.0 * std::sqrt(0.125 * 0.875 / seeds));
}

TEST(Distance, Examples)
{
    const BoxDomain torus1{1, 10.0, Boundary::Torus};
    const double a[] = {-4.5}, b[] = {4.5};
    EXPECT_DOUBLE_EQ(distance(torus1, a, b), 1.0);
    EXPECT_DOUBLE_EQ(distance(torus1, a, a), 0.0);
    const BoxDomain free2{2, 10.0, Boundary::Free};
    const double o[] = {0.0, 0.0}, q[] = {3.0, 4.0};
    EXPECT_DOUBLE_EQ(distance(free2, o, q), 5.0);
}

TEST(Distance, MetricProperties)
{
    for (int d = 1; d <= 3; ++d) {
        const auto p = params_d(d);
        const BoxDomain torus{d, 8.0, Boundary::Torus};
        const BoxDomain free{d, 8.0, Boundary::Free};
        const auto c = sample_cloud(p, torus, 17 * d);
        const std::size_t n = std::min<std::size_t>(c.size(), 40);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double dt = distance(torus, c.position(i), c.position(j));
                EXPECT_LE(dt, distance(free, c.position(i), c.position(j)));
                EXPECT_LE(dt, 8.0 * std::sqrt(double(d)) / 2.0 + 1e-12);
                EXPECT_EQ(dt, distance(torus, c.position(j), c.position(i)));
                for (std::size_t k = 0; k < n; k += 7) {
                    EXPECT_LE(dt, distance(torus, c.position(i), c.position(k)) +
                                      distance(torus, c.position(k), c.position(j)) + 1e-12);
                    EXPECT_LE(distance(free, c.position(i), c.position(j)),
                              distance(free, c.position(i), c.position(k)) +
                                  distance(free, c.position(k), c.position(j)) + 1e-12);
                }
            }
    }
}

TEST(CloudFile, RoundTrip)
{
    for (int d = 1; d <= 3; ++d)
        for (bool palm : {false, true}) {
            const ModelParams p{d, 0.7, 1.3, d + 0.9, 2.2};
            const BoxDomain dom{d, 5.5, palm ? Boundary::Free : Boundary::Torus};
            const auto c = palm ? sample_palm_cloud(p, dom, 31 + d) : sample_cloud(p, dom, 31 + d);
            std::stringstream ss;
            io::write_cloud(ss, p, c);
            const auto back = io::read_cloud(ss);
            EXPECT_EQ(back.cloud, c);
            EXPECT_EQ(back.params.alpha, p.alpha);
            EXPECT_EQ(back.params.tau, p.tau);
            EXPECT_EQ(back.params.nu, p.nu);
            EXPECT_EQ(back.params.lambda, p.lambda);
        }
    std::stringstream bad("1 1 1 2 3 10 free 1 0\n0 0.5\n");
    EXPECT_EQ(kind_of([&] { io::read_cloud(bad); }), ErrorKind::Io);
}
