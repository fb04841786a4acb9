#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "o2ram/errors.hpp"
#include "o2ram/omatch.hpp"
#include "o2ram/trace.hpp"
#include "oracles.hpp"

using namespace o2ram;

namespace
{
    uint64_t tau_for(uint32_t n)
    {
        return n <= 1 ? 1 : 3 * uint64_t(std::ceil(std::log2(double(n)))) + 1;
    }
}

TEST(Omatch, TinyCases)
{
    std::vector<Edge> one{{0, 0}};
    auto M = omatch(one, 1, 1, 1);
    EXPECT_EQ(M.pairs, (std::vector<int64_t>{0}));
    // two left vertices competing for one right vertex
    std::vector<Edge> clash{{0, 0}, {1, 0}};
    M = omatch(clash, 2, 1, 3);
    EXPECT_EQ(M.size(), 1u);
    EXPECT_TRUE(M.valid_for(clash, 1));
    // needs one augmenting path
    std::vector<Edge> aug{{0, 0}, {0, 1}, {1, 0}};
    M = omatch(aug, 2, 2, 4);
    EXPECT_EQ(M.size(), 2u);
    EXPECT_TRUE(M.valid_for(aug, 2));
}

TEST(Omatch, RejectsBadInput)
{
    std::vector<Edge> e{{0, 5}};
    EXPECT_THROW(omatch(e, 1, 2, 3), ParameterError);
    std::vector<Edge> ok{{0, 0}};
    EXPECT_THROW(omatch(ok, 1, 1, 0), ParameterError);
}

TEST(Omatch, CuckooGraphsAgainstMaximumMatching)
{
    std::mt19937_64 rng(2024);
    int perfect = 0;
    for (int trial = 0; trial < 300; ++trial)
    {
        uint32_t n = 1 + rng() % 64, k = 3 + rng() % 2, nR;
        auto E = oracle::cuckoo_graph(n, k, rng, nR);
        uint64_t best = oracle::max_matching(E, n, nR);
        MatchDebug dbg;
        auto M = omatch(E, n, nR, tau_for(n), &dbg);
        ASSERT_TRUE(M.valid_for(E, nR));
        EXPECT_EQ(dbg.stale_alternat_bk, 0u);
        for (size_t i = 1; i < dbg.matched_per_iteration.size(); ++i)
            EXPECT_LE(dbg.matched_per_iteration[i - 1], dbg.matched_per_iteration[i]);
        if (best == n)
        {
            ++perfect;
            EXPECT_EQ(M.size(), n) << "trial " << trial;
        }
    }
    EXPECT_GT(perfect, 250);
}

TEST(Omatch, GeneralGraphsWithLongSchedule)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial)
    {
        uint32_t nL = 1 + rng() % 12, nR = 1 + rng() % 14;
        double p = double(rng() % 1000) / 1000;
        std::vector<Edge> E;
        for (uint32_t u = 0; u < nL; ++u)
            for (uint32_t v = 0; v < nR; ++v)
                if (double(rng() % 1000) / 1000 < p)
                    E.push_back({u, v});
        if (E.empty())
            continue;
        auto M = omatch(E, nL, nR, 3 * nL + 1);
        ASSERT_TRUE(M.valid_for(E, nR));
        EXPECT_EQ(M.size(), oracle::max_matching(E, nL, nR)) << "trial " << trial;
    }
}

TEST(Omatch, GroupedEqualsUngrouped)
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial)
    {
        uint32_t n = 1 + rng() % 64, k = 3 + rng() % 2, nR;
        auto E = oracle::cuckoo_graph(n, k, rng, nR);
        auto a = omatch(E, n, nR, tau_for(n));
        auto b = omatch_grouped(E, k, n, nR, tau_for(n));
        EXPECT_EQ(a.pairs, b.pairs) << "trial " << trial;
    }
}

TEST(Omatch, TraceDependsOnlyOnSizes)
{
    std::mt19937_64 rng(9);
    uint32_t nR;
    auto E1 = oracle::cuckoo_graph(40, 3, rng, nR);
    auto E2 = oracle::cuckoo_graph(40, 3, rng, nR);
    trace::Trace t1, t2;
    {
        trace::Session s;
        omatch_grouped(E1, 3, 40, nR, 17);
        t1 = s.take();
    }
    {
        trace::Session s;
        omatch_grouped(E2, 3, 40, nR, 17);
        t2 = s.take();
    }
    EXPECT_EQ(t1.records, t2.records);
    {
        trace::Session s;
        omatch(E1, 40, nR, 17);
        t1 = s.take();
    }
    {
        trace::Session s;
        omatch(E2, 40, nR, 17);
        t2 = s.take();
    }
    EXPECT_EQ(t1.records, t2.records);
}
