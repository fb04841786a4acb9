#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "o2ram/planner.hpp"
#include "o2ram/twotier.hpp"

using namespace o2ram;

namespace
{
    std::string temp_path(const std::string &name)
    {
        auto p = std::filesystem::temp_directory_path() / ("o2ram_" + name + "_" + std::to_string(::getpid()));
        std::filesystem::remove(p);
        return p.string();
    }

    // synthetic costs: linear ~ t n, bucket ~ n log^2 n + t * 64, cuckoo cheap lookups
    ProbeCost synthetic(const SchemeSpec &s, uint64_t n, size_t, uint64_t)
    {
        double lg = std::log2(double(n) + 1);
        switch (s.scheme)
        {
        case Scheme::linear:
            return {1e-9 * double(n), 1e-9 * double(n)};
        case Scheme::bucket:
        {
            double m = double(s.bucket_m);
            return {4e-9 * double(n) * lg * lg, 1e-9 * (double(n) / m + 8 * std::sqrt(double(n) / m) + 20)};
        }
        case Scheme::cuckoo:
            return {10e-9 * double(n) * lg * lg, 5e-9};
        case Scheme::twotier:
            return {2e-9 * double(n) * lg * lg, 1e-9 * 30};
        }
        return {};
    }
}

TEST(CostCache, PutGetAndPersistence)
{
    auto path = temp_path("cache");
    {
        CostCache c(path);
        EXPECT_TRUE(c.persistent());
        c.put(64, 16, "linear", "fp", 0.5);
        EXPECT_EQ(c.get(64, 16, "linear", "fp"), 0.5);
        EXPECT_FALSE(c.get(64, 16, "linear", "other"));
    }
    CostCache d(path);
    EXPECT_EQ(d.get(64, 16, "linear", "fp"), 0.5);
    std::filesystem::remove(path);
}

TEST(CostCache, CorruptLinesSkipped)
{
    auto path = temp_path("corrupt");
    {
        std::ofstream out(path);
        out << "64 16 linear fp 0.25\n";
        out << "garbage line\n";
        out << "65 16 linear fp -3\n";
        out << "66 16 linear fp 0.1 extra\n";
    }
    CostCache c(path);
    EXPECT_EQ(c.skipped_lines(), 3u);
    EXPECT_EQ(c.size(), 1u);
    std::filesystem::remove(path);
}

TEST(CostCache, UnwritablePathFallsBackToMemory)
{
    CostCache c("/nonexistent_dir_o2ram/cache.txt");
    EXPECT_FALSE(c.persistent());
    c.put(1, 8, "linear", "fp", 1.0);
    EXPECT_EQ(c.get(1, 8, "linear", "fp"), 1.0);
}

TEST(Planner, SmallTablesPickLinear)
{
    Planner::Options o;
    o.measure = synthetic;
    Planner p(CostCache{}, o);
    EXPECT_EQ(p.plan(64, 64, 16).spec.scheme, Scheme::linear);
}

TEST(Planner, CuckooOnlyForOverflowPile)
{
    Planner::Options o;
    o.measure = synthetic;
    Planner p(CostCache{}, o);
    auto level = p.plan(1 << 16, 1 << 16, 16);
    EXPECT_NE(level.spec.scheme, Scheme::cuckoo);
    EXPECT_NE(level.spec.scheme, Scheme::linear);
    auto pile = p.plan(1 << 10, 128 << 10, 16, Role::overflow_pile);
    EXPECT_EQ(pile.spec.scheme, Scheme::cuckoo);
    EXPECT_FALSE(p.eligible(Scheme::twotier, 1 << 20, Role::overflow_pile, true));
    EXPECT_FALSE(p.eligible(Scheme::twotier, 1024, Role::level, true));
}

TEST(Planner, MeasurementsCachedAndDeterministic)
{
    int calls = 0;
    Planner::Options o;
    o.measure = [&](const SchemeSpec &s, uint64_t n, size_t b, uint64_t t)
    {
        ++calls;
        return synthetic(s, n, b, t);
    };
    Planner p(CostCache{}, o);
    auto a = p.plan(1 << 12, 1 << 12, 16);
    int first = calls;
    auto b = p.plan(1 << 12, 1 << 12, 16);
    EXPECT_EQ(calls, first);
    EXPECT_EQ(a.spec.token(), b.spec.token());
}

TEST(Planner, BucketDroppedAboveTwoTierLevel)
{
    Planner::Options o;
    o.measure = synthetic;
    o.C = 64;
    o.log2_delta = -5;
    Planner p(CostCache{}, o);
    auto levels = p.plan_levels(8, 16, 16);
    bool seen_twotier = false;
    for (auto &c : levels)
    {
        if (seen_twotier)
            EXPECT_NE(c.spec.scheme, Scheme::bucket);
        seen_twotier |= c.spec.scheme == Scheme::twotier;
    }
    EXPECT_TRUE(seen_twotier);
}

TEST(Planner, TwoTierNeedsSecurityMargin)
{
    Planner::Options o;
    o.measure = synthetic;
    o.C = 64; // exp(-C/16) ~ 2^-5.8 cannot reach 2^-64
    Planner p(CostCache{}, o);
    EXPECT_FALSE(p.eligible(Scheme::twotier, 1 << 12, Role::level, true));
    Planner q(CostCache{}, Planner::Options{-64, 1024, 6, 1, synthetic});
    EXPECT_TRUE(q.eligible(Scheme::twotier, 1 << 12, Role::level, true));
}

TEST(Planner, RealMeasurementSmoke)
{
    Planner p(CostCache{});
    auto c = p.plan(128, 128, 16);
    EXPECT_GT(c.cost, 0);
    EXPECT_FALSE(p.log().empty());
}

TEST(Planner, FingerprintStable)
{
    EXPECT_EQ(machine_fingerprint(), machine_fingerprint());
    EXPECT_FALSE(machine_fingerprint().empty());
}
