#include <gtest/gtest.h>

#include <random>

#include "o2ram_checks/fht.hpp"
#include "oracles.hpp"
#include "o2ram/bucket.hpp"
#include "o2ram/trace.hpp"

using namespace o2ram;

TEST(Bucket, SizingUsesTightCapacity)
{
    auto s = bucket_sizing(8192, 16, -64);
    EXPECT_EQ(s.ell, 731u);
    EXPECT_EQ(bucket_sizing(0, 4, -64).ell, 1u);
    EXPECT_THROW(bucket_sizing(10, 0, -64), ParameterError);
}

TEST(Bucket, AllLookupsSucceed)
{
    std::mt19937_64 rng(1);
    Tape tape(2);
    auto blocks = oracle::random_blocks(1024, 16, 0, rng);
    auto want = oracle::reals_of(blocks);
    BucketTable t(blocks, 32, tape);
    for (auto &[k, v] : want)
    {
        auto got = t.lookup(k);
        ASSERT_TRUE(got);
        EXPECT_EQ(*got, v);
    }
    EXPECT_FALSE(t.lookup(kDummyLookup));
    EXPECT_EQ(t.count_real(), 0u);
}

TEST(Bucket, RecurrentLookupRejectedWhenChecking)
{
    std::mt19937_64 rng(1);
    Tape tape(2);
    auto blocks = oracle::random_blocks(16, 8, 0, rng);
    BucketTable t(blocks, 4, tape);
    t.set_check_recurrent(true);
    int64_t k = blocks.key(0);
    EXPECT_TRUE(t.lookup(k));
    EXPECT_THROW(t.lookup(k), RecurrentLookup);
}

TEST(Bucket, TinyCapacityForcesBuildFailure)
{
    std::mt19937_64 rng(3);
    Tape tape(4);
    auto blocks = oracle::random_blocks(64, 8, 0, rng);
    BucketTable::Options o;
    o.ell_override = 1;
    EXPECT_THROW(BucketTable(blocks, 2, tape, o), BuildFailure);
}

TEST(Bucket, LookupTraceShapeIndependentOfKey)
{
    std::mt19937_64 rng(5);
    Tape tape(6);
    auto blocks = oracle::random_blocks(256, 8, 10, rng);
    BucketTable t(blocks, 16, tape);
    std::vector<uint64_t> out(1);
    auto shape = [&](int64_t key)
    {
        trace::Session s;
        t.lookup(key, out.data());
        return trace::shape_of(s.take());
    };
    auto a = shape(blocks.key(3)), b = shape(kDummyLookup), c = shape(int64_t(1) << 50);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    ASSERT_EQ(a.records.size(), 2u);
    EXPECT_EQ(a.records[0].span, t.sizing().ell);
}

TEST(Bucket, FhtSchedules)
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i)
    {
        size_t n = 1 + rng() % 512;
        uint64_t m = 1 + rng() % 32;
        auto err = oracle::run_fht_schedule([m](const BlockArray &b, Tape &t)
                                            { return std::make_unique<BucketTable>(b, m, t); },
                                            n, 16, rng(), i % 2 == 0);
        ASSERT_EQ(err, "") << "schedule " << i;
    }
}

TEST(Bucket, SaveLoadRoundTrip)
{
    std::mt19937_64 rng(9);
    Tape tape(10);
    auto blocks = oracle::random_blocks(100, 8, 0, rng);
    BucketTable t(blocks, 8, tape);
    t.lookup(blocks.key(0));
    std::stringstream ss;
    t.save(ss);
    auto u = BucketTable::load(ss, tape);
    EXPECT_FALSE(u->lookup(blocks.key(0)));
    EXPECT_TRUE(u->lookup(blocks.key(1)));
}

TEST(BucketPlanner, GoldenSectionFindsMinimum)
{
    int calls = 0;
    auto f = [&](uint64_t m)
    {
        ++calls;
        double x = std::log2(double(m)) - 7.3;
        return x * x;
    };
    uint64_t m = plan_bucket_count(1 << 12, f, 12);
    EXPECT_GE(m, 100u);
    EXPECT_LE(m, 200u);
    EXPECT_LE(calls, 36);
    EXPECT_EQ(plan_bucket_count(1, f), 1u);
}
