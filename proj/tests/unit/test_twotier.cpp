#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "o2ram_checks/fht.hpp"
#include "oracles.hpp"
#include "o2ram/twotier.hpp"
#include "o2ram/trace.hpp"

using namespace o2ram;

namespace
{
    BlockArray shuffled_blocks(size_t n, size_t beta, std::mt19937_64 &rng, Tape &tape)
    {
        auto b = oracle::random_blocks(n, beta, n / 8, rng);
        oshuffle(b, tape);
        return b;
    }
}

TEST(TwoTier, Caps)
{
    auto c = tier_caps(4096, 0.25);
    EXPECT_EQ(c.keep, 3072u);
    EXPECT_EQ(c.relocate, 2048u);
    EXPECT_THROW(tier_caps(10, 1.0), ParameterError);
}

TEST(TwoTier, EpsilonCandidates)
{
    EXPECT_TRUE(epsilon_candidates(1 << 10, 1024).empty());
    auto c = epsilon_candidates(1 << 20, 1024);
    ASSERT_EQ(c.size(), 5u);
    EXPECT_DOUBLE_EQ(c.front(), 0.5);
    EXPECT_DOUBLE_EQ(c.back(), 1.0 / 32);
    EXPECT_THROW(plan_epsilon(1 << 10, 1024, [](double) { return 1.0; }), SizingError);
    double e = plan_epsilon(1 << 20, 1024, [](double eps) { return std::abs(std::log2(eps) + 3); });
    EXPECT_DOUBLE_EQ(e, 0.125);
}

TEST(TwoTier, SingleMajorBin)
{
    std::mt19937_64 rng(1);
    Tape tape(2);
    auto b = shuffled_blocks(4096, 8, rng, tape);
    TwoTierTable::Options o;
    o.eps = 0.5;
    TwoTierTable t(b, tape, o);
    EXPECT_EQ(t.sizing().bins, 1u);
    for (auto &[k, v] : oracle::reals_of(b))
        ASSERT_EQ(t.lookup(k), v);
}

TEST(TwoTier, AllKeysRetrievable2p16)
{
    std::mt19937_64 rng(3);
    Tape tape(4);
    auto b = shuffled_blocks(1 << 16, 8, rng, tape);
    TwoTierTable::Options o;
    o.eps = 0.125;
    TwoTierTable t(b, tape, o);
    EXPECT_EQ(t.sizing().bins, 1u);
    EXPECT_GT(t.relocated_reals(), 0u);
    for (auto &[k, v] : oracle::reals_of(b))
        ASSERT_EQ(t.lookup(k), v);
    EXPECT_EQ(t.count_real(), 0u);
}

TEST(TwoTier, ManyBinsLinearMajors)
{
    std::mt19937_64 rng(5);
    Tape tape(6);
    auto b = shuffled_blocks(1 << 14, 8, rng, tape);
    TwoTierTable::Options o;
    o.eps = 0.5;
    o.C = 64;
    o.major = Scheme::linear;
    o.overflow = Scheme::bucket;
    TwoTierTable t(b, tape, o);
    EXPECT_EQ(t.sizing().bins, 64u);
    for (auto &[k, v] : oracle::reals_of(b))
        ASSERT_EQ(t.lookup(k), v);
}

TEST(TwoTier, RejectsUnshuffledInput)
{
    std::mt19937_64 rng(7);
    Tape tape(8);
    auto b = oracle::random_blocks(4096, 8, 0, rng);
    TwoTierTable::Options o;
    o.require_shuffled = true;
    EXPECT_THROW(TwoTierTable(b, tape, o), ContractViolation);
}

TEST(TwoTier, RejectsTooSmallEps)
{
    std::mt19937_64 rng(7);
    Tape tape(8);
    auto b = shuffled_blocks(4096, 8, rng, tape);
    TwoTierTable::Options o;
    o.eps = 0.25;
    EXPECT_THROW(TwoTierTable(b, tape, o), ParameterError);
}

TEST(TwoTier, LookupShapeIndependentOfKey)
{
    std::mt19937_64 rng(9);
    Tape tape(10);
    auto b = shuffled_blocks(1 << 13, 8, rng, tape);
    TwoTierTable::Options o;
    o.eps = 0.5;
    o.C = 256;
    TwoTierTable t(b, tape, o);
    std::vector<uint64_t> out(1);
    auto shape = [&](int64_t key)
    {
        trace::Session s;
        t.lookup(key, out.data());
        return trace::shape_of(s.take());
    };
    auto base = shape(kDummyLookup);
    EXPECT_EQ(shape(b.key(0)), base);
    EXPECT_EQ(shape(b.key(1)), base);
    EXPECT_EQ(shape(int64_t(1) << 50), base);
}

TEST(TwoTier, FhtSchedules)
{
    std::mt19937_64 rng(12);
    for (int i = 0; i < 20; ++i)
    {
        size_t n = size_t(1) << (8 + rng() % 5);
        auto eps = epsilon_candidates(n, 64);
        double e = eps[rng() % eps.size()];
        Scheme ovf = i % 3 == 0 ? Scheme::cuckoo : (i % 3 == 1 ? Scheme::bucket : Scheme::linear);
        auto err = oracle::run_fht_schedule([e, ovf](const BlockArray &b, Tape &t)
                                            {
                TwoTierTable::Options o;
                o.eps = e;
                o.C = 64;
                o.overflow = ovf;
                return std::make_unique<TwoTierTable>(b, t, o); },
                                            n, 8, rng(), i % 2 == 0);
        ASSERT_EQ(err, "") << "schedule " << i;
    }
}

TEST(TwoTier, SaveLoadRoundTrip)
{
    std::mt19937_64 rng(14);
    Tape tape(15);
    auto b = shuffled_blocks(4096, 8, rng, tape);
    TwoTierTable::Options o;
    o.eps = 0.5;
    o.C = 256;
    TwoTierTable t(b, tape, o);
    std::stringstream ss;
    t.save(ss);
    auto u = TwoTierTable::load(ss, tape);
    for (auto &[k, v] : oracle::reals_of(b))
        ASSERT_EQ(u->lookup(k), v);
}
