#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "o2ram/errors.hpp"
#include "o2ram/oprims.hpp"
#include "oracles.hpp"

using namespace o2ram;

namespace
{
    struct IntNet
    {
        std::vector<int> v;
        size_t size() const { return v.size(); }
        void cmp_swap(size_t i, size_t j, bool asc)
        {
            bool sw = asc ? v[j] < v[i] : v[i] < v[j];
            if (sw)
                std::swap(v[i], v[j]);
        }
    };

    BlockArray keyed(const std::vector<int64_t> &keys, size_t beta = 8)
    {
        BlockArray a(keys.size(), beta);
        for (size_t i = 0; i < keys.size(); ++i)
        {
            a.set_key(i, keys[i]);
            a.payload(i)[0] = uint64_t(i);
        }
        return a;
    }
}

// 0-1 principle: a comparator network sorts everything iff it sorts all 0/1 inputs
TEST(Osort, ZeroOnePrincipleAllSizesUpTo16)
{
    for (size_t n = 1; n <= 16; ++n)
        for (uint32_t bits = 0; bits < (1u << n); ++bits)
        {
            IntNet net;
            for (size_t i = 0; i < n; ++i)
                net.v.push_back(int(bits >> i & 1));
            bitonic_sort(net);
            ASSERT_TRUE(std::is_sorted(net.v.begin(), net.v.end())) << "n=" << n << " bits=" << bits;
        }
}

TEST(Osort, RandomBlockArrays)
{
    std::mt19937_64 rng(7);
    for (size_t n : {0, 1, 2, 3, 17, 100, 1000, 5000})
    {
        std::vector<int64_t> keys(n);
        for (auto &k : keys)
            k = int64_t(rng() % 1000) - 500;
        BlockArray a = keyed(keys);
        osort_by_key(a);
        std::sort(keys.begin(), keys.end());
        for (size_t i = 0; i < n; ++i)
            ASSERT_EQ(a.key(i), keys[i]);
    }
}

TEST(Osort, EmptyAndSingleAreNoops)
{
    BlockArray a(0, 8);
    osort_by_key(a);
    EXPECT_EQ(a.size(), 0u);
    BlockArray b = keyed({42});
    osort_by_key(b);
    EXPECT_EQ(b.key(0), 42);
}

TEST(Osort, ThreadedMatchesSequential)
{
    std::mt19937_64 rng(3);
    std::vector<int64_t> keys(20000);
    for (auto &k : keys)
        k = int64_t(rng() >> 2);
    BlockArray a = keyed(keys), b = keyed(keys);
    set_threads(1);
    osort_by_key(a);
    set_threads(4);
    osort_by_key(b);
    set_threads(1);
    for (size_t i = 0; i < keys.size(); ++i)
        ASSERT_EQ(a.key(i), b.key(i));
}

// every mark pattern up to n=12: marked items first, in original order
TEST(Ocompact, ExhaustiveSmall)
{
    for (size_t n = 0; n <= 12; ++n)
        for (uint32_t bits = 0; bits < (1u << n); ++bits)
        {
            std::vector<int> v(n);
            std::iota(v.begin(), v.end(), 0);
            std::vector<uint8_t> marks(n);
            std::vector<int> expect;
            for (size_t i = 0; i < n; ++i)
            {
                marks[i] = bits >> i & 1;
                if (marks[i])
                    expect.push_back(int(i));
            }
            orcompact(marks, [&](size_t i, size_t j, bool c)
                      { if (c) std::swap(v[i], v[j]); });
            for (size_t i = 0; i < expect.size(); ++i)
                ASSERT_EQ(v[i], expect[i]) << "n=" << n << " bits=" << bits;
        }
}

TEST(Ocompact, BlockArrayKeepsOrder)
{
    std::mt19937_64 rng(11);
    for (size_t n : {1, 5, 64, 1000, 4097})
    {
        BlockArray a(n, 16);
        std::vector<uint64_t> expect;
        for (size_t i = 0; i < n; ++i)
        {
            a.set_key(i, int64_t(i + 1));
            bool m = rng() & 1;
            a.set_aux(i, m);
            if (m)
                expect.push_back(i + 1);
        }
        ocompact(a);
        for (size_t i = 0; i < expect.size(); ++i)
            ASSERT_EQ(uint64_t(a.key(i)), expect[i]);
    }
}

TEST(Ocompact, RelaxedOnShuffledHalf)
{
    Tape tape(5);
    for (size_t n : {1024, 4096, 10000})
    {
        BlockArray a(n, 8);
        for (size_t i = 0; i < n; ++i)
            a.set_key(i, int64_t(i + 1));
        oshuffle(a, tape);
        std::set<int64_t> expect;
        for (size_t i = 0; i < n; ++i)
        {
            bool m = a.key(i) <= int64_t(n / 2);
            a.set_aux(i, m);
            if (m)
                expect.insert(a.key(i));
        }
        ocompact_relaxed(a, 512);
        std::set<int64_t> got;
        for (size_t i = 0; i < expect.size(); ++i)
            got.insert(a.key(i));
        EXPECT_EQ(got, expect);
    }
}

TEST(Ocompact, RelaxedDetectsSkewedChunk)
{
    BlockArray a(2048, 8);
    for (size_t i = 0; i < 2048; ++i)
        a.set_aux(i, i < 1024);
    EXPECT_THROW(ocompact_relaxed(a, 256), CompactionOverflow);
    EXPECT_THROW(ocompact_relaxed(a, 2), ParameterError);
}

TEST(Oshuffle, PermutationAndRoughUniformity)
{
    Tape tape(1);
    // position of item 0 over many shuffles of 8 items
    std::vector<uint64_t> pos;
    for (int t = 0; t < 4000; ++t)
    {
        BlockArray a = keyed({1, 2, 3, 4, 5, 6, 7, 8});
        oshuffle(a, tape);
        EXPECT_TRUE(a.shuffled());
        std::vector<int64_t> ks;
        for (size_t i = 0; i < 8; ++i)
        {
            ks.push_back(a.key(i));
            if (a.key(i) == 1)
                pos.push_back(i);
        }
        std::sort(ks.begin(), ks.end());
        ASSERT_EQ(ks, (std::vector<int64_t>{1, 2, 3, 4, 5, 6, 7, 8}));
    }
    EXPECT_EQ(trace::uniformity_test(pos, 8, 0.001), trace::Verdict::pass);
}

TEST(Oshuffle, SameSeedSameOutput)
{
    Tape t1(99), t2(99);
    BlockArray a = keyed({1, 2, 3, 4, 5, 6, 7, 8, 9}), b = a;
    oshuffle(a, t1);
    oshuffle(b, t2);
    for (size_t i = 0; i < 9; ++i)
        EXPECT_EQ(a.key(i), b.key(i));
}

TEST(Ointersperse, KeepsMultisetAndMixes)
{
    Tape tape(4);
    std::vector<uint64_t> firstpos;
    for (int t = 0; t < 3000; ++t)
    {
        BlockArray a = keyed({1, 2, 3}), b = keyed({10, 11, 12, 13, 14});
        oshuffle(a, tape);
        oshuffle(b, tape);
        BlockArray c = ointersperse(a, b, tape);
        ASSERT_EQ(c.size(), 8u);
        EXPECT_TRUE(c.shuffled());
        std::multiset<int64_t> ks;
        for (size_t i = 0; i < 8; ++i)
        {
            ks.insert(c.key(i));
            if (c.key(i) == 1)
                firstpos.push_back(i);
        }
        ASSERT_EQ(ks, (std::multiset<int64_t>{1, 2, 3, 10, 11, 12, 13, 14}));
    }
    EXPECT_EQ(trace::uniformity_test(firstpos, 8, 0.001), trace::Verdict::pass);
}

TEST(Ointersperse, EmptySides)
{
    Tape tape(4);
    BlockArray a = keyed({1, 2}), e(0, 8);
    EXPECT_EQ(ointersperse(a, e, tape).size(), 2u);
    EXPECT_EQ(ointersperse(e, a, tape).size(), 2u);
    EXPECT_EQ(ointersperse(e, e, tape).size(), 0u);
}

TEST(ObinPlace, PlacesAndPads)
{
    BlockArray a = keyed({5, 6, 7, kDummyKey, 8});
    uint64_t bins[] = {2, 0, 2, 1, 1};
    for (size_t i = 0; i < 5; ++i)
        a.set_aux(i, bins[i]);
    BlockArray out = obin_place(a, 3, 2);
    ASSERT_EQ(out.size(), 6u);
    std::map<int64_t, size_t> where;
    for (size_t i = 0; i < 6; ++i)
        if (is_real(out.key(i)))
            where[out.key(i)] = i / 2;
    EXPECT_EQ(where.at(5), 2u);
    EXPECT_EQ(where.at(6), 0u);
    EXPECT_EQ(where.at(7), 2u);
    EXPECT_EQ(where.at(8), 1u);
    EXPECT_EQ(where.size(), 4u);
    EXPECT_EQ(out.aux(0), 0u);
}

TEST(ObinPlace, OverflowThrows)
{
    BlockArray a = keyed({1, 2, 3});
    for (size_t i = 0; i < 3; ++i)
        a.set_aux(i, 0);
    EXPECT_THROW(obin_place(a, 2, 2), BinOverflow);
    EXPECT_THROW(obin_place(a, 0, 2), ParameterError);
}
