#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "o2ram/errors.hpp"
#include "o2ram/horam.hpp"
#include "o2ram/trace.hpp"

using namespace o2ram;

namespace
{
    std::vector<uint8_t> val(uint64_t x, size_t beta)
    {
        std::vector<uint8_t> v(beta, 0);
        std::memcpy(v.data(), &x, std::min<size_t>(8, beta));
        return v;
    }

    OramConfig cfg(uint64_t N, uint64_t seed, unsigned top_log = 4, size_t beta = 16)
    {
        OramConfig c;
        c.N = N;
        c.beta = beta;
        c.top_log = top_log;
        c.seed = seed;
        c.ledger_check = true;
        return c;
    }

    // random reads/writes against a plain array
    void run_against_array(Oram &o, uint64_t ops, std::mt19937_64 &rng)
    {
        std::vector<std::vector<uint8_t>> ref(o.N(), std::vector<uint8_t>(o.beta(), 0));
        for (uint64_t i = 0; i < ops; ++i)
        {
            uint64_t a = rng() % o.N();
            if (rng() & 1)
            {
                auto v = val(rng(), o.beta());
                ASSERT_EQ(o.write(a, v), v);
                ref[a] = v;
            }
            else
                ASSERT_EQ(o.read(a), ref[a]) << "op " << i << " addr " << a;
        }
    }
}

TEST(Oram, ZeroInitialized)
{
    Oram o(cfg(8, 1, 1));
    for (uint64_t a = 0; a < 8; ++a)
        EXPECT_EQ(o.read(a), std::vector<uint8_t>(16, 0));
}

TEST(Oram, WriteThenRead)
{
    Oram o(cfg(64, 2));
    auto x = val(0xabcdef, 16);
    o.write(3, x);
    EXPECT_EQ(o.read(3), x);
}

TEST(Oram, InitValuesAndErrors)
{
    std::vector<std::pair<uint64_t, std::vector<uint8_t>>> init{{0, val(9, 16)}, {5, val(7, 16)}};
    Oram o(cfg(8, 3, 1), init);
    EXPECT_EQ(o.read(5), val(7, 16));
    EXPECT_EQ(o.read(0), val(9, 16));
    EXPECT_THROW(o.read(8), ParameterError);
    std::vector<std::pair<uint64_t, std::vector<uint8_t>>> dup{{1, {}}, {1, {}}};
    EXPECT_THROW(Oram(cfg(8, 3), dup), InitError);
    std::vector<std::pair<uint64_t, std::vector<uint8_t>>> many;
    for (uint64_t i = 0; i < 9; ++i)
        many.push_back({i % 8, {}});
    EXPECT_THROW(Oram(cfg(8, 3), many), InitError);
}

TEST(Oram, MatchesArrayOracleAcrossRebuilds)
{
    for (uint64_t N : {2, 16, 256, 1024})
    {
        std::mt19937_64 rng(N);
        Oram o(cfg(N, N + 1));
        run_against_array(o, 4 * N, rng);
    }
}

TEST(Oram, NonPowerOfTwoCapacityRoundsUp)
{
    Oram o(cfg(100, 4));
    EXPECT_EQ(o.N(), 128u);
}

TEST(Oram, RebuildCadence)
{
    const uint64_t N = 256;
    Oram o(cfg(N, 5, 3));
    const unsigned l0 = o.levels().top_level(), L = o.levels().L();
    const uint64_t ops = 4 * N;
    for (uint64_t i = 0; i < ops; ++i)
        o.read(i % N);
    const auto &r = o.levels().stats().rebuilds;
    // level i (l0 < i < L) is built once every 2^i accesses; the bottom
    // once at init and then every 2^(L-1)
    for (unsigned i = l0 + 1; i < L; ++i)
        EXPECT_EQ(r[i], ops >> i) << "level " << i;
    EXPECT_EQ(r[L], 1 + (ops >> (L - 1)));
    EXPECT_EQ(o.levels().stats().accesses, ops);
}

TEST(Oram, ProbesTurnDummyAfterHit)
{
    Oram o(cfg(256, 6, 3));
    std::mt19937_64 rng(6);
    for (int i = 0; i < 600; ++i)
    {
        o.read(rng() % 256);
        const auto &p = o.levels().last_probes();
        bool hit_seen = false;
        for (uint8_t real : p)
        {
            if (hit_seen)
                EXPECT_EQ(real, 0);
            hit_seen |= real == 0;
        }
    }
}

TEST(Oram, AccessShapeDependsOnPublicStateOnly)
{
    Oram a(cfg(256, 7, 3)), b(cfg(256, 7, 3));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i)
    {
        uint64_t x = rng() % 256, y = rng() % 256;
        trace::Trace ta, tb;
        {
            trace::Session s;
            a.read(x);
            ta = s.take();
        }
        {
            trace::Session s;
            b.write(y, val(i, 16));
            tb = s.take();
        }
        ASSERT_EQ(trace::shape_of(ta), trace::shape_of(tb)) << "access " << i;
    }
}

TEST(Oram, PlannedPolicyWithOtherSchemes)
{
    auto c = cfg(1024, 8, 4);
    c.policy = [](unsigned level, size_t)
    {
        SchemeSpec s;
        s.scheme = level % 2 ? Scheme::cuckoo : Scheme::linear;
        return s;
    };
    Oram o(c);
    std::mt19937_64 rng(8);
    run_against_array(o, 2048, rng);
}

TEST(Oram, TwoTierBottomLevel)
{
    auto c = cfg(1 << 13, 9, 8, 8);
    c.policy = [](unsigned level, size_t b)
    {
        if (level < 13)
            return default_level_policy(level, b);
        SchemeSpec s;
        s.scheme = Scheme::twotier;
        s.eps = 0.5;
        return s;
    };
    Oram o(c);
    std::mt19937_64 rng(9);
    run_against_array(o, 1 << 14, rng);
    EXPECT_EQ(o.levels().level_scheme(13), Scheme::twotier);
}

TEST(Oram, SnapshotRoundTrip)
{
    Oram o(cfg(128, 10, 3));
    std::mt19937_64 rng(10);
    std::vector<std::vector<uint8_t>> ref(128, std::vector<uint8_t>(16, 0));
    for (int i = 0; i < 300; ++i)
    {
        uint64_t a = rng() % 128;
        ref[a] = val(rng(), 16);
        o.write(a, ref[a]);
    }
    std::stringstream ss;
    o.save(ss);
    Oram p = Oram::load(ss);
    for (uint64_t a = 0; a < 128; ++a)
        ASSERT_EQ(p.read(a), ref[a]);
    std::stringstream bad("not a snapshot");
    EXPECT_THROW(Oram::load(bad), ParameterError);
}

TEST(OMap, LargeKeysAndAbsent)
{
    OMap m(cfg(64, 11));
    m.put(1000000007, val(5, 16));
    EXPECT_EQ(m.get(1000000007), val(5, 16));
    EXPECT_FALSE(m.get(12));
    EXPECT_THROW(m.get(uint64_t(1) << 62), ParameterError);
}

TEST(OMap, MatchesReferenceMap)
{
    OMap m(cfg(1 << 10, 12, 5));
    std::map<uint64_t, std::vector<uint8_t>> ref;
    std::mt19937_64 rng(12);
    std::vector<uint64_t> keys;
    for (int i = 0; i < 1 << 10; ++i)
        keys.push_back(rng() >> 3);
    for (int i = 0; i < 1 << 13; ++i)
    {
        uint64_t k = keys[rng() % keys.size()];
        if (rng() % 3 == 0)
        {
            auto v = val(rng(), 16);
            m.put(k, v);
            ref[k] = v;
        }
        else
        {
            auto got = m.get(k);
            auto it = ref.find(k);
            ASSERT_EQ(got.has_value(), it != ref.end());
            if (got)
                ASSERT_EQ(*got, it->second);
        }
    }
}

TEST(OMap, CapacityError)
{
    OMap m(cfg(4, 13, 1));
    for (uint64_t k = 0; k < 4; ++k)
        m.put(k, val(k, 16));
    EXPECT_THROW(m.put(99, val(1, 16)), CapacityError);
    m.put(2, val(22, 16));
    EXPECT_EQ(m.get(2), val(22, 16));
}
