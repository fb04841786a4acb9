#include <gtest/gtest.h>

#include <sstream>

#include "o2ram/errors.hpp"
#include "o2ram/trace.hpp"

using namespace o2ram;
using namespace o2ram::trace;

TEST(Trace, RecordsOnlyInsideSession)
{
    auto a = declare(10);
    read(a, 3);
    Session s;
    read(a, 1);
    write(a, 2, 4, Derived::prf_derived);
    ASSERT_EQ(s.trace().records.size(), 2u);
    EXPECT_EQ(s.trace().records[1].span, 4u);
    EXPECT_EQ(s.trace().records[1].op, Op::write);
}

TEST(Trace, ArrayIdsRenumberedByFirstTouch)
{
    Trace t1, t2;
    {
        Session s;
        auto a = declare(4), b = declare(4);
        read(b, 0);
        read(a, 0);
        t1 = s.take();
    }
    {
        Session s;
        auto a = declare(4), b = declare(4);
        read(a, 0);
        read(b, 0);
        t2 = s.take();
    }
    EXPECT_EQ(t1.records, t2.records);
}

TEST(Trace, OutOfBoundsIsContractViolation)
{
    Session s;
    auto a = declare(4);
    EXPECT_THROW(read(a, 4), ContractViolation);
    EXPECT_THROW(read(a, 2, 3), ContractViolation);
}

TEST(Trace, ShapeMasksDerivedIndices)
{
    Trace t1, t2;
    auto a = declare(100);
    {
        Session s;
        read(a, 7, 1, Derived::prf_derived);
        read(a, 3);
        t1 = s.take();
    }
    {
        Session s;
        read(a, 42, 1, Derived::prf_derived);
        read(a, 3);
        t2 = s.take();
    }
    EXPECT_NE(t1.records, t2.records);
    EXPECT_TRUE(assert_shape_equal(shape_of(t1), shape_of(t2)));
    {
        Session s;
        read(a, 42, 1, Derived::prf_derived);
        read(a, 4);
        t2 = s.take();
    }
    EXPECT_FALSE(assert_shape_equal(shape_of(t1), shape_of(t2)));
}

TEST(Trace, DigestFollowsShape)
{
    auto run = [](uint64_t fixed, uint64_t secret)
    {
        auto a = declare(100);
        Session s(Session::Mode::digest);
        read(a, fixed);
        write(a, secret, 1, Derived::prf_derived);
        read(a, 0, 100);
        EXPECT_TRUE(s.trace().records.empty());
        return s.digest();
    };
    auto d = run(3, 40);
    EXPECT_EQ(d.records, 3u);
    EXPECT_EQ(d, run(3, 77));
    EXPECT_NE(d, run(4, 40));

    Session s(Session::Mode::digest);
    s.digest();
    EXPECT_THROW(s.digest(), ContractViolation);
    Session plain;
    EXPECT_THROW(plain.digest(), ContractViolation);
}

TEST(Trace, DumpLoadRoundTrip)
{
    Trace t;
    {
        Session s;
        s.set_param("n", 16);
        auto a = declare(16);
        write(a, 5, 2, Derived::random_tape);
        read(a, 0);
        t = s.take();
    }
    std::stringstream ss;
    dump(ss, t);
    Trace u = load(ss);
    EXPECT_EQ(u.records, t.records);
    EXPECT_EQ(u.public_params, t.public_params);
}

TEST(Trace, LoadRejectsGarbage)
{
    std::stringstream ss("n=1\n--\n0 r x 1 fixed\n");
    EXPECT_THROW(load(ss), ParseError);
}

TEST(Uniformity, Contract)
{
    std::vector<uint64_t> one{0};
    EXPECT_EQ(uniformity_test(one, 2, 0.001), Verdict::pass);
    std::vector<uint64_t> none;
    EXPECT_THROW(uniformity_test(none, 2, 0.001), ParameterError);
    EXPECT_THROW(uniformity_test(one, 1, 0.001), ParameterError);
    std::vector<uint64_t> skew(10000, 3);
    EXPECT_EQ(uniformity_test(skew, 16, 0.001), Verdict::fail);
    std::vector<uint64_t> flat;
    for (int i = 0; i < 16000; ++i)
        flat.push_back(i % 16);
    EXPECT_EQ(uniformity_test(flat, 16, 0.001), Verdict::pass);
}
