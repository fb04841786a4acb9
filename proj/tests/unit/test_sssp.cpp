#include <gtest/gtest.h>

#include <sstream>

#include "o2ram/errors.hpp"
#include "o2ram/sssp.hpp"
#include "o2ram/trace.hpp"

using namespace o2ram;
using namespace o2ram::sssp;

TEST(Sssp, ParsePathGraph)
{
    std::stringstream ss("c path\np sp 3 2\na 1 2 1\na 2 3 1\n");
    Graph g = parse_dimacs(ss);
    EXPECT_EQ(g.V, 3u);
    ASSERT_EQ(g.arcs.size(), 2u);
    EXPECT_EQ(dijkstra(g, 0), (std::vector<uint64_t>{0, 1, 2}));
    ObliviousOptions o;
    o.seed = 1;
    EXPECT_EQ(oblivious_dijkstra(g, 0, o), (std::vector<uint64_t>{0, 1, 2}));
}

TEST(Sssp, ParseErrorsCarryLine)
{
    auto fails_at = [](const std::string &text)
    {
        std::stringstream ss(text);
        try
        {
            parse_dimacs(ss);
        }
        catch (const ParseError &e)
        {
            return e.line;
        }
        return size_t(0);
    };
    EXPECT_EQ(fails_at("p sp 3 1\na 1 x 1\n"), 2u);
    EXPECT_EQ(fails_at("a 1 2 1\n"), 1u);
    EXPECT_EQ(fails_at("p sp 3 1\na 1 4 1\n"), 2u);
    EXPECT_EQ(fails_at("p sp 3 1\na 1 2 -1\n"), 2u);
    EXPECT_EQ(fails_at("p sp 3 2\na 1 2 1\n"), 2u);
    EXPECT_EQ(fails_at("p sp 3 1\nq\n"), 2u);
}

TEST(Sssp, UnreachableIsInfinity)
{
    Graph g;
    g.V = 3;
    g.arcs = {{0, 1, 4}};
    ObliviousOptions o;
    o.seed = 2;
    auto d = oblivious_dijkstra(g, 0, o);
    EXPECT_EQ(d, (std::vector<uint64_t>{0, 4, kInfDist}));
}

TEST(Sssp, RandomGraphsMatchPlainDijkstra)
{
    for (uint64_t seed = 0; seed < 5; ++seed)
    {
        Graph g = random_graph(64, 256, 100, seed);
        ObliviousOptions o;
        o.seed = seed;
        EXPECT_EQ(oblivious_dijkstra(g, 0, o), dijkstra(g, 0)) << "seed " << seed;
    }
}

TEST(Sssp, ShapeIdenticalForEqualSizes)
{
    Graph g1 = random_graph(32, 128, 50, 1), g2 = random_graph(32, 128, 50, 2);
    ObliviousOptions o;
    o.seed = 3;
    trace::Trace t1, t2;
    {
        trace::Session s;
        oblivious_dijkstra(g1, 0, o);
        t1 = s.take();
    }
    {
        trace::Session s;
        oblivious_dijkstra(g2, 5, o);
        t2 = s.take();
    }
    EXPECT_EQ(trace::shape_of(t1), trace::shape_of(t2));
}

TEST(Sssp, WriteParseRoundTrip)
{
    Graph g = random_graph(10, 30, 9, 4);
    std::stringstream ss;
    write_dimacs(ss, g);
    Graph h = parse_dimacs(ss);
    EXPECT_EQ(dijkstra(h, 0), dijkstra(g, 0));
}
