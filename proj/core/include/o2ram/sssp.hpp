#pragma once
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "o2ram/horam.hpp"

namespace o2ram::sssp
{
    inline constexpr uint64_t kInfDist = std::numeric_limits<uint64_t>::max();

    struct Arc
    {
        uint32_t u, v;
        uint64_t w;
    };

    struct Graph
    {
        uint32_t V = 0;
        std::vector<Arc> arcs; // 0-based
    };

    // "p sp V E" header, "a u v w" arcs (1-based), "c" comments
    Graph parse_dimacs(std::istream &is);
    void write_dimacs(std::ostream &os, const Graph &g);

    Graph random_graph(uint32_t V, uint64_t E, uint64_t max_w, uint64_t seed);

    std::vector<uint64_t> dijkstra(const Graph &g, uint32_t src);

    struct ObliviousOptions
    {
        size_t beta = 16;
        unsigned top_log = 8;
        std::optional<uint64_t> seed;
        LevelPolicy policy;
    };

    // |V|+|E| steps: each pops (or fakes a pop of) a vertex by linear min-scan
    // and relaxes (or fakes relaxing) one arc; adjacency lives in an OMap.
    std::vector<uint64_t> oblivious_dijkstra(const Graph &g, uint32_t src, const ObliviousOptions &opt = {});
}
