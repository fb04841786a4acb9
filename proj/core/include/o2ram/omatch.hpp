#pragma once
#include <cstdint>
#include <span>
#include <vector>

namespace o2ram
{
    struct Edge
    {
        uint32_t u, v;
    };

    enum class Dir : uint8_t
    {
        r = 0,
        l = 1
    };

    enum class EdgeState : uint8_t
    {
        unknown,
        free,
        alternat,
        alternat_bk
    };

    struct TaggedEdge
    {
        uint32_t u, v;
        uint32_t ctr;
        uint32_t idx;
        Dir dir;
        EdgeState st;
        uint8_t group;
        uint8_t pad[5];
    };
    static_assert(sizeof(TaggedEdge) == 24);

    struct Matching
    {
        std::vector<int64_t> pairs; // left vertex -> right vertex, -1 for none
        uint64_t size() const;
        bool valid_for(std::span<const Edge> edges, uint32_t nR) const;
    };

    // debug instrumentation (not oblivious)
    struct MatchDebug
    {
        std::vector<uint64_t> matched_per_iteration;
        uint64_t stale_alternat_bk = 0; // alternat_bk edges surviving a left scan
    };

    Matching omatch(std::span<const Edge> edges, uint32_t nL, uint32_t nR, uint64_t tau,
                    MatchDebug *dbg = nullptr);

    // edges[g*nL + u] is the g-th edge of left vertex u; right vertices of
    // different groups must be disjoint
    Matching omatch_grouped(std::span<const Edge> edges, uint32_t k, uint32_t nL, uint32_t nR, uint64_t tau,
                            MatchDebug *dbg = nullptr);

    // oblivious count of matched slots
    uint64_t matched_count(const Matching &m);
}
