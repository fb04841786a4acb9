#pragma once
// Matching oracles, plus the shared table models.
#include <cstdint>
#include <random>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "o2ram/omatch.hpp"
#include "o2ram_checks/oracles.hpp"

namespace oracle
{
    inline uint64_t max_matching(const std::vector<o2ram::Edge> &edges, uint32_t nL, uint32_t nR)
    {
        using G = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
        G g(nL + nR);
        for (auto &e : edges)
            boost::add_edge(e.u, nL + e.v, g);
        std::vector<boost::graph_traits<G>::vertex_descriptor> mate(nL + nR);
        boost::edmonds_maximum_cardinality_matching(g, &mate[0]);
        return boost::matching_size(g, &mate[0]);
    }

    // k candidate slots per left vertex in disjoint sub-tables of [0, max(2n,k))
    inline std::vector<o2ram::Edge> cuckoo_graph(uint32_t n, uint32_t k, std::mt19937_64 &rng, uint32_t &nR)
    {
        nR = std::max<uint32_t>(2 * n, k);
        uint32_t b = nR / k;
        std::vector<o2ram::Edge> e;
        for (uint32_t j = 0; j < k; ++j)
        {
            uint32_t size = j + 1 < k ? b : nR - b * (k - 1);
            for (uint32_t i = 0; i < n; ++i)
                e.push_back({i, uint32_t(rng() % size) + j * b});
        }
        return e;
    }
}
