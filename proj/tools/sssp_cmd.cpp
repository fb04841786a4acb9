#include <chrono>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/sssp.hpp"

namespace o2ram::cli
{
    int run_sssp(const SsspArgs &a)
    {
        sssp::Graph g;
        if (!a.graph.empty())
        {
            std::ifstream in(a.graph);
            if (!in)
                throw ParameterError("cannot open " + a.graph);
            g = sssp::parse_dimacs(in);
        }
        else if (a.random_v)
            g = sssp::random_graph(a.random_v, a.random_e ? a.random_e : 4ull * a.random_v, a.max_w, a.seed);
        else
            throw ParameterError("need --graph or --random-v");

        if (a.source < 1 || a.source > g.V)
            throw ParameterError("source out of range");
        const uint32_t src = uint32_t(a.source - 1);

        if (!a.write_graph.empty())
        {
            std::ofstream gout(a.write_graph);
            sssp::write_dimacs(gout, g);
        }

        auto t0 = std::chrono::steady_clock::now();
        std::vector<uint64_t> d;
        if (a.plain)
            d = sssp::dijkstra(g, src);
        else
        {
            sssp::ObliviousOptions opt;
            opt.seed = a.seed;
            d = sssp::oblivious_dijkstra(g, src, opt);
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "V=" << g.V << " E=" << g.arcs.size() << " seconds=" << secs << "\n";

        int rc = 0;
        if (a.check && !a.plain && d != sssp::dijkstra(g, src))
        {
            std::cerr << "mismatch against plain Dijkstra\n";
            rc = 1;
        }

        std::ofstream fout;
        if (!a.out.empty())
            fout.open(a.out);
        std::ostream &os = a.out.empty() ? std::cout : fout;
        for (uint64_t x : d)
        {
            if (x == sssp::kInfDist)
                os << "inf\n";
            else
                os << x << "\n";
        }
        return rc;
    }
}
