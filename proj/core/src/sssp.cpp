#include "o2ram/sssp.hpp"
#include "o2ram/block.hpp"
#include "o2ram/errors.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

namespace o2ram::sssp
{
    namespace
    {
        uint64_t sat_add(uint64_t a, uint64_t b)
        {
            uint64_t s = a + b;
            return oselect(s < a, kInfDist, s);
        }
    }

    Graph parse_dimacs(std::istream &is)
    {
        Graph g;
        std::string line;
        size_t no = 0;
        bool header = false;
        uint64_t expect = 0;
        while (std::getline(is, line))
        {
            ++no;
            std::istringstream ls(line);
            std::string tag;
            if (!(ls >> tag) || tag == "c")
                continue;
            std::string extra;
            if (tag == "p")
            {
                std::string kind;
                uint64_t V, E;
                if (header || !(ls >> kind >> V >> E) || kind != "sp" || (ls >> extra) || V == 0 ||
                    V > (uint64_t(1) << 31))
                    throw ParseError(no, "bad problem line");
                g.V = uint32_t(V);
                expect = E;
                header = true;
            }
            else if (tag == "a")
            {
                int64_t u, v, w;
                if (!header)
                    throw ParseError(no, "arc before problem line");
                if (!(ls >> u >> v >> w) || (ls >> extra))
                    throw ParseError(no, "bad arc line");
                if (u < 1 || v < 1 || u > int64_t(g.V) || v > int64_t(g.V))
                    throw ParseError(no, "arc endpoint out of range");
                if (w < 0)
                    throw ParseError(no, "negative weight");
                g.arcs.push_back({uint32_t(u - 1), uint32_t(v - 1), uint64_t(w)});
            }
            else
                throw ParseError(no, "unknown line type '" + tag + "'");
        }
        if (!header)
            throw ParseError(no, "missing problem line");
        if (g.arcs.size() != expect)
            throw ParseError(no, "arc count differs from problem line");
        return g;
    }

    void write_dimacs(std::ostream &os, const Graph &g)
    {
        os << "p sp " << g.V << ' ' << g.arcs.size() << '\n';
        for (auto &a : g.arcs)
            os << "a " << a.u + 1 << ' ' << a.v + 1 << ' ' << a.w << '\n';
    }

    Graph random_graph(uint32_t V, uint64_t E, uint64_t max_w, uint64_t seed)
    {
        if (V == 0)
            throw ParameterError("graph needs a vertex");
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<uint32_t> pick(0, V - 1);
        std::uniform_int_distribution<uint64_t> wt(0, max_w);
        Graph g;
        g.V = V;
        for (uint64_t i = 0; i < E; ++i)
            g.arcs.push_back({pick(rng), pick(rng), wt(rng)});
        return g;
    }

    std::vector<uint64_t> dijkstra(const Graph &g, uint32_t src)
    {
        if (src >= g.V)
            throw ParameterError("source out of range");
        std::vector<std::vector<std::pair<uint32_t, uint64_t>>> adj(g.V);
        for (auto &a : g.arcs)
            adj[a.u].push_back({a.v, a.w});
        std::vector<uint64_t> d(g.V, kInfDist);
        using Item = std::pair<uint64_t, uint32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        d[src] = 0;
        pq.push({0, src});
        while (!pq.empty())
        {
            auto [du, u] = pq.top();
            pq.pop();
            if (du != d[u])
                continue;
            for (auto [v, w] : adj[u])
                if (sat_add(du, w) < d[v])
                {
                    d[v] = sat_add(du, w);
                    pq.push({d[v], v});
                }
        }
        return d;
    }

    std::vector<uint64_t> oblivious_dijkstra(const Graph &g, uint32_t src, const ObliviousOptions &opt)
    {
        if (src >= g.V)
            throw ParameterError("source out of range");
        if (opt.beta < 16)
            throw ParameterError("oblivious SSSP needs blocks of at least 16 bytes");
        const uint64_t V = g.V, E = g.arcs.size();

        // CSR: key x -> (first arc, out-degree); key V+p -> (target, weight)
        std::vector<Arc> arcs = g.arcs;
        std::stable_sort(arcs.begin(), arcs.end(), [](auto &a, auto &b)
                         { return a.u < b.u; });
        std::vector<uint64_t> start(V + 1, 0);
        for (auto &a : arcs)
            start[a.u + 1]++;
        for (uint64_t x = 0; x < V; ++x)
            start[x + 1] += start[x];

        OramConfig cfg;
        cfg.N = V + E + 1;
        cfg.beta = opt.beta;
        cfg.top_log = opt.top_log;
        cfg.seed = opt.seed;
        cfg.policy = opt.policy;
        OMap adj(cfg);
        std::vector<uint64_t> buf(opt.beta / 8, 0);
        for (uint64_t x = 0; x < V; ++x)
        {
            buf[0] = start[x];
            buf[1] = start[x + 1] - start[x];
            adj.put_words(x, buf.data());
        }
        for (uint64_t p = 0; p < E; ++p)
        {
            buf[0] = arcs[p].v;
            buf[1] = arcs[p].w;
            adj.put_words(V + p, buf.data());
        }

        struct Row
        {
            uint64_t dist, done;
        };
        std::vector<Row> D(V, Row{kInfDist, 0});
        D[src].dist = 0;
        auto ref = trace::declare(V);

        uint64_t cur = 0, dcur = 0, ptr = 0, rem = 0;
        for (uint64_t step = 0; step < V + E; ++step)
        {
            // pop: minimum of (done, dist, x)
            uint64_t bx = 0, bd = kInfDist, bdone = 1;
            for (uint64_t i = 0; i < V; ++i)
            {
                trace::read(ref, i);
                const Row r = D[i];
                const bool better = (r.done < bdone) | ((r.done == bdone) & (r.dist < bd)) | (i == 0);
                bx = oselect(better, i, bx);
                bd = oselect(better, r.dist, bd);
                bdone = oselect(better, r.done, bdone);
            }
            const bool pop = (rem == 0) & (bdone == 0);
            for (uint64_t i = 0; i < V; ++i)
            {
                trace::read(ref, i);
                D[i].done |= uint64_t(pop & (i == bx));
                trace::write(ref, i);
            }
            adj.get_or_dummy(pop, bx, buf.data());
            cur = oselect(pop, bx, cur);
            dcur = oselect(pop, bd, dcur);
            ptr = oselect(pop, buf[0], ptr);
            rem = oselect(pop, buf[1], rem);

            // relax one arc of cur
            const bool relax = rem > 0;
            adj.get_or_dummy(relax, V + ptr, buf.data());
            const uint64_t v = buf[0], nd = sat_add(dcur, buf[1]);
            for (uint64_t i = 0; i < V; ++i)
            {
                trace::read(ref, i);
                const bool hit = relax & (i == v) & (nd < D[i].dist);
                D[i].dist = oselect(hit, nd, D[i].dist);
                trace::write(ref, i);
            }
            ptr += relax;
            rem -= relax;
        }
        std::vector<uint64_t> out(V);
        for (uint64_t i = 0; i < V; ++i)
            out[i] = D[i].dist;
        return out;
    }
}
