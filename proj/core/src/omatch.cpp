#include "o2ram/omatch.hpp"
#include "o2ram/block.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/oprims.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace o2ram
{
    namespace
    {
        using u128 = unsigned __int128;
        constexpr uint32_t kCtrMax = (1u << 24) - 1;

        // u, dir=l first, st=free first, ctr ascending, then v, idx
        inline u128 left_key(const TaggedEdge &e)
        {
            u128 k = e.u;
            k = (k << 1) | uint64_t(e.dir != Dir::l);
            k = (k << 1) | uint64_t(e.st != EdgeState::free);
            k = (k << 24) | e.ctr;
            k = (k << 32) | e.v;
            k = (k << 32) | e.idx;
            return k;
        }

        // v, dir=l first, ctr descending, then u, idx
        inline u128 right_key(const TaggedEdge &e)
        {
            u128 k = e.v;
            k = (k << 1) | uint64_t(e.dir != Dir::l);
            k = (k << 24) | (kCtrMax - e.ctr);
            k = (k << 32) | e.u;
            k = (k << 32) | e.idx;
            return k;
        }

        template <class T>
        T sel(bool c, T a, T b)
        {
            return T(oselect(c, uint64_t(a), uint64_t(b)));
        }

        // Left scan over edges grouped by u (rows sorted by left_key).
        // e0 lives in a register; its final state is written back to the
        // group's first row by a backward pass so every row is touched twice.
        void left_scan(std::span<TaggedEdge> E, const trace::ArrayRef &ref, size_t base,
                       std::vector<TaggedEdge> &fin)
        {
            const size_t N = E.size();
            if (N == 0)
                return;
            fin.resize(N);
            TaggedEdge e0{};
            for (size_t i = 0; i < N; ++i)
            {
                trace::read(ref, base + i);
                TaggedEdge e = E[i];
                const bool first = i == 0 || E[i - 1].u != e.u;
                const bool last = i + 1 == N || E[i + 1].u != e.u;
                // first edge of a group: claim it
                TaggedEdge a = e;
                a.ctr += a.dir == Dir::r;
                a.dir = Dir::l;
                // later edge: augment when free and the claimed edge alternates
                const bool aug = !first & (e.st == EdgeState::free) & (e0.st == EdgeState::alternat);
                TaggedEdge b = e;
                b.dir = sel(aug, Dir::l, e.dir);
                b.ctr += aug;
                b.st = sel(aug, EdgeState::unknown, e.st);
                TaggedEdge z0 = e0;
                z0.dir = sel(aug, Dir::r, e0.dir);
                z0.st = sel(aug, EdgeState::unknown, e0.st);

                cmov_pod(b, a, first);
                cmov_pod(z0, b, first);
                e0 = z0;
                E[i] = b;
                // closing the group: a backed-up alternation becomes active
                e0.st = sel(last & (e0.st == EdgeState::alternat_bk), EdgeState::alternat, e0.st);
                fin[i] = e0;
                trace::write(ref, base + i);
            }
            TaggedEdge carry{};
            for (size_t i = N; i-- > 0;)
            {
                trace::read(ref, base + i);
                const bool last = i + 1 == N || E[i + 1].u != E[i].u;
                const bool first = i == 0 || E[i - 1].u != E[i].u;
                cmov_pod(carry, fin[i], last);
                TaggedEdge e = E[i];
                e.dir = sel(first, carry.dir, e.dir);
                e.st = sel(first, carry.st, e.st);
                E[i] = e;
                trace::write(ref, base + i);
            }
        }

        // odd-even transposition network for the k-edge columns
        template <class KeyFn>
        void small_sort(std::span<TaggedEdge> C, const trace::ArrayRef &ref, KeyFn key)
        {
            const size_t k = C.size();
            for (size_t r = 0; r < k; ++r)
                for (size_t i = r & 1; i + 1 < k; i += 2)
                {
                    trace::read(ref, i);
                    trace::read(ref, i + 1);
                    cswap_pod(C[i], C[i + 1], key(C[i + 1]) < key(C[i]));
                    trace::write(ref, i);
                    trace::write(ref, i + 1);
                }
        }

        // Right scan over edges grouped by v (rows sorted by right_key).
        void right_scan(std::span<TaggedEdge> E, const trace::ArrayRef &ref, size_t base)
        {
            const size_t N = E.size();
            if (N == 0)
                return;
            std::vector<uint8_t> fin(N);
            EdgeState st = EdgeState::unknown, e0st = EdgeState::unknown;
            for (size_t i = 0; i < N; ++i)
            {
                trace::read(ref, base + i);
                TaggedEdge e = E[i];
                const bool first = i == 0 || E[i - 1].v != e.v;
                st = sel(first, sel(e.dir == Dir::r, EdgeState::free, EdgeState::unknown), st);
                e.st = st;
                const bool race = !first & (e.dir == Dir::l);
                e0st = sel(first, st, sel(race, EdgeState::alternat_bk, e0st));
                e.dir = sel(race, Dir::r, e.dir);
                E[i] = e;
                fin[i] = uint8_t(e0st);
                trace::write(ref, base + i);
            }
            EdgeState carry = EdgeState::unknown;
            for (size_t i = N; i-- > 0;)
            {
                trace::read(ref, base + i);
                const bool last = i + 1 == N || E[i + 1].v != E[i].v;
                const bool first = i == 0 || E[i - 1].v != E[i].v;
                carry = sel(last, EdgeState(fin[i]), carry);
                E[i].st = sel(first, carry, E[i].st);
                trace::write(ref, base + i);
            }
        }

        // Group sorts on 16-byte records: a 64-bit sort key plus the
        // remaining fields. Within a group every u is distinct, so these keys
        // order rows exactly as left_key / right_key do.
        struct Packed
        {
            uint64_t key, pay;
        };

        struct GroupPacker
        {
            uint32_t nL;
            unsigned bu, bc; // bits for u and for ctr
            bool fits;

            GroupPacker(uint32_t nL, uint32_t nR, uint64_t tau) : nL(nL)
            {
                bu = std::max(1, int(std::bit_width(uint64_t(nL))));
                bc = std::max(1, int(std::bit_width(tau)));
                unsigned bv = std::max(1, int(std::bit_width(uint64_t(nR))));
                fits = bv + 1 + bc + bu <= 64;
            }

            static uint64_t pay(const TaggedEdge &e)
            {
                return uint64_t(e.st) | uint64_t(e.dir) << 2 | uint64_t(e.group) << 3 | uint64_t(e.ctr) << 11;
            }

            void fields(TaggedEdge &e, uint64_t p) const
            {
                e.st = EdgeState(p & 3);
                e.dir = Dir((p >> 2) & 1);
                e.group = uint8_t(p >> 3);
                e.ctr = uint32_t(p >> 11);
                e.idx = e.group * nL + e.u;
            }

            uint64_t right(const TaggedEdge &e) const
            {
                const uint64_t cmax = (uint64_t(1) << bc) - 1;
                return (uint64_t(e.v) << (1 + bc + bu)) | uint64_t(e.dir != Dir::l) << (bc + bu) |
                       (cmax - e.ctr) << bu | e.u;
            }

            template <class KeyFn, class Unkey>
            void sort(std::span<TaggedEdge> G, const trace::ArrayRef &ref, size_t base, std::vector<Packed> &P,
                      const trace::ArrayRef &pref, KeyFn key, Unkey unkey) const
            {
                P.resize(G.size());
                for (size_t i = 0; i < G.size(); ++i)
                {
                    trace::read(ref, base + i);
                    P[i] = Packed{key(G[i]), pay(G[i])};
                    trace::write(pref, i);
                }
                osort(std::span<Packed>(P), pref, 0, [](const Packed &p)
                      { return p.key; });
                for (size_t i = 0; i < G.size(); ++i)
                {
                    trace::read(pref, i);
                    TaggedEdge e{};
                    unkey(e, P[i].key);
                    fields(e, P[i].pay);
                    G[i] = e;
                    trace::write(ref, base + i);
                }
            }
        };

        // M from the dir=l edges: sort edges with one sentinel per left
        // vertex, keep the first record of each u, compact.
        Matching materialize(std::span<const TaggedEdge> E, uint32_t nL)
        {
            struct Rec
            {
                uint64_t key; // u << 2 | rank
                int64_t v;
            };
            std::vector<Rec> R(E.size() + nL);
            auto ref = trace::declare(R.size());
            for (size_t i = 0; i < E.size(); ++i)
            {
                uint64_t rank = oselect(E[i].dir == Dir::l, uint64_t(0), uint64_t(2));
                R[i] = Rec{(uint64_t(E[i].u) << 2) | rank, int64_t(E[i].v)};
                trace::write(ref, i);
            }
            for (uint32_t u = 0; u < nL; ++u)
            {
                R[E.size() + u] = Rec{(uint64_t(u) << 2) | 1, -1};
                trace::write(ref, E.size() + u);
            }
            osort(std::span<Rec>(R), ref, 0, [](const Rec &r)
                  { return r.key; });
            std::vector<uint8_t> keep(R.size());
            for (size_t i = 0; i < R.size(); ++i)
            {
                trace::read(ref, i);
                keep[i] = i == 0 || (R[i - 1].key >> 2) != (R[i].key >> 2);
                R[i].v = oselect(bool((R[i].key & 3) == 0), R[i].v, int64_t(-1));
                R[i].key = (R[i].key & ~uint64_t(1)) | keep[i];
                trace::write(ref, i);
            }
            ocompact(std::span<Rec>(R), ref, 0, [](const Rec &r)
                     { return bool(r.key & 1); });
            Matching M;
            M.pairs.resize(nL);
            for (uint32_t u = 0; u < nL; ++u)
            {
                trace::read(ref, u);
                M.pairs[u] = R[u].v;
            }
            return M;
        }

        uint64_t count_left(std::span<const TaggedEdge> E)
        {
            std::set<uint32_t> s;
            for (auto &e : E)
                if (e.dir == Dir::l)
                    s.insert(e.u);
            return s.size();
        }

        uint64_t count_bk(std::span<const TaggedEdge> E)
        {
            uint64_t c = 0;
            for (auto &e : E)
                c += e.st == EdgeState::alternat_bk;
            return c;
        }

        std::vector<TaggedEdge> tag(std::span<const Edge> edges, uint32_t nL, uint32_t nR, uint64_t tau)
        {
            if (tau < 1)
                throw ParameterError("omatch: tau must be at least 1");
            if (tau > kCtrMax)
                throw ParameterError("omatch: tau too large");
            std::vector<TaggedEdge> E(edges.size());
            for (size_t i = 0; i < edges.size(); ++i)
            {
                if (edges[i].u >= nL || edges[i].v >= nR)
                    throw ParameterError("omatch: edge endpoint out of range");
                E[i] = TaggedEdge{edges[i].u, edges[i].v, 0, uint32_t(i), Dir::r, EdgeState::unknown, 0, {}};
            }
            return E;
        }
    }

    uint64_t Matching::size() const
    {
        uint64_t c = 0;
        for (auto v : pairs)
            c += v >= 0;
        return c;
    }

    bool Matching::valid_for(std::span<const Edge> edges, uint32_t nR) const
    {
        std::set<std::pair<uint32_t, uint32_t>> es;
        for (auto &e : edges)
            es.insert({e.u, e.v});
        std::vector<uint8_t> used(nR, 0);
        for (size_t u = 0; u < pairs.size(); ++u)
        {
            if (pairs[u] < 0)
                continue;
            if (pairs[u] >= int64_t(nR) || used[pairs[u]]++ || !es.count({uint32_t(u), uint32_t(pairs[u])}))
                return false;
        }
        return true;
    }

    uint64_t matched_count(const Matching &m)
    {
        uint64_t c = 0;
        for (auto v : m.pairs)
            c += uint64_t(v >= 0);
        return c;
    }

    Matching omatch(std::span<const Edge> edges, uint32_t nL, uint32_t nR, uint64_t tau, MatchDebug *dbg)
    {
        auto E = tag(edges, nL, nR, tau);
        auto ref = trace::declare(E.size());
        std::span<TaggedEdge> S(E);
        std::vector<TaggedEdge> fin;
        for (uint64_t t = 0; t < tau; ++t)
        {
            osort(S, ref, 0, [](const TaggedEdge &e)
                  { return left_key(e); });
            left_scan(S, ref, 0, fin);
            if (dbg)
                dbg->stale_alternat_bk += count_bk(S);
            osort(S, ref, 0, [](const TaggedEdge &e)
                  { return right_key(e); });
            right_scan(S, ref, 0);
            if (dbg)
                dbg->matched_per_iteration.push_back(count_left(S));
        }
        return materialize(E, nL);
    }

    Matching omatch_grouped(std::span<const Edge> edges, uint32_t k, uint32_t nL, uint32_t nR, uint64_t tau,
                            MatchDebug *dbg)
    {
        if (k == 0 || k > 255 || edges.size() != size_t(k) * nL)
            throw ParameterError("omatch_grouped: expected k groups of nL edges");
        auto E = tag(edges, nL, nR, tau);
        for (uint32_t g = 0; g < k; ++g)
            for (uint32_t u = 0; u < nL; ++u)
            {
                if (E[size_t(g) * nL + u].u != u)
                    throw ParameterError("omatch_grouped: group rows must be ordered by left vertex");
                E[size_t(g) * nL + u].group = uint8_t(g);
            }
        auto ref = trace::declare(E.size());
        auto group = [&](uint32_t g)
        { return std::span<TaggedEdge>(E.data() + size_t(g) * nL, nL); };
        std::vector<TaggedEdge> col(k), fin;
        auto col_ref = trace::declare(k);
        const GroupPacker pk(nL, nR, tau);
        std::vector<Packed> P;
        auto pref = trace::declare(nL);
        const uint64_t umask = (uint64_t(1) << pk.bu) - 1;
        const unsigned vshift = 1 + pk.bc + pk.bu;
        for (uint64_t t = 0; t < tau; ++t)
        {
            // every group holds each u exactly once, so sorting by u alone
            // leaves row u of every group on vertex u
            for (uint32_t g = 0; g < k; ++g)
                pk.sort(group(g), ref, size_t(g) * nL, P, pref, [](const TaggedEdge &e)
                        { return uint64_t(e.u) << 32 | e.v; }, [](TaggedEdge &e, uint64_t key)
                        { e.u = uint32_t(key >> 32), e.v = uint32_t(key); });
            for (uint32_t u = 0; u < nL; ++u)
            {
                for (uint32_t g = 0; g < k; ++g)
                {
                    trace::read(ref, size_t(g) * nL + u);
                    col[g] = E[size_t(g) * nL + u];
                }
                std::span<TaggedEdge> C(col);
                small_sort(C, col_ref, [](const TaggedEdge &e)
                           { return left_key(e); });
                left_scan(C, col_ref, 0, fin);
                small_sort(C, col_ref, [](const TaggedEdge &e)
                           { return e.group; });
                for (uint32_t g = 0; g < k; ++g)
                {
                    E[size_t(g) * nL + u] = col[g];
                    trace::write(ref, size_t(g) * nL + u);
                }
            }
            if (dbg)
                dbg->stale_alternat_bk += count_bk(E);
            for (uint32_t g = 0; g < k; ++g)
            {
                if (pk.fits)
                    pk.sort(group(g), ref, size_t(g) * nL, P, pref, [&](const TaggedEdge &e)
                            { return pk.right(e); }, [&](TaggedEdge &e, uint64_t key)
                            { e.u = uint32_t(key & umask), e.v = uint32_t(key >> vshift); });
                else
                    osort(group(g), ref, size_t(g) * nL, [](const TaggedEdge &e)
                          { return right_key(e); });
                right_scan(group(g), ref, size_t(g) * nL);
            }
            if (dbg)
                dbg->matched_per_iteration.push_back(count_left(E));
        }
        return materialize(E, nL);
    }
}
