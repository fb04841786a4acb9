#include "o2ram_checks/checks.hpp"

#include <algorithm>
#include <cstring>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <set>

#include "o2ram/bucket.hpp"
#include "o2ram/cuckoo.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/omatch.hpp"
#include "o2ram/oprims.hpp"
#include "o2ram/probcalc.hpp"
#include "o2ram/trace.hpp"
#include "o2ram/twotier.hpp"
#include "o2ram_checks/fht.hpp"
#include "o2ram_checks/oracles.hpp"

namespace o2ram::checks
{
    void Tally::check(bool ok, const std::string &msg)
    {
        ++cases;
        if (!ok && failures++ == 0)
            first = msg;
    }

    void Tally::merge(const Tally &o)
    {
        if (o.failures && !failures)
            first = o.first;
        cases += o.cases;
        failures += o.failures;
    }

    void print_table(std::ostream &os, const std::vector<Tally> &rows)
    {
        size_t w = 5;
        for (auto &r : rows)
            w = std::max(w, r.name.size());
        os << std::left << std::setw(int(w)) << "check" << "  " << std::right << std::setw(8) << "cases"
           << std::setw(10) << "failures" << "  result\n";
        for (auto &r : rows)
        {
            os << std::left << std::setw(int(w)) << r.name << "  " << std::right << std::setw(8) << r.cases
               << std::setw(10) << r.failures << "  " << (r.ok() ? "ok" : "FAIL");
            if (!r.ok())
                os << "  (" << r.first << ")";
            os << "\n";
        }
    }

    namespace
    {
        using Row = std::vector<uint64_t>;

        Row row_of(const BlockArray &a, size_t i)
        {
            Row r(a.row(i), a.row(i) + a.stride());
            r.erase(r.begin() + 1); // aux is scratch
            return r;
        }

        std::multiset<Row> rows_of(const BlockArray &a)
        {
            std::multiset<Row> s;
            for (size_t i = 0; i < a.size(); ++i)
                s.insert(row_of(a, i));
            return s;
        }

        BlockArray random_rows(size_t n, size_t beta, std::mt19937_64 &rng)
        {
            size_t dummies = n ? rng() % (n / 4 + 1) : 0;
            return oracle::random_blocks(n, beta, dummies, rng);
        }

        void shuffle_rows(BlockArray &a, std::mt19937_64 &rng)
        {
            for (size_t i = a.size(); i > 1; --i)
                cswap_words(a.row(i - 1), a.row(rng() % i), a.stride(), true);
        }

        std::string at(const char *what, int rep) { return std::string(what) + " rep " + std::to_string(rep); }
    }

    std::vector<Tally> oprims_oracle(size_t n, int reps, uint64_t seed)
    {
        Tally sort{"osort"}, comp{"ocompact"}, relaxed{"ocompact_relaxed"}, shuf{"oshuffle"},
            inter{"ointersperse"}, bins{"obin_place"};
        std::mt19937_64 rng(seed);
        for (int rep = 0; rep < reps; ++rep)
        {
            const size_t len = rep == 0 ? n : 1 + rng() % n;
            Tape tape(seed * 1000 + rep);

            {
                auto a = random_rows(len, 16, rng);
                auto before = rows_of(a);
                osort_by_key(a);
                bool ok = rows_of(a) == before;
                for (size_t i = 1; i < a.size(); ++i)
                    ok &= a.key(i - 1) <= a.key(i);
                sort.check(ok, at("unsorted or rows lost", rep));
            }
            {
                auto a = random_rows(len, 16, rng);
                std::vector<Row> want, rest;
                for (size_t i = 0; i < a.size(); ++i)
                {
                    bool m = rng() & 1;
                    a.set_aux(i, m);
                    (m ? want : rest).push_back(row_of(a, i));
                }
                ocompact(a);
                bool ok = true;
                for (size_t i = 0; i < want.size(); ++i)
                    ok &= row_of(a, i) == want[i];
                std::multiset<Row> tail(rest.begin(), rest.end()), got;
                for (size_t i = want.size(); i < a.size(); ++i)
                    got.insert(row_of(a, i));
                comp.check(ok && got == tail, at("marked prefix wrong", rep));
            }
            {
                size_t m2 = std::max<size_t>(len / 2, 1), len2 = 2 * m2;
                auto a = random_rows(len2, 8, rng);
                std::vector<uint8_t> marks(len2, 0);
                std::fill(marks.begin(), marks.begin() + m2, 1);
                std::multiset<Row> want;
                for (size_t i = 0; i < len2; ++i)
                {
                    a.set_aux(i, marks[i]);
                    if (marks[i])
                        want.insert(row_of(a, i));
                }
                shuffle_rows(a, rng);
                a.set_shuffled(true);
                try
                {
                    ocompact_relaxed(a, len2 >= 1024 ? 256 : 64);
                    std::multiset<Row> got;
                    for (size_t i = 0; i < m2; ++i)
                        got.insert(row_of(a, i));
                    relaxed.check(got == want, at("prefix is not the marked set", rep));
                }
                catch (const CompactionOverflow &)
                {
                    relaxed.check(false, at("chunk overflow", rep));
                }
            }
            {
                auto a = random_rows(len, 8, rng);
                auto before = rows_of(a);
                oshuffle(a, tape);
                shuf.check(a.shuffled() && rows_of(a) == before, at("not a permutation", rep));
            }
            {
                auto a = random_rows(len, 8, rng), b = random_rows(1 + rng() % n, 8, rng);
                oshuffle(a, tape);
                oshuffle(b, tape);
                auto want = rows_of(a);
                for (auto &r : rows_of(b))
                    want.insert(r);
                auto c = ointersperse(a, b, tape);
                inter.check(c.shuffled() && c.size() == a.size() + b.size() && rows_of(c) == want,
                            at("not an interleaving", rep));
            }
            {
                auto a = random_rows(len, 8, rng);
                const uint64_t m = std::max<uint64_t>(1, len / 64);
                const uint64_t cap = probcalc::tight_bucket_size(len, m, -64);
                std::map<uint64_t, std::multiset<Row>> want;
                for (size_t i = 0; i < a.size(); ++i)
                {
                    a.set_aux(i, rng() % m);
                    if (is_real(a.key(i)))
                        want[a.aux(i)].insert(row_of(a, i));
                }
                auto out = obin_place(a, m, cap);
                bool ok = out.size() == m * cap;
                for (uint64_t j = 0; ok && j < m; ++j)
                {
                    std::multiset<Row> got;
                    bool reals_first = true, seen_dummy = false;
                    for (uint64_t s = 0; s < cap; ++s)
                    {
                        size_t i = j * cap + s;
                        if (is_real(out.key(i)))
                        {
                            reals_first &= !seen_dummy;
                            got.insert(row_of(out, i));
                        }
                        else
                            seen_dummy = true;
                    }
                    ok &= reals_first && got == want[j];
                }
                bins.check(ok, at("bin contents differ", rep));
            }
        }
        return {sort, comp, relaxed, shuf, inter, bins};
    }

    Tally fht_oracle(const std::string &name, const TableFactory &make, int count, size_t n_min, size_t n_max,
                     size_t beta, uint64_t seed, bool recurrent_rule)
    {
        Tally t{name};
        std::mt19937_64 rng(seed);
        for (int i = 0; i < count; ++i)
        {
            size_t n = i == 0 ? n_max : n_min + rng() % (n_max - n_min + 1);
            std::string err;
            try
            {
                err = oracle::run_fht_schedule(make, n, beta, seed * 7919 + i, recurrent_rule);
            }
            catch (const std::exception &e)
            {
                err = std::string("exception: ") + e.what();
            }
            t.check(err.empty(), "n=" + std::to_string(n) + " schedule " + std::to_string(i) + ": " + err);
        }
        return t;
    }

    Tally oram_oracle(uint64_t N, size_t beta, uint64_t ops, uint64_t seed, LevelPolicy policy)
    {
        Tally t{"oram N=" + std::to_string(N)};
        std::mt19937_64 rng(seed);
        OramConfig cfg;
        cfg.N = N;
        cfg.beta = beta;
        cfg.seed = seed;
        cfg.policy = std::move(policy);
        cfg.ledger_check = true;

        std::vector<std::vector<uint8_t>> ref(N, std::vector<uint8_t>(beta, 0));
        std::vector<std::pair<uint64_t, std::vector<uint8_t>>> init;
        for (uint64_t a = 0; a < N; ++a)
            if (rng() % 4 == 0)
            {
                for (auto &b : ref[a])
                    b = uint8_t(rng());
                init.emplace_back(a, ref[a]);
            }
        try
        {
            Oram o(cfg, init);
            uint64_t bad = 0;
            std::string first;
            for (uint64_t i = 0; i < ops; ++i)
            {
                uint64_t a = rng() % N;
                std::vector<uint8_t> got;
                if (rng() & 1)
                {
                    for (auto &b : ref[a])
                        b = uint8_t(rng());
                    got = o.write(a, ref[a]);
                }
                else
                    got = o.read(a);
                if (got != ref[a] && bad++ == 0)
                    first = "op " + std::to_string(i) + " addr " + std::to_string(a);
            }
            t.cases = ops;
            t.failures = bad;
            t.first = first;
        }
        catch (const std::exception &e)
        {
            t.check(false, std::string("exception: ") + e.what());
        }
        return t;
    }

    Tally omap_oracle(uint64_t N, size_t beta, uint64_t ops, uint64_t seed)
    {
        Tally t{"omap N=" + std::to_string(N)};
        std::mt19937_64 rng(seed);
        OramConfig cfg;
        cfg.N = N;
        cfg.beta = beta;
        cfg.seed = seed;
        cfg.ledger_check = true;
        // keys from a range wider than N; only N distinct keys are ever inserted
        std::vector<uint64_t> universe(N);
        for (auto &k : universe)
            k = rng() % (uint64_t(1) << 40);
        try
        {
            OMap m(cfg);
            std::map<uint64_t, std::vector<uint8_t>> ref;
            uint64_t bad = 0;
            std::string first;
            for (uint64_t i = 0; i < ops; ++i)
            {
                uint64_t k = universe[rng() % N];
                bool ok;
                if (rng() & 1)
                {
                    std::vector<uint8_t> v(beta);
                    for (auto &b : v)
                        b = uint8_t(rng());
                    m.put(k, v);
                    ref[k] = v;
                    ok = true;
                }
                else
                {
                    auto got = m.get(k);
                    auto it = ref.find(k);
                    ok = it == ref.end() ? !got.has_value() : got == it->second;
                }
                if (!ok && bad++ == 0)
                    first = "op " + std::to_string(i) + " key " + std::to_string(k);
            }
            t.cases = ops;
            t.failures = bad;
            t.first = first;
        }
        catch (const std::exception &e)
        {
            t.check(false, std::string("exception: ") + e.what());
        }
        return t;
    }

    namespace
    {
        // runs f(input_variant) twice under fresh sessions and compares full traces
        template <class F>
        void same_trace(Tally &t, int pair, F &&f)
        {
            trace::Trace a, b;
            {
                trace::Session s;
                f(0);
                a = s.take();
            }
            {
                trace::Session s;
                f(1);
                b = s.take();
            }
            t.check(!a.records.empty() && a.records == b.records, "pair " + std::to_string(pair));
        }
    }

    std::vector<Tally> audit_oprims(int pairs, size_t n, uint64_t seed)
    {
        Tally sort{"trace osort"}, comp{"trace ocompact"}, relaxed{"trace ocompact_relaxed"}, shuf{"trace oshuffle"},
            inter{"trace ointersperse"}, bins{"trace obin_place"}, match{"trace omatch"};
        std::mt19937_64 rng(seed);
        for (int p = 0; p < pairs; ++p)
        {
            const uint64_t ts = seed * 1000003 + p;
            BlockArray in[2], in2[2];
            for (auto &a : in)
                a = random_rows(n, 16, rng);

            same_trace(sort, p, [&](int v)
                       { BlockArray a = in[v]; osort_by_key(a); });
            same_trace(comp, p, [&](int v)
                       {
                BlockArray a = in[v];
                for (size_t i = 0; i < a.size(); ++i)
                    a.set_aux(i, (a.key(i) ^ uint64_t(v)) & 1);
                ocompact(a); });
            same_trace(shuf, p, [&](int v)
                       { BlockArray a = in[v]; Tape tape(ts); oshuffle(a, tape); });

            for (auto &a : in2)
                a = random_rows(n / 2 + 1, 16, rng);
            same_trace(inter, p, [&](int v)
                       {
                BlockArray a = in[v], b = in2[v];
                a.set_shuffled(true);
                b.set_shuffled(true);
                Tape tape(ts);
                ointersperse(a, b, tape); });

            const uint64_t m = std::max<size_t>(1, n / 64);
            const uint64_t cap = probcalc::tight_bucket_size(n, m, -64);
            same_trace(bins, p, [&](int v)
                       {
                BlockArray a = in[v];
                std::mt19937_64 r(ts + v);
                for (size_t i = 0; i < a.size(); ++i)
                    a.set_aux(i, r() % m);
                obin_place(a, m, cap); });

            const size_t even = n & ~size_t(1);
            same_trace(relaxed, p, [&](int v)
                       {
                BlockArray a = in[v].slice(0, even);
                std::mt19937_64 r(ts + v);
                for (size_t i = 0; i < even; ++i)
                    a.set_aux(i, i < even / 2);
                shuffle_rows(a, r);
                a.set_shuffled(true);
                try
                {
                    ocompact_relaxed(a, even >= 1024 ? 256 : 64);
                }
                catch (const CompactionOverflow &)
                {
                } });

            const uint32_t nL = uint32_t(std::min<size_t>(n, 64));
            std::vector<Edge> g[2];
            for (int v = 0; v < 2; ++v)
            {
                std::vector<Edge> e;
                for (uint32_t u = 0; u < nL; ++u)
                    for (int j = 0; j < 3; ++j)
                        e.push_back({u, uint32_t(rng() % (2 * nL))});
                g[v] = e;
            }
            same_trace(match, p, [&](int v)
                       { omatch(g[v], nL, 2 * nL, probcalc::cuckoo_tau(nL)); });
        }
        return {sort, comp, relaxed, shuf, inter, bins, match};
    }

    namespace
    {
        struct Named
        {
            std::string name;
            uint64_t n;
            TableFactory make;
        };

        std::vector<Named> lookup_tables(size_t n)
        {
            std::vector<Named> v;
            v.push_back({"linear", n, [](const BlockArray &b, Tape &t)
                         { return std::make_unique<LinearTable>(b, t); }});
            v.push_back({"bucket", n, [](const BlockArray &b, Tape &t)
                         { return std::make_unique<BucketTable>(b, std::max<uint64_t>(1, b.size() / 32), t); }});
            v.push_back({"cuckoo", std::max<size_t>(n, 64), [](const BlockArray &b, Tape &t)
                         { return std::make_unique<CuckooTable>(b, t); }});
            // a two-tier table needs more than Z = C / eps^2 = 4096 blocks
            v.push_back({"twotier", std::max<size_t>(n, 1 << 13), [](const BlockArray &b, Tape &t)
                         {
                             TwoTierTable::Options o;
                             o.eps = 0.5;
                             return std::make_unique<TwoTierTable>(b, t, o);
                         }});
            return v;
        }
    }

    std::vector<Tally> audit_lookup_shapes(int pairs, size_t n, uint64_t seed)
    {
        std::vector<Tally> out;
        for (auto &tab : lookup_tables(n))
        {
            Tally t{"shape lookup " + tab.name};
            std::mt19937_64 rng(seed);
            Tape t0(seed);
            auto blocks = oracle::random_blocks(tab.n, 16, tab.n / 8, rng);
            oshuffle(blocks, t0);
            Tape ta(seed + 1), tb(seed + 1);
            auto A = tab.make(blocks, ta), B = tab.make(blocks, tb);
            A->set_check_recurrent(false);
            B->set_check_recurrent(false);

            std::vector<int64_t> keys;
            for (size_t i = 0; i < blocks.size(); ++i)
                if (is_real(blocks.key(i)))
                    keys.push_back(blocks.key(i));
            std::shuffle(keys.begin(), keys.end(), rng);
            std::vector<int64_t> ka = keys, kb = keys;
            std::shuffle(kb.begin(), kb.end(), rng);
            int64_t fresh = int64_t(1) << 50;

            auto pick = [&](std::vector<int64_t> &pool)
            {
                switch (rng() % 3)
                {
                case 0:
                    return kDummyLookup;
                case 1:
                    return fresh++;
                default:
                    if (pool.empty())
                        return kDummyLookup;
                    int64_t k = pool.back();
                    pool.pop_back();
                    return k;
                }
            };
            std::vector<uint64_t> buf(2);
            for (int p = 0; p < pairs; ++p)
            {
                int64_t x = pick(ka), y = pick(kb);
                trace::Trace a, b;
                {
                    trace::Session s;
                    A->lookup(x, buf.data());
                    a = s.take();
                }
                {
                    trace::Session s;
                    B->lookup(y, buf.data());
                    b = s.take();
                }
                t.check(trace::shape_of(a) == trace::shape_of(b),
                        "pair " + std::to_string(p) + " keys " + std::to_string(x) + "/" + std::to_string(y));
            }
            out.push_back(t);
        }
        return out;
    }

    Tally audit_oram_shapes(int pairs, uint64_t N, uint64_t seed)
    {
        Tally t{"shape oram access N=" + std::to_string(N)};
        OramConfig cfg;
        cfg.N = N;
        cfg.beta = 16;
        cfg.top_log = 3;
        cfg.seed = seed;
        cfg.ledger_check = false;
        Oram A(cfg), B(cfg);
        std::mt19937_64 rng(seed);
        std::vector<uint8_t> v(16);
        for (int p = 0; p < pairs; ++p)
        {
            trace::Trace ta, tb;
            for (int side = 0; side < 2; ++side)
            {
                Oram &o = side ? B : A;
                uint64_t addr = rng() % N;
                bool w = rng() & 1;
                v[0] = uint8_t(rng());
                trace::Session s;
                if (w)
                    o.write(addr, v);
                else
                    o.read(addr);
                (side ? tb : ta) = s.take();
            }
            t.check(trace::shape_of(ta) == trace::shape_of(tb), "access " + std::to_string(p));
        }
        return t;
    }

    namespace
    {
        // first prf-derived read of each lookup, as a bin number
        std::vector<uint64_t> prf_bins(HashTable &tab, size_t samples, const std::vector<int64_t> &keys)
        {
            std::vector<uint64_t> bins;
            std::vector<uint64_t> buf(tab.beta() / 8);
            for (size_t i = 0; i < samples; ++i)
            {
                trace::Session s;
                tab.lookup(i < keys.size() ? keys[i] : kDummyLookup, buf.data());
                for (auto &r : s.trace().records)
                    if (r.derived == trace::Derived::prf_derived && r.op == trace::Op::read)
                    {
                        bins.push_back(r.index / r.span);
                        break;
                    }
            }
            return bins;
        }
    }

    std::vector<Tally> audit_prf_uniformity(size_t samples, uint64_t seed, double alpha)
    {
        std::vector<Tally> out;
        std::mt19937_64 rng(seed);
        auto verdict = [&](const std::string &name, const std::vector<uint64_t> &bins, uint64_t domain)
        {
            Tally t{name};
            bool in_range = std::all_of(bins.begin(), bins.end(), [&](uint64_t b)
                                        { return b < domain; });
            t.check(bins.size() == samples && in_range, "missing or out-of-range indices");
            if (in_range && !bins.empty())
                t.check(trace::uniformity_test(bins, domain, alpha) == trace::Verdict::pass,
                        "chi-square rejects uniformity");
            out.push_back(t);
        };

        const size_t n = 1 << 12;
        auto make_blocks = [&](size_t len)
        {
            Tape tp(seed);
            auto b = oracle::random_blocks(len, 8, 0, rng);
            oshuffle(b, tp);
            std::vector<int64_t> keys;
            for (size_t i = 0; i < b.size(); ++i)
                keys.push_back(b.key(i));
            return std::make_pair(b, keys);
        };

        {
            auto [b, keys] = make_blocks(n);
            Tape tape(seed + 1);
            BucketTable tab(b, 64, tape);
            tab.set_check_recurrent(false);
            verdict("uniform bucket bins", prf_bins(tab, samples, keys), 64);
        }
        {
            auto [b, keys] = make_blocks(n);
            Tape tape(seed + 2);
            CuckooTable tab(b, tape);
            tab.set_check_recurrent(false);
            // slot probed in the first sub-table
            verdict("uniform cuckoo slots", prf_bins(tab, samples, keys), tab.sizing().sub_size(0));
        }
        {
            auto [b, keys] = make_blocks(1 << 13);
            Tape tape(seed + 3);
            TwoTierTable::Options o;
            o.eps = 0.5;
            TwoTierTable tab(b, tape, o);
            tab.set_check_recurrent(false);
            const auto &s = tab.sizing();
            verdict("uniform twotier bins", prf_bins(tab, samples, keys), s.bins * s.major_bins);
        }
        return out;
    }
}
