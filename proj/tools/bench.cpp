#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "commands.hpp"
#include "o2ram/bucket.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/horam.hpp"
#include "o2ram/oprims.hpp"
#include "o2ram/planner.hpp"
#include "o2ram/twotier.hpp"

#ifndef O2RAM_GIT_HASH
#define O2RAM_GIT_HASH "unknown"
#endif

namespace o2ram::cli
{
    namespace
    {
        using clock = std::chrono::steady_clock;

        struct Sink
        {
            std::ostream &os;
            const BenchArgs &a;
            void row(const std::string &workload, uint64_t n, int threads, const std::string &scheme,
                     const std::string &metric, double value, const char *units)
            {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.6g", value);
                os << workload << ',' << n << ',' << a.beta << ',' << threads << ',' << '"' << scheme << '"' << ','
                   << metric << ',' << buf << ',' << units << '\n';
                os.flush();
            }
        };

        // rows held at peak during a bottom rebuild, measured loosely
        uint64_t oram_bytes(uint64_t n, size_t beta) { return 10 * n * (16 + beta); }
        uint64_t table_bytes(uint64_t n, size_t beta) { return 16 * n * (16 + beta) + 256 * n; }

        bool guard(const BenchArgs &a, std::ostream &os, uint64_t n, uint64_t bytes)
        {
            if (bytes <= a.mem_cap_mb << 20)
                return true;
            os << "# skipped n=" << n << ": estimated " << (bytes >> 20) << " MiB exceeds --mem-cap-mb "
               << a.mem_cap_mb << "\n";
            std::cerr << "refusing n=" << n << ": estimated footprint " << (bytes >> 20) << " MiB over cap\n";
            return false;
        }

        OramConfig config(const BenchArgs &a, uint64_t n)
        {
            OramConfig cfg;
            cfg.N = n;
            cfg.beta = a.beta;
            cfg.top_log = a.top_log;
            cfg.seed = a.seed;
            cfg.ledger_check = false;
            return cfg;
        }

        void bench_oram(Sink &s, uint64_t n, int th)
        {
            std::mt19937_64 rng(s.a.seed);
            const uint64_t ops = std::max<uint64_t>(1, uint64_t(s.a.ops_factor * double(n)));
            std::vector<uint8_t> v(s.a.beta);

            auto t0 = clock::now();
            Oram o(config(s.a, n));
            auto t1 = clock::now();
            for (uint64_t i = 0; i < ops; ++i)
            {
                uint64_t addr = rng() % n;
                if (rng() & 1)
                {
                    v[0] = uint8_t(i);
                    o.write(addr, v);
                }
                else
                    o.read(addr);
            }
            auto t2 = clock::now();
            std::chrono::duration<double> init = t1 - t0, run = t2 - t1;
            s.row("oram", n, th, "default", "init", init.count(), "seconds");
            s.row("oram", n, th, "default", "amortized_access", run.count() * 1e6 / double(ops), "microseconds_per_op");
            s.row("oram", n, th, "default", "footprint_estimate", double(oram_bytes(n, s.a.beta)), "bytes");
        }

        void bench_omap(Sink &s, uint64_t n, int th)
        {
            std::mt19937_64 rng(s.a.seed);
            const uint64_t ops = std::max<uint64_t>(1, uint64_t(s.a.ops_factor * double(n)));
            std::vector<uint8_t> v(s.a.beta);

            auto t0 = clock::now();
            OMap m(config(s.a, n));
            auto t1 = clock::now();
            for (uint64_t i = 0; i < ops; ++i)
            {
                uint64_t key = rng() % n;
                if (rng() & 1)
                {
                    v[0] = uint8_t(i);
                    m.put(key, v);
                }
                else
                    m.get(key);
            }
            auto t2 = clock::now();
            std::chrono::duration<double> init = t1 - t0, run = t2 - t1;
            s.row("omap", n, th, "default", "init", init.count(), "seconds");
            s.row("omap", n, th, "default", "amortized_access", run.count() * 1e6 / double(ops), "microseconds_per_op");
        }

        void bench_hash(Sink &s, uint64_t n, int th)
        {
            const uint64_t t = std::max<uint64_t>(1, uint64_t(s.a.t_factor * double(n)));
            Planner::Options po;
            po.seed = s.a.seed;
            Planner planner(CostCache{}, po);

            auto emit = [&](const SchemeSpec &spec)
            {
                ProbeCost c = planner.cost_of(spec, n, s.a.beta, t);
                s.row("hash", n, th, spec.token(), "build_extract", c.fixed, "seconds");
                s.row("hash", n, th, spec.token(), "lookup", c.per_lookup * 1e6, "microseconds_per_op");
                s.row("hash", n, th, spec.token(), "total", c.at(t), "seconds");
            };

            for (const auto &name : s.a.schemes)
            {
                Scheme sc = scheme_from_string(name);
                SchemeSpec spec;
                spec.scheme = sc;
                switch (sc)
                {
                case Scheme::linear:
                    emit(spec);
                    break;
                case Scheme::bucket:
                    if (n < 2)
                        break;
                    spec.bucket_m = plan_bucket_count(n, [&](uint64_t m)
                                                      {
                        SchemeSpec b;
                        b.scheme = Scheme::bucket;
                        b.bucket_m = m;
                        return planner.cost_of(b, n, s.a.beta, t).at(t); }, po.bucket_probes);
                    emit(spec);
                    break;
                case Scheme::cuckoo:
                    if (!planner.eligible(Scheme::cuckoo, n, Role::overflow_pile, true))
                    {
                        s.os << "# cuckoo n=" << n << ": no hash count meets the failure target\n";
                        break;
                    }
                    emit(spec);
                    break;
                case Scheme::twotier:
                {
                    if (!planner.eligible(Scheme::twotier, n, Role::level, true))
                    {
                        s.os << "# twotier n=" << n << ": not eligible\n";
                        break;
                    }
                    SchemeSpec best;
                    double best_cost = std::numeric_limits<double>::infinity();
                    plan_epsilon(n, po.C, [&](double eps)
                                 {
                        SchemeSpec tw;
                        tw.scheme = Scheme::twotier;
                        tw.eps = eps;
                        uint64_t Z = uint64_t(std::ceil(po.C / (eps * eps)));
                        uint64_t B = n / Z;
                        uint64_t pile = B * tier_caps(double(n) / double(B), eps).relocate;
                        auto ovf = planner.plan(pile, t, s.a.beta, Role::overflow_pile, true);
                        tw.overflow = ovf.spec.scheme;
                        tw.overflow_m = ovf.spec.bucket_m;
                        double c = planner.cost_of(tw, n, s.a.beta, t).at(t);
                        if (c < best_cost)
                            best = tw, best_cost = c;
                        return c; });
                    emit(best);
                    break;
                }
                }
            }
        }
    }

    int run_bench(const BenchArgs &a)
    {
        if (a.n_min < 2 || a.n_max < a.n_min)
            throw ParameterError("need 2 <= n-min <= n-max");
        std::ofstream file;
        if (!a.out.empty())
        {
            file.open(a.out);
            if (!file)
                throw ParameterError("cannot write " + a.out);
        }
        std::ostream &os = a.out.empty() ? std::cout : file;
        Sink s{os, a};

        os << "# git=" << O2RAM_GIT_HASH << "\n";
        os << "# fingerprint=" << machine_fingerprint() << "\n";
        os << "# seed=" << a.seed << "\n";
        os << "workload,n,beta,threads,scheme,metric,value,units\n";

        for (int th : a.threads)
        {
            if (th < 1)
                throw ParameterError("threads must be positive");
            set_threads(th);
            for (uint64_t n = std::bit_ceil(a.n_min); n <= a.n_max; n *= 2)
            {
                if (a.workload == "hash")
                {
                    if (guard(a, os, n, table_bytes(n, a.beta)))
                        bench_hash(s, n, th);
                }
                else if (!guard(a, os, n, oram_bytes(n, a.beta)))
                    continue;
                else if (a.workload == "omap")
                    bench_omap(s, n, th);
                else
                    bench_oram(s, n, th);
            }
        }
        set_threads(1);
        return 0;
    }
}
