#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/probcalc.hpp"

using namespace o2ram::cli;

namespace o2ram::cli
{
    uint64_t parse_size(const std::string &s)
    {
        try
        {
            size_t pos;
            if (s.rfind("2^", 0) == 0)
            {
                unsigned long e = std::stoul(s.substr(2), &pos);
                if (pos != s.size() - 2 || e > 62)
                    throw std::invalid_argument(s);
                return uint64_t(1) << e;
            }
            unsigned long long v = std::stoull(s, &pos);
            if (pos != s.size())
                throw std::invalid_argument(s);
            return v;
        }
        catch (const std::logic_error &)
        {
            throw CLI::ValidationError("size", "cannot parse '" + s + "'");
        }
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"o2ram: doubly oblivious RAM and hash tables"};
    app.require_subcommand(1);

    VerifyArgs va;
    std::string scale = "2^10";
    auto *verify = app.add_subcommand("verify", "run oracle suites");
    verify->add_option("suite", va.suite, "oprims | tables | oram | trace")
        ->required()
        ->check(CLI::IsMember({"oprims", "tables", "oram", "trace"}));
    verify->add_option("--seed", va.seed);
    verify->add_option("--scale", scale, "problem size, e.g. 2^12");

    BenchArgs ba;
    std::string n_min = "2^10", n_max = "2^14";
    auto *bench = app.add_subcommand("bench", "benchmark sweeps as CSV");
    bench->add_option("workload", ba.workload, "oram | omap | hash | threads")
        ->required()
        ->check(CLI::IsMember({"oram", "omap", "hash", "threads"}));
    bench->add_option("--n-min", n_min);
    bench->add_option("--n-max", n_max);
    bench->add_option("--beta", ba.beta)->check(CLI::Range(8, 1 << 16));
    bench->add_option("--threads", ba.threads)->delimiter(',');
    bench->add_option("--out", ba.out, "CSV path (default stdout)");
    bench->add_option("--seed", ba.seed);
    bench->add_option("--ops-factor", ba.ops_factor, "oram/omap accesses per run, times n");
    bench->add_option("--t-factor", ba.t_factor, "hash lookups per build, times n");
    bench->add_option("--mem-cap-mb", ba.mem_cap_mb);
    bench->add_option("--top-log", ba.top_log);
    bench->add_option("--schemes", ba.schemes)->delimiter(',');

    SsspArgs sa;
    auto *sssp = app.add_subcommand("sssp", "single-source shortest paths over the oblivious map");
    sssp->add_option("--graph", sa.graph, "DIMACS file (p sp / a u v w)");
    sssp->add_option("--random-v", sa.random_v, "generate a random graph with this many vertices");
    sssp->add_option("--random-e", sa.random_e);
    sssp->add_option("--max-w", sa.max_w);
    sssp->add_option("--source", sa.source, "1-based source vertex");
    sssp->add_option("--seed", sa.seed);
    sssp->add_option("--out", sa.out, "distances, one per line (default stdout)");
    sssp->add_option("--write-graph", sa.write_graph);
    sssp->add_flag("--plain", sa.plain, "plain Dijkstra only");
    sssp->add_flag("--check", sa.check, "compare against plain Dijkstra");

    ProbcalcArgs pa;
    std::string pn = "8192", pmin = "2^6", pmax = "2^20";
    auto *prob = app.add_subcommand("probcalc", "overflow and failure probabilities as CSV");
    prob->add_option("table", pa.table, "bucket | cuckoo")->required()->check(CLI::IsMember({"bucket", "cuckoo"}));
    prob->add_option("--n", pn);
    prob->add_option("--delta", pa.delta);
    prob->add_option("--n-min", pmin);
    prob->add_option("--n-max", pmax);

    PlanArgs la;
    std::string ln = "2^12", lt;
    auto *plan = app.add_subcommand("plan", "pick a hash scheme by measurement");
    plan->add_option("--n", ln);
    plan->add_option("--t", lt, "lookups over the table lifetime (default n)");
    plan->add_option("--beta", la.beta)->check(CLI::Range(8, 1 << 16));
    plan->add_option("--delta", la.delta);
    plan->add_option("--role", la.role)->check(CLI::IsMember({"level", "overflow_pile"}));
    plan->add_option("--cache", la.cache, "cache file (default $O2RAM_CACHE_DIR/planner_costs.txt)");
    plan->add_option("--seed", la.seed);

    try
    {
        app.parse(argc, argv);
        if (*verify)
        {
            va.scale = parse_size(scale);
            return run_verify(va);
        }
        if (*bench)
        {
            ba.n_min = parse_size(n_min);
            ba.n_max = parse_size(n_max);
            if (ba.beta % 8)
                throw CLI::ValidationError("--beta", "must be a multiple of 8");
            return run_bench(ba);
        }
        if (*sssp)
            return run_sssp(sa);
        if (*prob)
        {
            pa.n = parse_size(pn);
            pa.n_min = parse_size(pmin);
            pa.n_max = parse_size(pmax);
            o2ram::probcalc::parse_delta(pa.delta);
            return run_probcalc(pa);
        }
        if (*plan)
        {
            la.n = parse_size(ln);
            la.t = lt.empty() ? la.n : parse_size(lt);
            if (la.beta % 8)
                throw CLI::ValidationError("--beta", "must be a multiple of 8");
            o2ram::probcalc::parse_delta(la.delta);
            return run_plan(la);
        }
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }
    catch (const o2ram::ParameterError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const o2ram::ParseError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
