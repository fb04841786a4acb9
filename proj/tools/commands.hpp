#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace o2ram::cli
{
    // "4096", "2^12"
    uint64_t parse_size(const std::string &s);

    struct VerifyArgs
    {
        std::string suite;
        uint64_t seed = 1;
        uint64_t scale = 1 << 10;
    };
    int run_verify(const VerifyArgs &a);

    struct BenchArgs
    {
        std::string workload;
        uint64_t n_min = 1 << 10, n_max = 1 << 14;
        size_t beta = 16;
        std::vector<int> threads{1};
        std::string out;
        uint64_t seed = 1;
        double ops_factor = 1;     // accesses per run = ops_factor * n
        double t_factor = 1;       // hash workload: lookups = t_factor * n
        uint64_t mem_cap_mb = 3072;
        unsigned top_log = 8;
        std::vector<std::string> schemes{"linear", "bucket", "cuckoo", "twotier"};
    };
    int run_bench(const BenchArgs &a);

    struct SsspArgs
    {
        std::string graph, out;
        uint32_t random_v = 0;
        uint64_t random_e = 0;
        uint64_t max_w = 1000;
        uint64_t source = 1;
        uint64_t seed = 1;
        bool plain = false;
        bool check = false;
        std::string write_graph;
    };
    int run_sssp(const SsspArgs &a);

    struct ProbcalcArgs
    {
        std::string table;
        uint64_t n = 8192;
        std::string delta = "2^-64";
        uint64_t n_min = 1 << 6, n_max = 1 << 20;
    };
    int run_probcalc(const ProbcalcArgs &a);

    struct PlanArgs
    {
        uint64_t n = 1 << 12, t = 0;
        size_t beta = 16;
        std::string delta = "2^-64";
        std::string role = "level";
        std::string cache;
        uint64_t seed = 1;
    };
    int run_plan(const PlanArgs &a);
}
