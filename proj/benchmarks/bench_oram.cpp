#include <benchmark/benchmark.h>

#include <random>

#include "o2ram/horam.hpp"

using namespace o2ram;

namespace
{
    void BM_OramAccess(benchmark::State &st)
    {
        OramConfig cfg;
        cfg.N = uint64_t(st.range(0));
        cfg.beta = 16;
        cfg.seed = 6;
        cfg.ledger_check = false;
        Oram o(cfg);
        std::mt19937_64 rng(6);
        std::vector<uint8_t> v(16);
        for (auto _ : st)
        {
            uint64_t addr = rng() % cfg.N;
            if (rng() & 1)
                o.write(addr, v);
            else
                benchmark::DoNotOptimize(o.read(addr));
        }
        st.SetItemsProcessed(int64_t(st.iterations()));
    }
    BENCHMARK(BM_OramAccess)->RangeMultiplier(16)->Range(1 << 8, 1 << 16)->Unit(benchmark::kMicrosecond);

    void BM_OMapPut(benchmark::State &st)
    {
        OramConfig cfg;
        cfg.N = uint64_t(st.range(0));
        cfg.beta = 16;
        cfg.seed = 7;
        cfg.ledger_check = false;
        OMap m(cfg);
        std::mt19937_64 rng(7);
        std::vector<uint8_t> v(16);
        for (auto _ : st)
            m.put(rng() % cfg.N, v);
        st.SetItemsProcessed(int64_t(st.iterations()));
    }
    BENCHMARK(BM_OMapPut)->RangeMultiplier(16)->Range(1 << 8, 1 << 16)->Unit(benchmark::kMicrosecond);
}
BENCHMARK_MAIN();
