#include <benchmark/benchmark.h>

#include "o2ram/oprims.hpp"
#include "o2ram/tape.hpp"

using namespace o2ram;

namespace
{
    BlockArray filled(size_t n, size_t beta, Tape &tape)
    {
        BlockArray a(n, beta);
        for (size_t i = 0; i < n; ++i)
            a.set_key(i, (tape.next() & 1) ? int64_t(i + 1) : kDummyKey);
        return a;
    }

    void BM_OsortByKey(benchmark::State &st)
    {
        Tape tape(1);
        const size_t n = size_t(st.range(0));
        for (auto _ : st)
        {
            st.PauseTiming();
            BlockArray a = filled(n, 16, tape);
            oshuffle(a, tape);
            st.ResumeTiming();
            osort_by_key(a);
            benchmark::DoNotOptimize(a.row(0));
        }
        st.SetItemsProcessed(int64_t(st.iterations()) * int64_t(n));
    }
    BENCHMARK(BM_OsortByKey)->RangeMultiplier(4)->Range(1 << 8, 1 << 16)->Unit(benchmark::kMicrosecond);

    void BM_Ocompact(benchmark::State &st)
    {
        Tape tape(2);
        const size_t n = size_t(st.range(0));
        for (auto _ : st)
        {
            st.PauseTiming();
            BlockArray a = filled(n, 16, tape);
            st.ResumeTiming();
            ocompact(a);
            benchmark::DoNotOptimize(a.row(0));
        }
        st.SetItemsProcessed(int64_t(st.iterations()) * int64_t(n));
    }
    BENCHMARK(BM_Ocompact)->RangeMultiplier(4)->Range(1 << 8, 1 << 16)->Unit(benchmark::kMicrosecond);

    void BM_Oshuffle(benchmark::State &st)
    {
        Tape tape(3);
        const size_t n = size_t(st.range(0));
        BlockArray a = filled(n, 16, tape);
        for (auto _ : st)
        {
            oshuffle(a, tape);
            benchmark::DoNotOptimize(a.row(0));
        }
        st.SetItemsProcessed(int64_t(st.iterations()) * int64_t(n));
    }
    BENCHMARK(BM_Oshuffle)->RangeMultiplier(4)->Range(1 << 8, 1 << 16)->Unit(benchmark::kMicrosecond);
}
