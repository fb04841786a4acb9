#include <benchmark/benchmark.h>

#include <vector>

#include "o2ram/oprims.hpp"
#include "o2ram/planner.hpp"
#include "o2ram/twotier.hpp"

using namespace o2ram;

namespace
{
    BlockArray keyed(size_t n, size_t beta, Tape &tape)
    {
        BlockArray a(n, beta);
        for (size_t i = 0; i < n; ++i)
        {
            a.set_key(i, int64_t(i + 1));
            a.payload(i)[0] = tape.next();
        }
        oshuffle(a, tape);
        a.clear_aux();
        return a;
    }

    SchemeSpec spec_for(int s, uint64_t n)
    {
        SchemeSpec spec;
        spec.scheme = Scheme(s);
        if (spec.scheme == Scheme::bucket)
            spec.bucket_m = std::max<uint64_t>(1, n / 64);
        if (spec.scheme == Scheme::twotier)
            spec.eps = 0.5;
        return spec;
    }

    // args: scheme, n
    void BM_Build(benchmark::State &st)
    {
        Tape tape(4);
        const uint64_t n = uint64_t(st.range(1));
        BlockArray a = keyed(n, 16, tape);
        SchemeSpec s = spec_for(int(st.range(0)), n);
        build_spec(s, a, tape, -64); // fills the sizing memo
        for (auto _ : st)
        {
            auto t = build_spec(s, a, tape, -64);
            benchmark::DoNotOptimize(t.get());
        }
        st.SetLabel(s.token());
    }

    void BM_Lookup(benchmark::State &st)
    {
        Tape tape(5);
        const uint64_t n = uint64_t(st.range(1));
        BlockArray a = keyed(n, 16, tape);
        SchemeSpec s = spec_for(int(st.range(0)), n);
        auto t = build_spec(s, a, tape, -64);
        t->set_check_recurrent(false);
        std::vector<uint64_t> out(2);
        int64_t ctr = 0;
        for (auto _ : st)
        {
            int64_t key = ctr < int64_t(n) ? ctr + 1 : -(ctr + 1);
            ++ctr;
            benchmark::DoNotOptimize(t->lookup(key, out.data()));
        }
        st.SetLabel(s.token());
    }

    void table_args(benchmark::internal::Benchmark *b)
    {
        for (Scheme s : {Scheme::linear, Scheme::bucket, Scheme::cuckoo})
            for (int64_t n : {1 << 8, 1 << 12})
                b->Args({int64_t(s), n});
        b->Args({int64_t(Scheme::twotier), 1 << 14});
    }
    BENCHMARK(BM_Build)->Apply(table_args)->Unit(benchmark::kMillisecond);
    BENCHMARK(BM_Lookup)->Apply(table_args)->Unit(benchmark::kMicrosecond);
}
