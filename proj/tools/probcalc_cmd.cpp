#include <bit>
#include <cstdio>

#include "commands.hpp"
#include "o2ram/cuckoo.hpp"
#include "o2ram/probcalc.hpp"

namespace o2ram::cli
{
    int run_probcalc(const ProbcalcArgs &a)
    {
        const double d = probcalc::parse_delta(a.delta);
        if (a.table == "bucket")
        {
            std::printf("# delta_log2=%.6g\n", d);
            std::printf("n,m,ell,log2_prob\n");
            for (uint64_t m = 1; m <= a.n; m *= 2)
            {
                uint64_t ell = probcalc::tight_bucket_size(a.n, m, d);
                auto p = probcalc::overflow_prob_any(a.n, m, ell);
                std::printf("%llu,%llu,%llu,%.6f\n", (unsigned long long)a.n, (unsigned long long)m,
                            (unsigned long long)ell, p.clamped());
            }
            return 0;
        }
        std::printf("# delta_log2=%.6g\n", d);
        std::printf("n,k,m,log2_fail,pass\n");
        for (uint64_t n = std::bit_ceil(a.n_min); n <= a.n_max; n *= 2)
            for (unsigned k = 3; k <= 8; ++k)
            {
                uint64_t m = cuckoo_sizing(n, k).m;
                auto p = probcalc::cuckoo_fail_prob(n, k, m);
                std::printf("%llu,%u,%llu,%.6f,%d\n", (unsigned long long)n, k, (unsigned long long)m,
                            p.clamped(), int(p.log2 <= d));
            }
        return 0;
    }
}
