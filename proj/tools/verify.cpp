#include <algorithm>
#include <chrono>
#include <iostream>

#include "commands.hpp"
#include "o2ram/bucket.hpp"
#include "o2ram/cuckoo.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/oprims.hpp"
#include "o2ram/twotier.hpp"
#include "o2ram_checks/checks.hpp"

namespace o2ram::cli
{
    namespace
    {
        using checks::Tally;

        std::vector<Tally> tables(uint64_t scale, uint64_t seed)
        {
            const size_t hi = std::max<uint64_t>(scale, 2);
            std::vector<Tally> out;
            out.push_back(checks::fht_oracle("fht linear", [](const BlockArray &b, Tape &t)
                                             { return std::make_unique<LinearTable>(b, t); },
                                             50, 1, std::min<size_t>(hi, 256), 16, seed, true));
            out.push_back(checks::fht_oracle("fht bucket", [](const BlockArray &b, Tape &t)
                                             { return std::make_unique<BucketTable>(b, std::max<size_t>(1, b.size() / 16), t); },
                                             50, 1, hi, 16, seed, true));
            out.push_back(checks::fht_oracle("fht cuckoo", [](const BlockArray &b, Tape &t)
                                             {
                CuckooTable::Options o;
                o.k = b.size() < 64 ? 4 : 0;
                return std::make_unique<CuckooTable>(b, t, o); },
                                             50, 1, hi, 16, seed, true));
            // more than Z = 4096 blocks at eps = 1/2
            out.push_back(checks::fht_oracle("fht twotier", [](const BlockArray &b, Tape &t)
                                             {
                TwoTierTable::Options o;
                o.eps = 0.5;
                return std::make_unique<TwoTierTable>(b, t, o); },
                                             10, 5000, std::max<size_t>(hi, 8192), 16, seed, true));
            return out;
        }

        std::vector<Tally> oram(uint64_t scale, uint64_t seed)
        {
            std::vector<Tally> out;
            Tally small;
            small.name = "oram N=256 x5 seeds";
            for (uint64_t s = 0; s < 5; ++s)
                small.merge(checks::oram_oracle(256, 16, 1024, seed + s));
            out.push_back(small);
            out.push_back(checks::oram_oracle(scale, 16, 4 * scale, seed));
            out.push_back(checks::omap_oracle(scale, 16, 4 * scale, seed));
            return out;
        }

        std::vector<Tally> audits(uint64_t scale, uint64_t seed)
        {
            set_threads(1);
            const size_t n = std::min<uint64_t>(scale, 1024);
            auto out = checks::audit_oprims(10, n, seed);
            for (auto &t : checks::audit_lookup_shapes(50, scale, seed))
                out.push_back(t);
            out.push_back(checks::audit_oram_shapes(50, n, seed));
            for (auto &t : checks::audit_prf_uniformity(20000, seed))
                out.push_back(t);
            return out;
        }
    }

    int run_verify(const VerifyArgs &a)
    {
        if (a.scale < 2)
            throw ParameterError("scale must be at least 2");
        auto t0 = std::chrono::steady_clock::now();
        std::vector<checks::Tally> rows;
        if (a.suite == "oprims")
            rows = checks::oprims_oracle(a.scale, 20, a.seed);
        else if (a.suite == "tables")
            rows = tables(a.scale, a.seed);
        else if (a.suite == "oram")
            rows = oram(a.scale, a.seed);
        else
            rows = audits(a.scale, a.seed);
        checks::print_table(std::cout, rows);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = std::all_of(rows.begin(), rows.end(), [](auto &r)
                              { return r.ok(); });
        std::cout << a.suite << ": " << (ok ? "pass" : "FAIL") << " (" << secs << " s)\n";
        return ok ? 0 : 1;
    }
}
