#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "commands.hpp"
#include "o2ram/planner.hpp"
#include "o2ram/probcalc.hpp"

namespace o2ram::cli
{
    int run_plan(const PlanArgs &a)
    {
        std::string path = a.cache;
        if (path.empty())
            if (const char *dir = std::getenv("O2RAM_CACHE_DIR"); dir && *dir)
            {
                std::error_code ec;
                std::filesystem::create_directories(dir, ec);
                path = (std::filesystem::path(dir) / "planner_costs.txt").string();
            }

        CostCache cache = path.empty() ? CostCache{} : CostCache{path};
        if (cache.skipped_lines())
            std::cerr << "warning: skipped " << cache.skipped_lines() << " malformed cache lines\n";

        Planner::Options opt;
        opt.log2_delta = probcalc::parse_delta(a.delta);
        opt.seed = a.seed;
        Planner planner(std::move(cache), opt);
        const Role role = a.role == "level" ? Role::level : Role::overflow_pile;
        SchemeChoice c = planner.plan(a.n, a.t, a.beta, role);
        for (const auto &line : planner.log())
            std::cerr << line << "\n";

        std::printf("# fingerprint=%s\n", machine_fingerprint().c_str());
        std::printf("n,t,beta,role,scheme,cost_seconds\n");
        std::printf("%llu,%llu,%zu,%s,%s,%.9g\n", (unsigned long long)a.n, (unsigned long long)a.t, a.beta,
                    a.role.c_str(), c.spec.token().c_str(), c.cost);
        return 0;
    }
}
