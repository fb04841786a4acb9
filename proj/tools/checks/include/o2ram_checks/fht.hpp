#pragma once
// Random build/lookup/extract schedules checked against the FHT reference.
#include <functional>
#include <cstring>
#include <memory>
#include <random>
#include <string>

#include "o2ram/errors.hpp"
#include "o2ram/hash_table.hpp"
#include "o2ram/oprims.hpp"
#include "o2ram_checks/oracles.hpp"

namespace oracle
{
    using TableFactory = std::function<std::unique_ptr<o2ram::HashTable>(const o2ram::BlockArray &, o2ram::Tape &)>;

    // empty string on success, otherwise a description of the first mismatch
    inline std::string run_fht_schedule(const TableFactory &make, size_t n, size_t beta, uint64_t seed,
                                        bool recurrent_rule)
    {
        std::mt19937_64 rng(seed);
        o2ram::Tape tape(seed ^ 0x9e3779b97f4a7c15ull);
        size_t dummies = n ? rng() % (n / 4 + 1) : 0;
        auto blocks = random_blocks(n, beta, dummies, rng, uint64_t(1) << 40);
        o2ram::oshuffle(blocks, tape);
        FHT ref(blocks);
        std::vector<int64_t> keys;
        for (auto &[k, v] : ref.extract())
            keys.push_back(k);

        auto t = make(blocks, tape);
        t->set_check_recurrent(recurrent_rule);
        std::vector<uint64_t> out(beta / 8);
        size_t ops = rng() % (2 * n + 4);
        std::set<int64_t> asked;
        for (size_t op = 0; op < ops; ++op)
        {
            int64_t key;
            switch (rng() % 4)
            {
            case 0:
                key = o2ram::kDummyLookup;
                break;
            case 1:
                key = int64_t((uint64_t(1) << 41) + rng() % 1000000); // never inserted
                break;
            default:
                if (keys.empty())
                    key = o2ram::kDummyLookup;
                else
                    key = keys[rng() % keys.size()];
            }
            bool recurrent = key != o2ram::kDummyLookup && asked.count(key);
            if (recurrent && !recurrent_rule)
                continue; // outside the functionality's domain
            asked.insert(key);
            bool fail;
            auto want = ref.lookup(key, fail);
            if (fail)
            {
                try
                {
                    t->lookup(key, out.data());
                }
                catch (const o2ram::RecurrentLookup &)
                {
                    continue;
                }
                return "recurrent lookup of " + std::to_string(key) + " not rejected";
            }
            bool found = t->lookup(key, out.data());
            if (found != want.has_value())
                return "lookup " + std::to_string(key) + ": presence differs";
            if (found && std::memcmp(out.data(), want->data(), beta) != 0)
                return "lookup " + std::to_string(key) + ": value differs";
            if (!found)
                for (auto w : out)
                    if (w)
                        return "absent lookup returned a nonzero payload";
        }
        auto ex = t->extract();
        if (ex.size() != n)
            return "extract returned " + std::to_string(ex.size()) + " blocks, expected " + std::to_string(n);
        if (reals_of(ex) != ref.extract())
            return "extracted reals differ";
        return {};
    }
}
