#pragma once
// Reference models shared by verify runs and the test binaries.
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "o2ram/block.hpp"

namespace oracle
{
    // hash-table functionality: build over a set, lookup returns and forgets,
    // a second lookup of the same key is a failure
    class FHT
    {
    public:
        explicit FHT(const o2ram::BlockArray &in)
        {
            n_ = in.size();
            for (size_t i = 0; i < in.size(); ++i)
                if (o2ram::is_real(in.key(i)))
                    live_[in.key(i)] = o2ram::value_of(in, i);
        }

        // nullopt payload: absent; fail set when the key was already asked for
        std::optional<std::vector<uint8_t>> lookup(int64_t key, bool &fail)
        {
            fail = false;
            if (key == 0)
                return std::nullopt;
            if (!asked_.insert(key).second)
            {
                fail = true;
                return std::nullopt;
            }
            auto it = live_.find(key);
            if (it == live_.end())
                return std::nullopt;
            auto v = it->second;
            live_.erase(it);
            return v;
        }

        // multiset of remaining reals
        std::map<int64_t, std::vector<uint8_t>> extract() const { return live_; }
        size_t n() const { return n_; }

    private:
        size_t n_;
        std::map<int64_t, std::vector<uint8_t>> live_;
        std::set<int64_t> asked_;
    };

    inline std::map<int64_t, std::vector<uint8_t>> reals_of(const o2ram::BlockArray &a)
    {
        std::map<int64_t, std::vector<uint8_t>> m;
        for (size_t i = 0; i < a.size(); ++i)
            if (o2ram::is_real(a.key(i)))
                m[a.key(i)] = o2ram::value_of(a, i);
        return m;
    }

    // n blocks: keys drawn distinct from [1, key_range], random payloads, the
    // last `dummies` rows dummy
    inline o2ram::BlockArray random_blocks(size_t n, size_t beta, size_t dummies, std::mt19937_64 &rng,
                                           uint64_t key_range = uint64_t(1) << 40)
    {
        o2ram::BlockArray a(n, beta);
        std::set<int64_t> used;
        for (size_t i = 0; i + dummies < n; ++i)
        {
            int64_t k;
            do
                k = int64_t(rng() % key_range) + 1;
            while (!used.insert(k).second);
            a.set_key(i, k);
            for (size_t w = 0; w < beta / 8; ++w)
                a.payload(i)[w] = rng();
        }
        return a;
    }
}
