#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "o2ram/hash_table.hpp"

namespace o2ram
{
    enum class Role : uint8_t
    {
        level,
        overflow_pile
    };

    struct SchemeSpec
    {
        Scheme scheme = Scheme::linear;
        uint64_t bucket_m = 0;              // bucket
        double eps = 0;                     // twotier
        Scheme overflow = Scheme::cuckoo;   // twotier overflow pile
        uint64_t overflow_m = 0;            // bucket overflow pile

        std::string token() const;
    };

    struct SchemeChoice
    {
        SchemeSpec spec;
        double cost = 0; // seconds for build + t lookups + extract
    };

    // fixed: build + extract seconds; per_lookup: seconds per lookup
    struct ProbeCost
    {
        double fixed = 0, per_lookup = 0;
        double at(uint64_t t) const { return fixed + double(t) * per_lookup; }
    };

    std::string machine_fingerprint();

    // Plain-text measurement cache, one record per line:
    //   n beta scheme fingerprint cost_seconds
    class CostCache
    {
    public:
        CostCache() = default;
        explicit CostCache(std::string path);

        std::optional<double> get(uint64_t n, size_t beta, const std::string &scheme,
                                  const std::string &fp) const;
        void put(uint64_t n, size_t beta, const std::string &scheme, const std::string &fp, double cost);

        bool persistent() const { return !path_.empty(); }
        size_t size() const { return map_.size(); }
        size_t skipped_lines() const { return skipped_; }

    private:
        using Key = std::tuple<uint64_t, size_t, std::string, std::string>;
        std::string path_;
        std::map<Key, double> map_;
        size_t skipped_ = 0;
    };

    class Planner
    {
    public:
        using Measure = std::function<ProbeCost(const SchemeSpec &, uint64_t n, size_t beta, uint64_t t)>;

        struct Options
        {
            double log2_delta = -64;
            double C = 1024;
            int bucket_probes = 6;
            uint64_t seed = 1;
            Measure measure; // default: build, time and tear down real tables
        };

        Planner(CostCache cache, Options opt);
        explicit Planner(CostCache cache) : Planner(std::move(cache), Options{}) {}

        SchemeChoice plan(uint64_t n, uint64_t t, size_t beta, Role role = Role::level, bool allow_bucket = true);

        // levels 2^lo..2^hi of one ORAM; a level receives about 2^i lookups
        // per rebuild. Once two-tier wins a level, bucket is dropped above it.
        std::vector<SchemeChoice> plan_levels(unsigned lo, unsigned hi, size_t beta);

        ProbeCost cost_of(const SchemeSpec &s, uint64_t n, size_t beta, uint64_t t);
        bool eligible(Scheme s, uint64_t n, Role role, bool allow_bucket) const;
        const std::vector<std::string> &log() const { return log_; }
        CostCache &cache() { return cache_; }

    private:
        CostCache cache_;
        Options opt_;
        std::string fp_;
        std::vector<std::string> log_;
    };

    // wall-clock probe: build + q lookups + extract on random blocks
    ProbeCost measure_scheme(const SchemeSpec &s, uint64_t n, size_t beta, uint64_t t, uint64_t seed,
                             double log2_delta);

    std::unique_ptr<HashTable> build_spec(const SchemeSpec &s, const BlockArray &blocks, Tape &tape,
                                          double log2_delta);
}
