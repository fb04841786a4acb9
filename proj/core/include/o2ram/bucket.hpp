#pragma once
#include <functional>

#include "o2ram/hash_table.hpp"

namespace o2ram
{
    struct BucketSizing
    {
        uint64_t n = 0, m = 1, ell = 1;
        double log2_delta = -64;
    };

    BucketSizing bucket_sizing(uint64_t n, uint64_t m, double log2_delta);

    // PRF bins laid out as m runs of ell slots; shared with the two-tier majors
    BlockArray bucket_place(const BlockArray &blocks, const Prf &prf, uint64_t m, uint64_t ell);

    class BucketTable final : public HashTable
    {
    public:
        struct Options
        {
            double log2_delta = -64;
            uint64_t ell_override = 0;
            int max_attempts = 3;
        };

        BucketTable(const BlockArray &blocks, uint64_t m, Tape &tape, Options opt);
        BucketTable(const BlockArray &blocks, uint64_t m, Tape &tape) : BucketTable(blocks, m, tape, Options{}) {}

        bool lookup(int64_t key, uint64_t *out) override;
        using HashTable::lookup;
        BlockArray extract() override;
        Scheme scheme() const override { return Scheme::bucket; }
        uint64_t capacity() const override { return sizing_.n; }
        size_t beta() const override { return bins_.beta(); }
        uint64_t count_real() const override { return o2ram::count_real(bins_); }
        void save(std::ostream &os) const override;
        static std::unique_ptr<BucketTable> load(std::istream &is, Tape &tape);

        const BucketSizing &sizing() const { return sizing_; }
        int attempts() const { return attempts_; }
        const BlockArray &slots() const { return bins_; }
        uint64_t bin_of(int64_t key) const { return prf_(uint64_t(key), sizing_.m); }

    private:
        BucketTable(Tape &tape) : tape_(&tape) {}

        BlockArray bins_;
        Prf prf_;
        BucketSizing sizing_;
        uint64_t dummy_ctr_ = 0;
        int attempts_ = 0;
        Tape *tape_;
    };

    // Golden-section search over log2 m in [0, log2 n]: at most max_probes
    // distinct probes, each the median of three sampler calls.
    uint64_t plan_bucket_count(uint64_t n, const std::function<double(uint64_t m)> &sampler,
                               int max_probes = 12);
}
