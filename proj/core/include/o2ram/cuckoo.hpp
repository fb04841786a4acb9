#pragma once
#include <vector>

#include "o2ram/hash_table.hpp"

namespace o2ram
{
    struct CuckooSizing
    {
        uint64_t n = 0, m = 0, b = 0;
        unsigned k = 3;
        uint64_t tau = 30;

        uint64_t sub_size(unsigned j) const { return j + 1 < k ? b : m - b * (k - 1); }
    };

    CuckooSizing cuckoo_sizing(uint64_t n, unsigned k);

    class CuckooTable final : public HashTable
    {
    public:
        struct Options
        {
            double log2_delta = -64;
            unsigned k = 0; // 0: smallest k meeting log2_delta
            int max_attempts = 3;
            bool grouped = true;
        };

        CuckooTable(const BlockArray &blocks, Tape &tape, Options opt);
        CuckooTable(const BlockArray &blocks, Tape &tape) : CuckooTable(blocks, tape, Options{}) {}

        bool lookup(int64_t key, uint64_t *out) override;
        using HashTable::lookup;
        BlockArray extract() override;
        Scheme scheme() const override { return Scheme::cuckoo; }
        uint64_t capacity() const override { return sizing_.n; }
        size_t beta() const override { return slots_.beta(); }
        uint64_t count_real() const override { return o2ram::count_real(slots_); }
        void save(std::ostream &os) const override;
        static std::unique_ptr<CuckooTable> load(std::istream &is, Tape &tape);

        const CuckooSizing &sizing() const { return sizing_; }
        int attempts() const { return attempts_; }
        const BlockArray &slots() const { return slots_; }
        // candidate slot of key in sub-table j
        uint64_t candidate(int64_t key, unsigned j) const;

    private:
        CuckooTable(Tape &tape) : tape_(&tape) {}

        BlockArray slots_;
        std::vector<Prf> prfs_;
        CuckooSizing sizing_;
        uint64_t dummy_ctr_ = 0;
        int attempts_ = 0;
        Tape *tape_;
    };
}
