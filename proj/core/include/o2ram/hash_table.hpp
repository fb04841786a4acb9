#pragma once
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "o2ram/block.hpp"
#include "o2ram/tape.hpp"

namespace o2ram
{
    enum class Scheme : uint8_t
    {
        linear,
        bucket,
        cuckoo,
        twotier
    };

    const char *to_string(Scheme s);
    Scheme scheme_from_string(const std::string &s);

    // key 0 is never stored; passing it performs a dummy lookup
    inline constexpr int64_t kDummyLookup = 0;

#ifdef NDEBUG
    inline constexpr bool kDebugChecks = false;
#else
    inline constexpr bool kDebugChecks = true;
#endif

    // Build / lookup / extract table with consume-on-lookup semantics.
    class HashTable
    {
    public:
        virtual ~HashTable() = default;

        // Copies the payload into out (beta/8 words, zeroed when absent) and
        // returns whether the key was present. The matched entry becomes a dummy.
        virtual bool lookup(int64_t key, uint64_t *out) = 0;
        // n blocks: every never-looked-up real plus dummies, shuffled
        virtual BlockArray extract() = 0;
        virtual Scheme scheme() const = 0;
        virtual uint64_t capacity() const = 0;
        virtual size_t beta() const = 0;
        // real blocks currently stored (debug inspection only, not oblivious)
        virtual uint64_t count_real() const = 0;
        virtual void save(std::ostream &os) const = 0;

        std::optional<std::vector<uint8_t>> lookup(int64_t key);

        void set_check_recurrent(bool on) { check_recurrent_ = on; }

    protected:
        void note_lookup(int64_t key);

        bool check_recurrent_ = kDebugChecks;
        std::unordered_set<int64_t> seen_;
    };

    class LinearTable final : public HashTable
    {
    public:
        LinearTable(const BlockArray &blocks, Tape &tape);
        bool lookup(int64_t key, uint64_t *out) override;
        using HashTable::lookup;
        BlockArray extract() override;
        Scheme scheme() const override { return Scheme::linear; }
        uint64_t capacity() const override { return slots_.size(); }
        size_t beta() const override { return slots_.beta(); }
        uint64_t count_real() const override;
        void save(std::ostream &os) const override;
        static std::unique_ptr<LinearTable> load(std::istream &is, Tape &tape);

    private:
        struct Raw
        {
        };
        LinearTable(Raw, BlockArray slots, Tape &tape) : slots_(std::move(slots)), tape_(&tape) {}
        BlockArray slots_;
        Tape *tape_;
    };

    // scan rows [base, base+len) consuming the row whose key equals key
    bool oscan_consume(BlockArray &a, size_t base, size_t len, int64_t key, uint64_t *out,
                       trace::Derived d);

    // compact reals to the front, keep n rows, shuffle
    BlockArray extract_reals(BlockArray slots, uint64_t n, Tape &tape);

    uint64_t count_real(const BlockArray &a);

    namespace io
    {
        void put_u64(std::ostream &os, uint64_t v);
        uint64_t get_u64(std::istream &is);
        void put_blocks(std::ostream &os, const BlockArray &a);
        BlockArray get_blocks(std::istream &is);
        void put_key(std::ostream &os, const PrfKey &k);
        PrfKey get_key(std::istream &is);
    }
}
