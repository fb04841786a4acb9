#pragma once
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "o2ram/hash_table.hpp"
#include "o2ram/planner.hpp"
#include "o2ram/trace.hpp"

namespace o2ram
{
    using LevelPolicy = std::function<SchemeSpec(unsigned level, size_t beta)>;

    // fixed rule used when no planner output is supplied
    SchemeSpec default_level_policy(unsigned level, size_t beta);

    // policy reading a plan_levels() result; levels outside the plan use the default
    LevelPolicy planned_policy(const std::vector<SchemeChoice> &plan, unsigned first_level);

    struct OramConfig
    {
        uint64_t N = 0; // rounded up to a power of two >= 2
        size_t beta = 8;
        unsigned top_log = 8; // top array holds 2^min(top_log, L-1) blocks
        double log2_delta = -64;
        std::optional<uint64_t> seed; // empty: fresh entropy
        LevelPolicy policy;
        bool ledger_check = kDebugChecks;
    };

    struct OramStats
    {
        uint64_t accesses = 0;
        std::vector<uint64_t> rebuilds; // indexed by level
    };

    // Level cascade shared by the ORAM and the map. Keys are positive.
    class LevelStack
    {
    public:
        LevelStack(const OramConfig &cfg, BlockArray bottom, bool map_mode);

        // Looks key up on every level, applies the write, re-appends to the top
        // and rebuilds when the top fills. insert: append even when absent.
        bool access(int64_t key, bool write, bool insert, const uint64_t *v, uint64_t *out);

        uint64_t N() const { return N_; }
        size_t beta() const { return beta_; }
        unsigned L() const { return L_; }
        unsigned top_level() const { return l0_; }
        uint64_t top_fill() const { return top_n_; }
        bool occupied(unsigned level) const;
        Scheme level_scheme(unsigned level) const;
        const OramStats &stats() const { return stats_; }
        uint64_t live() const { return live_; }
        void set_live(uint64_t v) { live_ = v; }
        uint64_t count_real() const;
        // debug only: 1 per real probe, 0 per dummy probe, in level order, for the last access
        const std::vector<uint8_t> &last_probes() const { return last_probes_; }

        void save(std::ostream &os) const;
        static std::unique_ptr<LevelStack> load(std::istream &is, LevelPolicy policy, bool ledger_check);

    private:
        LevelStack() = default;
        void rebuild();
        void check_ledger() const;

        uint64_t N_ = 0;
        size_t beta_ = 8;
        unsigned L_ = 1, l0_ = 0;
        double log2_delta_ = -64;
        bool map_ = false;
        bool ledger_check_ = false;
        LevelPolicy policy_;
        std::unique_ptr<Tape> tape_;
        BlockArray top_;
        uint64_t top_n_ = 0;
        std::vector<std::unique_ptr<HashTable>> levels_; // index = level
        uint64_t live_ = 0;
        OramStats stats_;
        std::vector<uint8_t> last_probes_;
    };

    class Oram
    {
    public:
        // init: (address, value) pairs; other addresses start zeroed
        explicit Oram(OramConfig cfg,
                      const std::vector<std::pair<uint64_t, std::vector<uint8_t>>> &init = {});

        std::vector<uint8_t> access(trace::Op op, uint64_t addr, const std::vector<uint8_t> &v = {});
        std::vector<uint8_t> read(uint64_t addr) { return access(trace::Op::read, addr); }
        std::vector<uint8_t> write(uint64_t addr, const std::vector<uint8_t> &v)
        {
            return access(trace::Op::write, addr, v);
        }

        uint64_t N() const { return stack_->N(); }
        size_t beta() const { return stack_->beta(); }
        const LevelStack &levels() const { return *stack_; }

        void save(std::ostream &os) const;
        static Oram load(std::istream &is, LevelPolicy policy = {}, bool ledger_check = kDebugChecks);

    private:
        Oram() = default;
        std::unique_ptr<LevelStack> stack_;
    };

    // key-value store over the same cascade; keys in [0, 2^62 - 1)
    class OMap
    {
    public:
        explicit OMap(OramConfig cfg);

        std::optional<std::vector<uint8_t>> get(uint64_t key);
        void put(uint64_t key, const std::vector<uint8_t> &v);
        // word-level forms: absent keys read as zero
        bool get_words(uint64_t key, uint64_t *out);
        void put_words(uint64_t key, const uint64_t *v);
        // oblivious choice between get(key) and an access that touches nothing real
        bool get_or_dummy(bool real, uint64_t key, uint64_t *out);

        uint64_t N() const { return stack_->N(); }
        size_t beta() const { return stack_->beta(); }
        const LevelStack &levels() const { return *stack_; }

        void save(std::ostream &os) const;
        static OMap load(std::istream &is, LevelPolicy policy = {}, bool ledger_check = kDebugChecks);

    private:
        OMap() = default;
        static int64_t stored(uint64_t key);
        std::unique_ptr<LevelStack> stack_;
    };
}
