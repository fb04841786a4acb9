#pragma once
// Oracle runs and trace audits behind `o2ram verify` and the acceptance binary.
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "o2ram/hash_table.hpp"
#include "o2ram/horam.hpp"

namespace o2ram::checks
{
    struct Tally
    {
        std::string name;
        uint64_t cases = 0, failures = 0;
        std::string first; // first failure message

        void check(bool ok, const std::string &msg);
        void merge(const Tally &o);
        bool ok() const { return failures == 0; }
    };

    void print_table(std::ostream &os, const std::vector<Tally> &rows);

    // ---- functional oracles ----

    // sort, compaction, shuffle, intersperse and bin placement against std algorithms
    std::vector<Tally> oprims_oracle(size_t n, int reps, uint64_t seed);

    using TableFactory = std::function<std::unique_ptr<HashTable>(const BlockArray &, Tape &)>;

    // `count` random build/lookup/extract schedules with n drawn from [1, n_max]
    Tally fht_oracle(const std::string &name, const TableFactory &make, int count, size_t n_min, size_t n_max,
                     size_t beta, uint64_t seed, bool recurrent_rule);

    // ops random reads/writes against a plain array
    Tally oram_oracle(uint64_t N, size_t beta, uint64_t ops, uint64_t seed, LevelPolicy policy = {});

    // ops random gets/puts against std::map
    Tally omap_oracle(uint64_t N, size_t beta, uint64_t ops, uint64_t seed);

    // ---- trace audits ----

    // same tape, different data: full traces must be identical
    std::vector<Tally> audit_oprims(int pairs, size_t n, uint64_t seed);

    // lookups of unrelated keys on equal-state tables give equal shapes
    std::vector<Tally> audit_lookup_shapes(int pairs, size_t n, uint64_t seed);

    // unrelated access sequences on equal-state ORAMs give equal shapes
    Tally audit_oram_shapes(int pairs, uint64_t N, uint64_t seed);

    // chi-square test on the PRF-derived indices seen in lookup traces
    std::vector<Tally> audit_prf_uniformity(size_t samples, uint64_t seed, double alpha = 0.001);
}
