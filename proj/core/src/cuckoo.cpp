#include "o2ram/cuckoo.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/omatch.hpp"
#include "o2ram/oprims.hpp"
#include "o2ram/probcalc.hpp"

#include <algorithm>

namespace o2ram
{
    CuckooSizing cuckoo_sizing(uint64_t n, unsigned k)
    {
        if (k < 2 || k > 255)
            throw ParameterError("cuckoo table needs 2 <= k <= 255");
        if (n >= (uint64_t(1) << 31))
            throw ParameterError("cuckoo table too large");
        CuckooSizing s;
        s.n = n;
        s.k = k;
        s.m = std::max<uint64_t>(2 * n, k);
        s.b = s.m / k;
        s.tau = probcalc::cuckoo_tau(std::max<uint64_t>(n, 1));
        return s;
    }

    uint64_t CuckooTable::candidate(int64_t key, unsigned j) const
    {
        return prfs_[j](uint64_t(key), sizing_.sub_size(j)) + j * sizing_.b;
    }

    CuckooTable::CuckooTable(const BlockArray &blocks, Tape &tape, Options opt) : tape_(&tape)
    {
        const uint64_t n = blocks.size();
        unsigned k = opt.k ? opt.k : probcalc::min_hash_count(std::max<uint64_t>(n, 1), opt.log2_delta);
        sizing_ = cuckoo_sizing(n, k);

        // dummy rows hash a per-row tag so every left vertex has k distinct-looking edges
        std::vector<uint64_t> tags(n);
        for (size_t i = 0; i < n; ++i)
        {
            trace::read(blocks.ref(), i);
            int64_t x = blocks.key(i);
            tags[i] = oselect(is_real(x), uint64_t(x), (uint64_t(1) << 63) | i);
        }

        for (attempts_ = 1;; ++attempts_)
        {
            prfs_.clear();
            for (unsigned j = 0; j < k; ++j)
                prfs_.emplace_back(tape.prf_key());
            std::vector<Edge> edges(size_t(k) * n);
            for (unsigned j = 0; j < k; ++j)
                for (size_t i = 0; i < n; ++i)
                    edges[j * n + i] = Edge{uint32_t(i), uint32_t(candidate(int64_t(tags[i]), j))};
            Matching M = opt.grouped
                             ? omatch_grouped(edges, k, uint32_t(n), uint32_t(sizing_.m), sizing_.tau)
                             : omatch(edges, uint32_t(n), uint32_t(sizing_.m), sizing_.tau);
            // only the success bit is revealed
            if (matched_count(M) == n)
            {
                BlockArray w = blocks;
                for (size_t i = 0; i < n; ++i)
                {
                    trace::read(w.ref(), i);
                    w.set_aux(i, uint64_t(M.pairs[i]));
                    trace::write(w.ref(), i);
                }
                slots_ = obin_place(w, sizing_.m, 1);
                return;
            }
            if (attempts_ >= opt.max_attempts)
                throw BuildFailure("cuckoo build: matching incomplete after " + std::to_string(attempts_) +
                                   " attempts");
        }
    }

    bool CuckooTable::lookup(int64_t key, uint64_t *out)
    {
        note_lookup(key);
        if (prfs_.empty())
            throw ContractViolation("lookup on an extracted cuckoo table");
        const bool dummy = key == kDummyLookup;
        const int64_t x = oselect(dummy, -int64_t(dummy_ctr_ + 1), key);
        dummy_ctr_ += dummy;
        const size_t pw = slots_.stride() - 2;
        std::fill(out, out + pw, 0);
        bool found = false;
        for (unsigned j = 0; j < sizing_.k; ++j)
        {
            const uint64_t slot = candidate(x, j);
            trace::read(slots_.ref(), slot, 1, trace::Derived::prf_derived);
            uint64_t *r = slots_.row(slot);
            bool hit = int64_t(r[0]) == x;
            cmov_words(out, r + 2, pw, hit);
            r[0] = uint64_t(oselect(hit, kDummyKey, int64_t(r[0])));
            trace::write(slots_.ref(), slot, 1, trace::Derived::prf_derived);
            found |= hit;
        }
        return found;
    }

    BlockArray CuckooTable::extract()
    {
        BlockArray out = extract_reals(std::move(slots_), sizing_.n, *tape_);
        slots_ = BlockArray(0, out.beta());
        prfs_.clear();
        return out;
    }

    void CuckooTable::save(std::ostream &os) const
    {
        io::put_u64(os, sizing_.n);
        io::put_u64(os, sizing_.k);
        io::put_u64(os, dummy_ctr_);
        for (auto &p : prfs_)
            io::put_key(os, p.key());
        io::put_blocks(os, slots_);
    }

    std::unique_ptr<CuckooTable> CuckooTable::load(std::istream &is, Tape &tape)
    {
        std::unique_ptr<CuckooTable> t(new CuckooTable(tape));
        uint64_t n = io::get_u64(is), k = io::get_u64(is);
        t->sizing_ = cuckoo_sizing(n, unsigned(std::min<uint64_t>(k, 256)));
        t->dummy_ctr_ = io::get_u64(is);
        for (unsigned j = 0; j < t->sizing_.k; ++j)
            t->prfs_.emplace_back(io::get_key(is));
        t->slots_ = io::get_blocks(is);
        if (t->slots_.size() != t->sizing_.m)
            throw ParameterError("snapshot: cuckoo table size mismatch");
        return t;
    }
}
