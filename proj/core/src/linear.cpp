#include "o2ram/hash_table.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/oprims.hpp"

#include <istream>
#include <ostream>

namespace o2ram
{
    const char *to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::linear:
            return "linear";
        case Scheme::bucket:
            return "bucket";
        case Scheme::cuckoo:
            return "cuckoo";
        case Scheme::twotier:
            return "twotier";
        }
        return "?";
    }

    Scheme scheme_from_string(const std::string &s)
    {
        for (Scheme x : {Scheme::linear, Scheme::bucket, Scheme::cuckoo, Scheme::twotier})
            if (s == to_string(x))
                return x;
        throw ParameterError("unknown scheme '" + s + "'");
    }

    std::optional<std::vector<uint8_t>> HashTable::lookup(int64_t key)
    {
        std::vector<uint64_t> buf(beta() / 8);
        bool found = lookup(key, buf.data());
        if (!found)
            return std::nullopt;
        std::vector<uint8_t> v(beta());
        std::memcpy(v.data(), buf.data(), beta());
        return v;
    }

    void HashTable::note_lookup(int64_t key)
    {
        if (!check_recurrent_ || !is_real(key))
            return;
        if (!seen_.insert(key).second)
            throw RecurrentLookup("lookup of recurrent key " + std::to_string(key));
    }

    bool oscan_consume(BlockArray &a, size_t base, size_t len, int64_t key, uint64_t *out,
                       trace::Derived d)
    {
        const size_t pw = a.stride() - 2;
        std::fill(out, out + pw, 0);
        trace::read(a.ref(), base, len, d);
        bool found = false;
        for (size_t s = 0; s < len; ++s)
        {
            uint64_t *r = a.row(base + s);
            bool hit = int64_t(r[0]) == key;
            cmov_words(out, r + 2, pw, hit);
            r[0] = uint64_t(oselect(hit, kDummyKey, int64_t(r[0])));
            found |= hit;
        }
        trace::write(a.ref(), base, len, d);
        return found;
    }

    uint64_t count_real(const BlockArray &a)
    {
        uint64_t c = 0;
        for (size_t i = 0; i < a.size(); ++i)
            c += is_real(a.key(i));
        return c;
    }

    BlockArray extract_reals(BlockArray slots, uint64_t n, Tape &tape)
    {
        for (size_t i = 0; i < slots.size(); ++i)
        {
            trace::read(slots.ref(), i);
            slots.set_aux(i, is_real(slots.key(i)));
            trace::write(slots.ref(), i);
        }
        ocompact(slots);
        slots.resize(n);
        slots.clear_aux();
        oshuffle(slots, tape);
        return slots;
    }

    LinearTable::LinearTable(const BlockArray &blocks, Tape &tape) : slots_(blocks), tape_(&tape)
    {
        slots_.clear_aux();
        slots_.set_shuffled(false);
    }

    bool LinearTable::lookup(int64_t key, uint64_t *out)
    {
        note_lookup(key);
        // dummy lookups scan with a key no slot carries
        int64_t k = oselect(key == kDummyLookup, int64_t(-1), key);
        if (slots_.empty())
        {
            std::fill(out, out + beta() / 8, 0);
            return false;
        }
        return oscan_consume(slots_, 0, slots_.size(), k, out, trace::Derived::data_independent);
    }

    BlockArray LinearTable::extract()
    {
        BlockArray out = std::move(slots_);
        oshuffle(out, *tape_);
        slots_ = BlockArray(0, out.beta());
        return out;
    }

    uint64_t LinearTable::count_real() const
    {
        return o2ram::count_real(slots_);
    }

    void LinearTable::save(std::ostream &os) const
    {
        io::put_blocks(os, slots_);
    }

    std::unique_ptr<LinearTable> LinearTable::load(std::istream &is, Tape &tape)
    {
        return std::unique_ptr<LinearTable>(new LinearTable(Raw{}, io::get_blocks(is), tape));
    }

    namespace io
    {
        void put_u64(std::ostream &os, uint64_t v)
        {
            os.write(reinterpret_cast<const char *>(&v), 8);
        }

        uint64_t get_u64(std::istream &is)
        {
            uint64_t v;
            if (!is.read(reinterpret_cast<char *>(&v), 8))
                throw ParameterError("snapshot truncated");
            return v;
        }

        void put_blocks(std::ostream &os, const BlockArray &a)
        {
            put_u64(os, a.size());
            put_u64(os, a.beta());
            if (a.size())
                os.write(reinterpret_cast<const char *>(a.row(0)), std::streamsize(a.size() * a.stride() * 8));
        }

        BlockArray get_blocks(std::istream &is)
        {
            uint64_t n = get_u64(is), beta = get_u64(is);
            if (beta == 0 || beta % 8 || beta > (1u << 20) || n > (uint64_t(1) << 36))
                throw ParameterError("snapshot: bad block array header");
            BlockArray a(n, beta);
            if (n && !is.read(reinterpret_cast<char *>(a.row(0)), std::streamsize(n * a.stride() * 8)))
                throw ParameterError("snapshot truncated");
            return a;
        }

        void put_key(std::ostream &os, const PrfKey &k)
        {
            os.write(reinterpret_cast<const char *>(k.bytes.data()), 16);
        }

        PrfKey get_key(std::istream &is)
        {
            PrfKey k;
            if (!is.read(reinterpret_cast<char *>(k.bytes.data()), 16))
                throw ParameterError("snapshot truncated");
            return k;
        }
    }
}
