#include "o2ram/oprims.hpp"
#include "o2ram/errors.hpp"

#include <atomic>
#include <memory>
#include <mutex>

#include <tbb/global_control.h>

namespace o2ram
{
    namespace
    {
        std::atomic<int> g_threads{1};
        std::mutex g_ctl_mu;
        std::unique_ptr<tbb::global_control> g_ctl;

        struct RowSwap
        {
            BlockArray &a;
            void operator()(size_t i, size_t j, bool c)
            {
                const auto &r = a.ref();
                trace::read(r, i);
                trace::read(r, j);
                cswap_words(a.row(i), a.row(j), a.stride(), c);
                trace::write(r, i);
                trace::write(r, j);
            }
        };

        std::vector<uint8_t> read_marks(const BlockArray &a)
        {
            std::vector<uint8_t> marks(a.size());
            for (size_t i = 0; i < a.size(); ++i)
            {
                trace::read(a.ref(), i);
                marks[i] = uint8_t(a.aux(i) & 1);
            }
            return marks;
        }

        void copy_rows(BlockArray &dst, size_t doff, const BlockArray &src, size_t soff, size_t len)
        {
            for (size_t i = 0; i < len; ++i)
            {
                trace::read(src.ref(), soff + i);
                std::memcpy(dst.row(doff + i), src.row(soff + i), src.stride() * 8);
                trace::write(dst.ref(), doff + i);
            }
        }
    }

    void set_threads(int t)
    {
        std::lock_guard lk(g_ctl_mu);
        if (t < 1)
            t = 1;
        g_threads = t;
        g_ctl = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism, size_t(t));
    }

    int threads()
    {
        return g_threads.load(std::memory_order_relaxed);
    }

    void ocompact(BlockArray &a)
    {
        auto marks = read_marks(a);
        RowSwap sw{a};
        orcompact(marks, sw);
        a.set_shuffled(false);
    }

    void ocompact_relaxed(BlockArray &a, size_t Z)
    {
        const size_t n = a.size();
        if (Z < 4)
            throw ParameterError("ocompact_relaxed: chunk must be at least 4");
        if (n <= Z)
        {
            ocompact(a);
            return;
        }
        const size_t q = Z / 4, chunks = n / Z, tail = n - chunks * Z;
        auto marks = read_marks(a);
        bool bad = false;
        for (size_t c = 0; c < chunks; ++c)
        {
            std::span<const uint8_t> cm(marks.data() + c * Z, Z);
            size_t cnt = 0;
            for (uint8_t m : cm)
                cnt += m;
            bad |= (cnt < q) | (cnt > Z - q);
            size_t off = c * Z;
            auto sw = [&](size_t i, size_t j, bool cond)
            {
                const auto &r = a.ref();
                trace::read(r, off + i);
                trace::read(r, off + j);
                cswap_words(a.row(off + i), a.row(off + j), a.stride(), cond);
                trace::write(r, off + i);
                trace::write(r, off + j);
            };
            orcompact(cm, sw);
        }
        // surely-marked quarters, compacted middles, surely-unmarked quarters
        const size_t mid = chunks * (Z - 2 * q) + tail;
        BlockArray middle(mid, a.beta());
        for (size_t c = 0; c < chunks; ++c)
            copy_rows(middle, c * (Z - 2 * q), a, c * Z + q, Z - 2 * q);
        copy_rows(middle, chunks * (Z - 2 * q), a, chunks * Z, tail);
        ocompact(middle);
        BlockArray out(n, a.beta());
        for (size_t c = 0; c < chunks; ++c)
            copy_rows(out, c * q, a, c * Z, q);
        copy_rows(out, chunks * q, middle, 0, mid);
        for (size_t c = 0; c < chunks; ++c)
            copy_rows(out, chunks * q + mid + c * q, a, c * Z + Z - q, q);
        a = std::move(out);
        if (bad)
            throw CompactionOverflow("ocompact_relaxed: chunk mark count outside [Z/4, 3Z/4]");
    }

    void oshuffle(BlockArray &a, Tape &tape)
    {
        for (size_t i = 0; i < a.size(); ++i)
        {
            a.set_aux(i, tape.next());
            trace::write(a.ref(), i);
        }
        osort(a, [](const uint64_t *r)
              { return r[1]; });
        a.clear_aux();
        a.set_shuffled(true);
    }

    BlockArray ointersperse(const BlockArray &a, const BlockArray &b, Tape &tape)
    {
        if (a.beta() != b.beta())
            throw ParameterError("ointersperse: payload width mismatch");
        const size_t na = a.size(), n = na + b.size();
        std::vector<uint8_t> marks(n);
        size_t rem = na;
        for (size_t i = 0; i < n; ++i)
        {
            bool bit = tape.below(n - i) < rem;
            marks[i] = bit;
            rem -= bit;
        }
        std::vector<uint8_t> dec;
        dec.reserve(n * (std::bit_width(n) + 1));
        std::vector<uint8_t> work = marks;
        orcompact(marks, [&](size_t i, size_t j, bool c)
                  {
            uint8_t t = uint8_t((work[i] ^ work[j]) & uint8_t(mask_of(c)));
            work[i] ^= t;
            work[j] ^= t;
            dec.push_back(c); });

        BlockArray out(n, a.beta());
        copy_rows(out, 0, a, 0, na);
        copy_rows(out, na, b, 0, b.size());
        size_t k = dec.size();
        auto replay = [&](size_t i, size_t j)
        {
            const auto &r = out.ref();
            trace::read(r, i);
            trace::read(r, j);
            cswap_words(out.row(i), out.row(j), out.stride(), dec[--k]);
            trace::write(r, i);
            trace::write(r, j);
        };
        detail::or_reverse(0, n, replay);
        out.set_shuffled(true);
        return out;
    }

    BlockArray obin_place(const BlockArray &in, uint64_t m, uint64_t cap)
    {
        if (m == 0)
            throw ParameterError("obin_place: need at least one bin");
        const size_t n = in.size(), N = n + m * cap;
        BlockArray w(N, in.beta());
        for (size_t i = 0; i < n; ++i)
        {
            trace::read(in.ref(), i);
            std::memcpy(w.row(i), in.row(i), in.stride() * 8);
            bool real = is_real(in.key(i));
            uint64_t bin = oselect(real, in.aux(i), m);
            w.set_aux(i, bin << 1);
            trace::write(w.ref(), i);
        }
        for (size_t j = 0; j < m * cap; ++j)
        {
            w.set_aux(n + j, ((j / cap) << 1) | 1);
            trace::write(w.ref(), n + j);
        }
        osort(w, [](const uint64_t *r)
              { return r[1]; });
        uint64_t prev = ~uint64_t(0), rank = 0;
        bool overflow = false;
        for (size_t i = 0; i < N; ++i)
        {
            trace::read(w.ref(), i);
            uint64_t a = w.aux(i), bin = a >> 1;
            bool filler = a & 1;
            bool same = bin == prev;
            rank = oselect(same, rank + 1, uint64_t(0));
            prev = bin;
            bool inside = bin < m;
            overflow |= inside & !filler & (rank >= cap);
            w.set_aux(i, uint64_t(inside & (rank < cap)));
            trace::write(w.ref(), i);
        }
        ocompact(w);
        w.resize(m * cap);
        w.clear_aux();
        if (overflow)
            throw BinOverflow("obin_place: a bin received more than its capacity");
        return w;
    }

    void osort_by_key(BlockArray &a)
    {
        osort(a, [](const uint64_t *r)
              { return r[0] ^ (uint64_t(1) << 63); });
    }
}
