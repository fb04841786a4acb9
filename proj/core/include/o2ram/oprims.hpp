#pragma once
#include <bit>
#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include <tbb/parallel_invoke.h>

#include "o2ram/block.hpp"
#include "o2ram/tape.hpp"
#include "o2ram/trace.hpp"

namespace o2ram
{
    // worker cap for performance mode; 1 disables internal parallelism
    void set_threads(int threads);
    int threads();

    inline bool parallel_ok()
    {
        return threads() > 1 && !trace::active();
    }

    template <class N>
    concept SortNet = requires(N &n, size_t i, bool d) {
        { n.size() } -> std::convertible_to<size_t>;
        n.cmp_swap(i, i, d);
    };

    namespace detail
    {
        inline constexpr size_t kParGrain = 1 << 12;

        template <SortNet N>
        void bitonic_merge(N &net, size_t lo, size_t cnt, bool asc, bool par)
        {
            if (cnt <= 1)
                return;
            if (std::has_single_bit(cnt) && !(par && cnt >= kParGrain))
            {
                // same comparators as the recursion, level by level
                for (size_t h = cnt / 2; h > 0; h /= 2)
                    for (size_t b = lo; b < lo + cnt; b += 2 * h)
                        for (size_t i = b; i < b + h; ++i)
                            net.cmp_swap(i, i + h, asc);
                return;
            }
            const size_t k = std::bit_floor(cnt - 1);
            for (size_t i = lo; i < lo + cnt - k; ++i)
                net.cmp_swap(i, i + k, asc);
            if (par && cnt >= kParGrain)
                tbb::parallel_invoke([&]
                                     { bitonic_merge(net, lo, k, asc, par); },
                                     [&]
                                     { bitonic_merge(net, lo + k, cnt - k, asc, par); });
            else
            {
                bitonic_merge(net, lo, k, asc, par);
                bitonic_merge(net, lo + k, cnt - k, asc, par);
            }
        }

        template <SortNet N>
        void bitonic_sort(N &net, size_t lo, size_t cnt, bool asc, bool par)
        {
            if (cnt <= 1)
                return;
            const size_t k = cnt / 2;
            if (par && cnt >= kParGrain)
                tbb::parallel_invoke([&]
                                     { bitonic_sort(net, lo, k, !asc, par); },
                                     [&]
                                     { bitonic_sort(net, lo + k, cnt - k, asc, par); });
            else
            {
                bitonic_sort(net, lo, k, !asc, par);
                bitonic_sort(net, lo + k, cnt - k, asc, par);
            }
            bitonic_merge(net, lo, cnt, asc, par);
        }
    }

    // Bitonic network on any n; comparator sequence depends only on n.
    template <SortNet N>
    void bitonic_sort(N &net)
    {
        detail::bitonic_sort(net, 0, net.size(), true, parallel_ok());
    }

    template <class KeyFn>
    struct BlockNet
    {
        BlockArray &a;
        KeyFn key;
        bool traced = trace::active();

        size_t size() const { return a.size(); }
        void cmp_swap(size_t i, size_t j, bool asc)
        {
            const auto &r = a.ref();
            if (traced)
            {
                trace::read(r, i);
                trace::read(r, j);
            }
            uint64_t *x = a.row(i), *y = a.row(j);
            auto kx = key(x), ky = key(y);
            bool sw = asc ? (ky < kx) : (kx < ky);
            cswap_words(x, y, a.stride(), sw);
            if (traced)
            {
                trace::write(r, i);
                trace::write(r, j);
            }
        }
    };

    // key receives a row pointer: row[0] is the key word, row[1] aux
    template <class KeyFn>
    void osort(BlockArray &a, KeyFn key)
    {
        BlockNet<KeyFn> net{a, key};
        bitonic_sort(net);
        a.set_shuffled(false);
    }

    template <class T, class KeyFn>
    struct SpanNet
    {
        std::span<T> v;
        const trace::ArrayRef &ref;
        size_t base;
        KeyFn key;
        bool traced = trace::active();

        size_t size() const { return v.size(); }
        void cmp_swap(size_t i, size_t j, bool asc)
        {
            if (traced)
            {
                trace::read(ref, base + i);
                trace::read(ref, base + j);
            }
            auto kx = key(v[i]), ky = key(v[j]);
            bool sw = asc ? (ky < kx) : (kx < ky);
            cswap_pod(v[i], v[j], sw);
            if (traced)
            {
                trace::write(ref, base + i);
                trace::write(ref, base + j);
            }
        }
    };

    // sort a span of POD records; base offsets trace indices into a larger array
    template <class T, class KeyFn>
    void osort(std::span<T> v, const trace::ArrayRef &ref, size_t base, KeyFn key)
    {
        SpanNet<T, KeyFn> net{v, ref, base, key};
        bitonic_sort(net);
    }

    namespace detail
    {
        // Offset compaction on a power-of-two range: marked items end up at
        // positions (z + rank) mod n. P holds prefix sums of the original marks.
        template <class Swap>
        void oroff_compact(const std::vector<uint32_t> &P, size_t off, size_t n, size_t z, Swap &swap)
        {
            if (n <= 1)
                return;
            if (n == 2)
            {
                bool m0 = P[off + 1] - P[off], m1 = P[off + 2] - P[off + 1];
                swap(off, off + 1, bool((!m0 & m1) ^ (z & 1)));
                return;
            }
            const size_t h = n / 2;
            const size_t m = P[off + h] - P[off];
            oroff_compact(P, off, h, z % h, swap);
            oroff_compact(P, off + h, h, (z + m) % h, swap);
            const bool s = (((z % h) + m) >= h) ^ (z >= h);
            const size_t cut = (z + m) % h;
            for (size_t i = 0; i < h; ++i)
                swap(off + i, off + i + h, s ^ (i >= cut));
        }

        template <class Swap>
        void or_compact(const std::vector<uint32_t> &P, size_t off, size_t n, Swap &swap)
        {
            if (n == 0)
                return;
            const size_t n1 = std::bit_floor(n), n2 = n - n1;
            const size_t m = P[off + n2] - P[off];
            or_compact(P, off, n2, swap);
            oroff_compact(P, off + n2, n1, (n1 - n2 + m) % n1, swap);
            for (size_t i = 0; i < n2; ++i)
                swap(off + i, off + i + n1, i >= m);
        }

        template <class Swap>
        void oroff_reverse(size_t off, size_t n, Swap &swap)
        {
            if (n <= 1)
                return;
            if (n == 2)
            {
                swap(off, off + 1);
                return;
            }
            const size_t h = n / 2;
            for (size_t i = h; i-- > 0;)
                swap(off + i, off + i + h);
            oroff_reverse(off + h, h, swap);
            oroff_reverse(off, h, swap);
        }

        template <class Swap>
        void or_reverse(size_t off, size_t n, Swap &swap)
        {
            if (n == 0)
                return;
            const size_t n1 = std::bit_floor(n), n2 = n - n1;
            for (size_t i = n2; i-- > 0;)
                swap(off + i, off + i + n1);
            oroff_reverse(off + n2, n1, swap);
            or_reverse(off, n2, swap);
        }
    }

    // Order-preserving compaction network. marks[i] != 0 selects item i;
    // swap(i, j, cond) must exchange items i and j iff cond.
    template <class Swap>
    void orcompact(std::span<const uint8_t> marks, Swap &&swap)
    {
        std::vector<uint32_t> P(marks.size() + 1, 0);
        for (size_t i = 0; i < marks.size(); ++i)
            P[i + 1] = P[i] + (marks[i] != 0);
        detail::or_compact(P, 0, marks.size(), swap);
    }

    // Compaction of a POD span; mark(T) picks the items moved to the front.
    template <class T, class MarkFn>
    void ocompact(std::span<T> v, const trace::ArrayRef &ref, size_t base, MarkFn mark)
    {
        std::vector<uint8_t> marks(v.size());
        for (size_t i = 0; i < v.size(); ++i)
        {
            trace::read(ref, base + i);
            marks[i] = mark(v[i]);
        }
        orcompact(marks, [&](size_t i, size_t j, bool c)
                  {
            trace::read(ref, base + i);
            trace::read(ref, base + j);
            cswap_pod(v[i], v[j], c);
            trace::write(ref, base + i);
            trace::write(ref, base + j); });
    }

    // ---- block-array primitives (marks and scratch keys live in aux) ----

    // marked (aux & 1) rows move to the front, order preserved
    void ocompact(BlockArray &a);

    // input must be shuffled with exactly half of the rows marked
    void ocompact_relaxed(BlockArray &a, size_t chunk);

    void oshuffle(BlockArray &a, Tape &tape);

    // uniformly random interleaving of two shuffled arrays
    BlockArray ointersperse(const BlockArray &a, const BlockArray &b, Tape &tape);

    // Real rows go to bin aux(i) < m; result has m*cap rows, bin j at
    // [j*cap, (j+1)*cap), reals first. Throws BinOverflow if a bin exceeds cap.
    BlockArray obin_place(const BlockArray &in, uint64_t m, uint64_t cap);

    // sort by key word as signed integer
    void osort_by_key(BlockArray &a);
}
