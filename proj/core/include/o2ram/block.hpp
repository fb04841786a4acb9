#pragma once
#include <cstdint>
#include <cstring>
#include <vector>

#include "o2ram/trace.hpp"

namespace o2ram
{
    // Real keys are positive. Every empty, padding, filler or consumed slot
    // carries kDummyKey; dummy lookups use -(ctr+1), which never reaches it.
    inline constexpr int64_t kDummyKey = -(int64_t(1) << 62);

    inline bool is_real(int64_t key) { return key > 0; }

    inline uint64_t mask_of(bool c) { return uint64_t(0) - uint64_t(c); }

    inline uint64_t oselect(bool c, uint64_t a, uint64_t b)
    {
        return b ^ ((a ^ b) & mask_of(c));
    }

    inline int64_t oselect(bool c, int64_t a, int64_t b)
    {
        return int64_t(oselect(c, uint64_t(a), uint64_t(b)));
    }

    inline void cswap_words(uint64_t *a, uint64_t *b, size_t w, bool c)
    {
        const uint64_t m = mask_of(c);
        for (size_t i = 0; i < w; ++i)
        {
            uint64_t t = (a[i] ^ b[i]) & m;
            a[i] ^= t;
            b[i] ^= t;
        }
    }

    inline void cmov_words(uint64_t *dst, const uint64_t *src, size_t w, bool c)
    {
        const uint64_t m = mask_of(c);
        for (size_t i = 0; i < w; ++i)
            dst[i] ^= (dst[i] ^ src[i]) & m;
    }

    template <class T>
    inline void cswap_pod(T &a, T &b, bool c)
    {
        static_assert(sizeof(T) % 8 == 0 && std::is_trivially_copyable_v<T>);
        constexpr size_t w = sizeof(T) / 8;
        uint64_t x[w], y[w];
        std::memcpy(x, &a, sizeof(T));
        std::memcpy(y, &b, sizeof(T));
        cswap_words(x, y, w, c);
        std::memcpy(&a, x, sizeof(T));
        std::memcpy(&b, y, sizeof(T));
    }

    template <class T>
    inline void cmov_pod(T &dst, const T &src, bool c)
    {
        static_assert(sizeof(T) % 8 == 0 && std::is_trivially_copyable_v<T>);
        constexpr size_t w = sizeof(T) / 8;
        uint64_t x[w], y[w];
        std::memcpy(x, &dst, sizeof(T));
        std::memcpy(y, &src, sizeof(T));
        cmov_words(x, y, w, c);
        std::memcpy(&dst, x, sizeof(T));
    }

    struct Block
    {
        int64_t key = kDummyKey;
        uint64_t aux = 0;
        std::vector<uint8_t> value;

        bool operator==(const Block &) const = default;
    };

    Block oselect(bool c, const Block &a, const Block &b);

    // Rows of [key, aux, payload...] 64-bit words. beta is the payload width
    // in bytes and must be a positive multiple of 8.
    class BlockArray
    {
    public:
        BlockArray() : BlockArray(0, 8) {}
        BlockArray(size_t n, size_t beta);
        BlockArray(const BlockArray &o);
        BlockArray &operator=(const BlockArray &o);
        BlockArray(BlockArray &&) noexcept = default;
        BlockArray &operator=(BlockArray &&) noexcept = default;

        size_t size() const { return n_; }
        bool empty() const { return n_ == 0; }
        size_t beta() const { return beta_; }
        size_t stride() const { return stride_; }

        uint64_t *row(size_t i) { return w_.data() + i * stride_; }
        const uint64_t *row(size_t i) const { return w_.data() + i * stride_; }
        int64_t key(size_t i) const { return int64_t(w_[i * stride_]); }
        void set_key(size_t i, int64_t k) { w_[i * stride_] = uint64_t(k); }
        uint64_t aux(size_t i) const { return w_[i * stride_ + 1]; }
        void set_aux(size_t i, uint64_t a) { w_[i * stride_ + 1] = a; }
        uint64_t *payload(size_t i) { return row(i) + 2; }
        const uint64_t *payload(size_t i) const { return row(i) + 2; }

        // traced single-block accessors
        Block get(size_t i) const;
        void set(size_t i, const Block &b);

        const trace::ArrayRef &ref() const { return ref_; }

        // set by oshuffle / ointersperse, cleared by other mutating primitives
        bool shuffled() const { return shuffled_; }
        void set_shuffled(bool s) { shuffled_ = s; }

        void resize(size_t n);
        void clear_aux();
        BlockArray slice(size_t off, size_t len) const;
        void append(const BlockArray &o);

    private:
        size_t n_, beta_, stride_;
        std::vector<uint64_t> w_;
        trace::ArrayRef ref_;
        bool shuffled_ = false;
    };

    void fill_value(BlockArray &a, size_t i, const std::vector<uint8_t> &v);
    std::vector<uint8_t> value_of(const BlockArray &a, size_t i);
}
