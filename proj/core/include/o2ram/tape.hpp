#pragma once
#include <array>
#include <cstdint>
#include <vector>

namespace o2ram
{
    struct PrfKey
    {
        std::array<uint8_t, 16> bytes{};
    };

    // Deterministic ChaCha20 stream: the same seed always yields the same words.
    class Tape
    {
    public:
        explicit Tape(uint64_t seed);
        static Tape from_entropy();

        uint64_t next();
        // uniform in [0, bound) by multiply-high
        uint64_t below(uint64_t bound);
        PrfKey prf_key();
        uint64_t seed() const { return seed_; }
        uint64_t consumed() const { return consumed_; }
        // reposition so that consumed() == pos
        void seek(uint64_t pos);

    private:
        void refill();

        uint64_t seed_;
        uint64_t block_ = 0;
        uint64_t consumed_ = 0;
        std::vector<uint64_t> buf_;
        size_t pos_ = 0;
    };

    inline uint64_t mulhi(uint64_t x, uint64_t range)
    {
        return uint64_t((unsigned __int128)x * range >> 64);
    }

    // SipHash-2-4 keyed PRF over 64-bit inputs
    class Prf
    {
    public:
        Prf() = default;
        explicit Prf(const PrfKey &k) : key_(k) {}

        uint64_t eval(uint64_t x) const;
        uint64_t operator()(uint64_t x, uint64_t range) const { return mulhi(eval(x), range); }
        const PrfKey &key() const { return key_; }

    private:
        PrfKey key_;
    };
}
