#include "o2ram/tape.hpp"

#include <cstring>
#include <mutex>
#include <stdexcept>

#include <sodium.h>

namespace o2ram
{
    namespace
    {
        void ensure_sodium()
        {
            static std::once_flag once;
            std::call_once(once, []
                           {
                if (sodium_init() < 0)
                    throw std::runtime_error("libsodium initialisation failed"); });
        }

        constexpr size_t kTapeWords = 512;
    }

    Tape::Tape(uint64_t seed) : seed_(seed)
    {
        ensure_sodium();
    }

    Tape Tape::from_entropy()
    {
        ensure_sodium();
        uint64_t s;
        randombytes_buf(&s, sizeof s);
        return Tape(s);
    }

    void Tape::refill()
    {
        unsigned char seed[randombytes_SEEDBYTES] = {};
        std::memcpy(seed, &seed_, 8);
        std::memcpy(seed + 8, &block_, 8);
        ++block_;
        buf_.resize(kTapeWords);
        randombytes_buf_deterministic(buf_.data(), kTapeWords * 8, seed);
        pos_ = 0;
    }

    uint64_t Tape::next()
    {
        if (pos_ == buf_.size())
            refill();
        ++consumed_;
        return buf_[pos_++];
    }

    void Tape::seek(uint64_t pos)
    {
        block_ = pos / kTapeWords;
        refill();
        pos_ = pos % kTapeWords;
        consumed_ = pos;
    }

    uint64_t Tape::below(uint64_t bound)
    {
        return mulhi(next(), bound);
    }

    PrfKey Tape::prf_key()
    {
        PrfKey k;
        uint64_t a = next(), b = next();
        std::memcpy(k.bytes.data(), &a, 8);
        std::memcpy(k.bytes.data() + 8, &b, 8);
        return k;
    }

    uint64_t Prf::eval(uint64_t x) const
    {
        static_assert(crypto_shorthash_BYTES == 8 && crypto_shorthash_KEYBYTES == 16);
        uint64_t out;
        crypto_shorthash(reinterpret_cast<unsigned char *>(&out),
                         reinterpret_cast<const unsigned char *>(&x), sizeof x, key_.bytes.data());
        return out;
    }
}
