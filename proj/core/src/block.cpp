#include "o2ram/block.hpp"
#include "o2ram/errors.hpp"

#include <algorithm>

namespace o2ram
{
    Block oselect(bool c, const Block &a, const Block &b)
    {
        Block r;
        r.key = oselect(c, a.key, b.key);
        r.aux = oselect(c, a.aux, b.aux);
        r.value.resize(std::max(a.value.size(), b.value.size()));
        for (size_t i = 0; i < r.value.size(); ++i)
        {
            uint8_t x = i < a.value.size() ? a.value[i] : 0;
            uint8_t y = i < b.value.size() ? b.value[i] : 0;
            r.value[i] = uint8_t(y ^ ((x ^ y) & uint8_t(mask_of(c))));
        }
        return r;
    }

    BlockArray::BlockArray(size_t n, size_t beta)
        : n_(n), beta_(beta), stride_(2 + beta / 8), ref_(trace::declare(n))
    {
        if (beta == 0 || beta % 8 != 0)
            throw ParameterError("block payload width must be a positive multiple of 8");
        w_.assign(n_ * stride_, 0);
        for (size_t i = 0; i < n_; ++i)
            set_key(i, kDummyKey);
    }

    BlockArray::BlockArray(const BlockArray &o)
        : n_(o.n_), beta_(o.beta_), stride_(o.stride_), w_(o.w_), ref_(trace::declare(o.n_)),
          shuffled_(o.shuffled_)
    {
    }

    BlockArray &BlockArray::operator=(const BlockArray &o)
    {
        if (this != &o)
        {
            n_ = o.n_;
            beta_ = o.beta_;
            stride_ = o.stride_;
            w_ = o.w_;
            ref_ = trace::declare(n_);
            shuffled_ = o.shuffled_;
        }
        return *this;
    }

    Block BlockArray::get(size_t i) const
    {
        trace::read(ref_, i);
        Block b;
        b.key = key(i);
        b.aux = aux(i);
        b.value.resize(beta_);
        std::memcpy(b.value.data(), payload(i), beta_);
        return b;
    }

    void BlockArray::set(size_t i, const Block &b)
    {
        trace::write(ref_, i);
        set_key(i, b.key);
        set_aux(i, b.aux);
        std::memset(payload(i), 0, beta_);
        std::memcpy(payload(i), b.value.data(), std::min(beta_, b.value.size()));
    }

    void BlockArray::resize(size_t n)
    {
        size_t old = n_;
        w_.resize(n * stride_, 0);
        n_ = n;
        for (size_t i = old; i < n; ++i)
            set_key(i, kDummyKey);
        ref_.length = n;
    }

    void BlockArray::clear_aux()
    {
        for (size_t i = 0; i < n_; ++i)
            set_aux(i, 0);
    }

    BlockArray BlockArray::slice(size_t off, size_t len) const
    {
        BlockArray out(len, beta_);
        std::copy(w_.begin() + off * stride_, w_.begin() + (off + len) * stride_, out.w_.begin());
        out.shuffled_ = shuffled_;
        return out;
    }

    void BlockArray::append(const BlockArray &o)
    {
        if (o.beta_ != beta_)
            throw ParameterError("append: payload width mismatch");
        w_.insert(w_.end(), o.w_.begin(), o.w_.end());
        n_ += o.n_;
        ref_.length = n_;
        shuffled_ = false;
    }

    void fill_value(BlockArray &a, size_t i, const std::vector<uint8_t> &v)
    {
        std::memset(a.payload(i), 0, a.beta());
        std::memcpy(a.payload(i), v.data(), std::min(a.beta(), v.size()));
    }

    std::vector<uint8_t> value_of(const BlockArray &a, size_t i)
    {
        std::vector<uint8_t> v(a.beta());
        std::memcpy(v.data(), a.payload(i), a.beta());
        return v;
    }
}
