#include "o2ram/bucket.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/oprims.hpp"
#include "o2ram/probcalc.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace o2ram
{
    BucketSizing bucket_sizing(uint64_t n, uint64_t m, double log2_delta)
    {
        if (m == 0)
            throw ParameterError("bucket table needs at least one bin");
        BucketSizing s;
        s.n = n;
        s.m = m;
        s.log2_delta = log2_delta;
        s.ell = std::max<uint64_t>(1, probcalc::tight_bucket_size(n, m, log2_delta));
        return s;
    }

    BlockArray bucket_place(const BlockArray &blocks, const Prf &prf, uint64_t m, uint64_t ell)
    {
        BlockArray w = blocks;
        for (size_t i = 0; i < w.size(); ++i)
        {
            trace::read(w.ref(), i);
            int64_t k = w.key(i);
            w.set_aux(i, oselect(is_real(k), prf(uint64_t(k), m), uint64_t(0)));
            trace::write(w.ref(), i);
        }
        return obin_place(w, m, ell);
    }

    BucketTable::BucketTable(const BlockArray &blocks, uint64_t m, Tape &tape, Options opt) : tape_(&tape)
    {
        sizing_ = bucket_sizing(blocks.size(), m, opt.log2_delta);
        if (opt.ell_override)
            sizing_.ell = opt.ell_override;
        for (attempts_ = 1;; ++attempts_)
        {
            prf_ = Prf(tape.prf_key());
            try
            {
                bins_ = bucket_place(blocks, prf_, sizing_.m, sizing_.ell);
                return;
            }
            catch (const BinOverflow &)
            {
                if (attempts_ >= opt.max_attempts)
                    throw BuildFailure("bucket build: bin overflow after " + std::to_string(attempts_) + " attempts");
            }
        }
    }

    bool BucketTable::lookup(int64_t key, uint64_t *out)
    {
        note_lookup(key);
        if (bins_.size() != sizing_.m * sizing_.ell)
            throw ContractViolation("lookup on an extracted bucket table");
        const bool dummy = key == kDummyLookup;
        const int64_t k = oselect(dummy, -int64_t(dummy_ctr_ + 1), key);
        dummy_ctr_ += dummy;
        const uint64_t bin = prf_(uint64_t(k), sizing_.m);
        return oscan_consume(bins_, bin * sizing_.ell, sizing_.ell, k, out, trace::Derived::prf_derived);
    }

    BlockArray BucketTable::extract()
    {
        BlockArray out = extract_reals(std::move(bins_), sizing_.n, *tape_);
        bins_ = BlockArray(0, out.beta());
        return out;
    }

    void BucketTable::save(std::ostream &os) const
    {
        io::put_u64(os, sizing_.n);
        io::put_u64(os, sizing_.m);
        io::put_u64(os, sizing_.ell);
        io::put_u64(os, dummy_ctr_);
        io::put_key(os, prf_.key());
        io::put_blocks(os, bins_);
    }

    std::unique_ptr<BucketTable> BucketTable::load(std::istream &is, Tape &tape)
    {
        std::unique_ptr<BucketTable> t(new BucketTable(tape));
        t->sizing_.n = io::get_u64(is);
        t->sizing_.m = io::get_u64(is);
        t->sizing_.ell = io::get_u64(is);
        t->dummy_ctr_ = io::get_u64(is);
        t->prf_ = Prf(io::get_key(is));
        t->bins_ = io::get_blocks(is);
        if (t->bins_.size() != t->sizing_.m * t->sizing_.ell)
            throw ParameterError("snapshot: bucket table size mismatch");
        return t;
    }

    uint64_t plan_bucket_count(uint64_t n, const std::function<double(uint64_t m)> &sampler, int max_probes)
    {
        if (n <= 1)
            return 1;
        std::map<uint64_t, double> seen;
        auto f = [&](double x)
        {
            uint64_t m = std::clamp<uint64_t>(uint64_t(std::llround(std::exp2(x))), 1, n);
            if (auto it = seen.find(m); it != seen.end())
                return it->second;
            if (int(seen.size()) >= max_probes)
                return std::numeric_limits<double>::infinity();
            double r[3] = {sampler(m), sampler(m), sampler(m)};
            std::sort(r, r + 3);
            seen[m] = r[1];
            return r[1];
        };
        const double phi = (std::sqrt(5.0) - 1) / 2;
        double a = 0, b = std::log2(double(n));
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double fc = f(c), fd = f(d);
        while (int(seen.size()) < max_probes && b - a > 1e-9)
        {
            if (fc <= fd)
            {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = f(c);
            }
            else
            {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = f(d);
            }
            // rounding can map both points onto one m; stop once the bracket
            // holds no unprobed integer
            uint64_t lo = uint64_t(std::ceil(std::exp2(a))), hi = uint64_t(std::floor(std::exp2(b)));
            bool fresh = false;
            for (uint64_t m = lo; m <= hi && !fresh; ++m)
                fresh = !seen.count(m);
            if (!fresh)
                break;
        }
        auto best = std::min_element(seen.begin(), seen.end(), [](auto &x, auto &y)
                                     { return x.second < y.second || (x.second == y.second && x.first < y.first); });
        return best->first;
    }
}
