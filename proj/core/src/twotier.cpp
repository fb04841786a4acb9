#include "o2ram/twotier.hpp"
#include "o2ram/bucket.hpp"
#include "o2ram/cuckoo.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/oprims.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>

namespace o2ram
{
    TierCaps tier_caps(double mean_load, double eps)
    {
        if (!(eps > 0 && eps < 1) || mean_load < 0)
            throw ParameterError("tier_caps: need 0 < eps < 1");
        TierCaps c;
        c.keep = uint64_t(std::floor((1 - eps) * mean_load));
        c.relocate = uint64_t(std::ceil(2 * eps * mean_load));
        return c;
    }

    std::unique_ptr<HashTable> build_table(Scheme s, const BlockArray &blocks, Tape &tape, double log2_delta,
                                           uint64_t bucket_m)
    {
        switch (s)
        {
        case Scheme::linear:
            return std::make_unique<LinearTable>(blocks, tape);
        case Scheme::bucket:
        {
            uint64_t m = bucket_m ? bucket_m : std::bit_floor(std::max<uint64_t>(blocks.size() / 64, 1));
            BucketTable::Options o;
            o.log2_delta = log2_delta;
            return std::make_unique<BucketTable>(blocks, m, tape, o);
        }
        case Scheme::cuckoo:
        {
            CuckooTable::Options o;
            o.log2_delta = log2_delta;
            return std::make_unique<CuckooTable>(blocks, tape, o);
        }
        case Scheme::twotier:
        {
            TwoTierTable::Options o;
            o.log2_delta = log2_delta;
            auto c = epsilon_candidates(blocks.size(), o.C);
            if (c.empty())
                throw SizingError("two-tier table needs n > C");
            o.eps = c.back();
            return std::make_unique<TwoTierTable>(blocks, tape, o);
        }
        }
        throw ParameterError("unknown scheme");
    }

    uint64_t TwoTierTable::major_width() const
    {
        return major_ == Scheme::bucket ? sizing_.major_bins * sizing_.major_ell : sizing_.caps.keep;
    }

    TwoTierTable::TwoTierTable(const BlockArray &blocks, Tape &tape, Options opt) : tape_(&tape)
    {
        const uint64_t n = blocks.size();
        if (!(opt.eps > 0 && opt.eps < 1) || opt.C <= 0)
            throw ParameterError("two-tier: need 0 < eps < 1 and C > 0");
        if (opt.major != Scheme::bucket && opt.major != Scheme::linear)
            throw ParameterError("two-tier: majors must be bucket or linear");
        if (opt.overflow == Scheme::twotier)
            throw ParameterError("two-tier: overflow pile cannot be two-tier");
        if (opt.require_shuffled && !blocks.shuffled())
            throw ContractViolation("two-tier build needs a shuffled input");
        sizing_.n = n;
        sizing_.eps = opt.eps;
        sizing_.C = opt.C;
        sizing_.Z = uint64_t(std::ceil(opt.C / (opt.eps * opt.eps)));
        if (sizing_.Z > n)
            throw ParameterError("two-tier: eps below sqrt(C/n)");
        sizing_.bins = n / sizing_.Z;
        sizing_.caps = tier_caps(double(n) / double(sizing_.bins), opt.eps);
        major_ = opt.major;
        const uint64_t B = sizing_.bins, K = sizing_.caps.keep, R = sizing_.caps.relocate, W = K + R;
        const double inner_delta = opt.log2_delta - std::log2(double(B) + 1);
        if (major_ == Scheme::bucket)
        {
            sizing_.major_bins = opt.major_bins ? opt.major_bins
                                                : std::bit_floor(std::max<uint64_t>(K / 64, 1));
            sizing_.major_ell = bucket_sizing(K, sizing_.major_bins, inner_delta).ell;
        }

        for (attempts_ = 1;; ++attempts_)
        {
            route_ = Prf(tape.prf_key());
            major_prf_.clear();
            for (uint64_t j = 0; j < B; ++j)
                major_prf_.emplace_back(tape.prf_key());
            try
            {
                // non-oblivious routing of the shuffled stream
                BlockArray routed(B * W, blocks.beta());
                std::vector<uint64_t> cnt(B, 0);
                for (size_t i = 0; i < n; ++i)
                {
                    trace::read(blocks.ref(), i);
                    int64_t x = blocks.key(i);
                    uint64_t tag = is_real(x) ? uint64_t(x) : (uint64_t(1) << 63) | i;
                    uint64_t j = route_(tag, B);
                    if (cnt[j] >= W)
                        throw TierImbalance("two-tier: bin overflow");
                    trace::write(routed.ref(), j * W + cnt[j], 1, trace::Derived::prf_derived);
                    std::memcpy(routed.row(j * W + cnt[j]), blocks.row(i), routed.stride() * 8);
                    routed.set_aux(j * W + cnt[j], 0);
                    ++cnt[j];
                }
                for (uint64_t j = 0; j < B; ++j)
                    if (cnt[j] < K)
                        throw TierImbalance("two-tier: bin underflow");

                majors_ = BlockArray(0, blocks.beta());
                BlockArray pile(0, blocks.beta());
                for (uint64_t j = 0; j < B; ++j)
                {
                    trace::read(routed.ref(), j * W, W);
                    BlockArray keep = routed.slice(j * W, K);
                    if (major_ == Scheme::bucket)
                        keep = bucket_place(keep, major_prf_[j], sizing_.major_bins, sizing_.major_ell);
                    majors_.append(keep);
                    pile.append(routed.slice(j * W + K, R));
                }
                trace::write(majors_.ref(), 0, majors_.size());
                relocated_ = o2ram::count_real(pile);
                overflow_ = build_table(opt.overflow, pile, tape, opt.log2_delta, opt.overflow_m);
                overflow_->set_check_recurrent(false);
                return;
            }
            catch (const TierImbalance &e)
            {
                if (attempts_ >= opt.max_attempts)
                    throw BuildFailure(std::string(e.what()) + " after " + std::to_string(attempts_) + " attempts");
            }
            catch (const BinOverflow &e)
            {
                if (attempts_ >= opt.max_attempts)
                    throw BuildFailure(std::string(e.what()) + " after " + std::to_string(attempts_) + " attempts");
            }
        }
    }

    bool TwoTierTable::lookup(int64_t key, uint64_t *out)
    {
        note_lookup(key);
        if (major_prf_.empty())
            throw ContractViolation("lookup on an extracted two-tier table");
        const bool dummy = key == kDummyLookup;
        const int64_t x = oselect(dummy, -int64_t(dummy_ctr_ + 1), key);
        dummy_ctr_ += dummy;
        const uint64_t j = route_(uint64_t(x), sizing_.bins);
        const size_t pw = majors_.stride() - 2;
        bool found;
        if (major_ == Scheme::bucket)
        {
            const uint64_t bin = major_prf_[j](uint64_t(x), sizing_.major_bins);
            found = oscan_consume(majors_, j * major_width() + bin * sizing_.major_ell, sizing_.major_ell, x, out,
                                  trace::Derived::prf_derived);
        }
        else
            found = oscan_consume(majors_, j * major_width(), major_width(), x, out, trace::Derived::prf_derived);
        std::vector<uint64_t> tmp(pw);
        bool f2 = overflow_->lookup(oselect(found | dummy, kDummyLookup, key), tmp.data());
        cmov_words(out, tmp.data(), pw, f2);
        return found | f2;
    }

    BlockArray TwoTierTable::extract()
    {
        BlockArray all = std::move(majors_);
        all.append(overflow_->extract());
        majors_ = BlockArray(0, all.beta());
        major_prf_.clear();
        overflow_.reset();
        return extract_reals(std::move(all), sizing_.n, *tape_);
    }

    uint64_t TwoTierTable::count_real() const
    {
        return o2ram::count_real(majors_) + (overflow_ ? overflow_->count_real() : 0);
    }

    void TwoTierTable::save(std::ostream &os) const
    {
        io::put_u64(os, sizing_.n);
        io::put_u64(os, std::bit_cast<uint64_t>(sizing_.eps));
        io::put_u64(os, std::bit_cast<uint64_t>(sizing_.C));
        io::put_u64(os, uint64_t(major_));
        io::put_u64(os, sizing_.major_bins);
        io::put_u64(os, sizing_.major_ell);
        io::put_u64(os, dummy_ctr_);
        io::put_u64(os, relocated_);
        io::put_key(os, route_.key());
        for (auto &p : major_prf_)
            io::put_key(os, p.key());
        io::put_blocks(os, majors_);
        io::put_u64(os, uint64_t(overflow_->scheme()));
        overflow_->save(os);
    }


    std::unique_ptr<TwoTierTable> TwoTierTable::load(std::istream &is, Tape &tape)
    {
        std::unique_ptr<TwoTierTable> t(new TwoTierTable(tape));
        auto &s = t->sizing_;
        s.n = io::get_u64(is);
        s.eps = std::bit_cast<double>(io::get_u64(is));
        s.C = std::bit_cast<double>(io::get_u64(is));
        t->major_ = Scheme(io::get_u64(is));
        s.major_bins = io::get_u64(is);
        s.major_ell = io::get_u64(is);
        t->dummy_ctr_ = io::get_u64(is);
        t->relocated_ = io::get_u64(is);
        if (!(s.eps > 0 && s.eps < 1) || !(s.C > 0) ||
            (t->major_ != Scheme::bucket && t->major_ != Scheme::linear))
            throw ParameterError("snapshot: bad two-tier header");
        s.Z = uint64_t(std::ceil(s.C / (s.eps * s.eps)));
        if (s.Z == 0 || s.Z > s.n)
            throw ParameterError("snapshot: bad two-tier header");
        s.bins = s.n / s.Z;
        s.caps = tier_caps(double(s.n) / double(s.bins), s.eps);
        t->route_ = Prf(io::get_key(is));
        for (uint64_t j = 0; j < s.bins; ++j)
            t->major_prf_.emplace_back(io::get_key(is));
        t->majors_ = io::get_blocks(is);
        if (t->majors_.size() != s.bins * t->major_width())
            throw ParameterError("snapshot: two-tier size mismatch");
        t->overflow_ = load_table(Scheme(io::get_u64(is)), is, tape);
        t->overflow_->set_check_recurrent(false);
        return t;
    }

    std::unique_ptr<HashTable> load_table(Scheme s, std::istream &is, Tape &tape)
    {
        switch (s)
        {
        case Scheme::linear:
            return LinearTable::load(is, tape);
        case Scheme::bucket:
            return BucketTable::load(is, tape);
        case Scheme::cuckoo:
            return CuckooTable::load(is, tape);
        case Scheme::twotier:
            return TwoTierTable::load(is, tape);
        }
        throw ParameterError("snapshot: unknown scheme");
    }

    std::vector<double> epsilon_candidates(uint64_t n, double C)
    {
        std::vector<double> out;
        const double lo = std::sqrt(C / double(n));
        for (int j = 1; j < 64; ++j)
        {
            double e = std::ldexp(1.0, -j);
            if (e < lo)
                break;
            out.push_back(e);
        }
        return out;
    }

    double plan_epsilon(uint64_t n, double C, const std::function<double(double eps)> &sampler)
    {
        auto c = epsilon_candidates(n, C);
        if (c.empty())
            throw SizingError("no two-tier overflow rate in [sqrt(C/n), 1)");
        double best = c[0], cost = sampler(c[0]);
        for (size_t i = 1; i < c.size(); ++i)
            if (double v = sampler(c[i]); v < cost)
                best = c[i], cost = v;
        return best;
    }
}
