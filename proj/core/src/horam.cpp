#include "o2ram/horam.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/oprims.hpp"
#include "o2ram/twotier.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <set>

namespace o2ram
{
    namespace
    {
        constexpr char kMagic[8] = {'O', '2', 'R', 'A', 'M', 'S', 'N', 'P'};
        constexpr uint64_t kVersion = 1;
        constexpr uint64_t kMaxMapKey = (uint64_t(1) << 62) - 1;
    }

    SchemeSpec default_level_policy(unsigned level, size_t)
    {
        SchemeSpec s;
        const uint64_t n = uint64_t(1) << level;
        s.scheme = Scheme::bucket;
        s.bucket_m = std::max<uint64_t>(1, n / 32);
        return s;
    }

    LevelPolicy planned_policy(const std::vector<SchemeChoice> &plan, unsigned first_level)
    {
        return [plan, first_level](unsigned level, size_t beta)
        {
            if (level >= first_level && level - first_level < plan.size())
                return plan[level - first_level].spec;
            return default_level_policy(level, beta);
        };
    }

    LevelStack::LevelStack(const OramConfig &cfg, BlockArray bottom, bool map_mode)
    {
        N_ = cfg.N;
        beta_ = cfg.beta;
        L_ = unsigned(std::countr_zero(N_));
        l0_ = std::min(cfg.top_log, L_ - 1);
        log2_delta_ = cfg.log2_delta;
        map_ = map_mode;
        ledger_check_ = cfg.ledger_check;
        policy_ = cfg.policy ? cfg.policy : default_level_policy;
        tape_ = std::make_unique<Tape>(cfg.seed ? Tape(*cfg.seed) : Tape::from_entropy());
        top_ = BlockArray(size_t(1) << l0_, beta_);
        levels_.resize(L_ + 1);
        stats_.rebuilds.assign(L_ + 1, 0);
        live_ = map_ ? 0 : N_;

        oshuffle(bottom, *tape_);
        bottom.clear_aux();
        levels_[L_] = build_spec(policy_(L_, beta_), bottom, *tape_, log2_delta_);
        levels_[L_]->set_check_recurrent(!map_ && kDebugChecks);
        stats_.rebuilds[L_]++;
    }

    bool LevelStack::occupied(unsigned level) const
    {
        return level <= L_ && levels_[level] != nullptr;
    }

    Scheme LevelStack::level_scheme(unsigned level) const
    {
        if (!occupied(level))
            throw ParameterError("level " + std::to_string(level) + " is empty");
        return levels_[level]->scheme();
    }

    uint64_t LevelStack::count_real() const
    {
        uint64_t c = o2ram::count_real(top_);
        for (auto &t : levels_)
            if (t)
                c += t->count_real();
        return c;
    }

    bool LevelStack::access(int64_t key, bool write, bool insert, const uint64_t *v, uint64_t *out)
    {
        const size_t pw = beta_ / 8;
        std::vector<uint64_t> res(pw), tmp(pw);
        const bool real = is_real(key);
        bool found = oscan_consume(top_, 0, top_.size(), oselect(real, key, int64_t(-1)), res.data(),
                                   trace::Derived::data_independent);
        if (kDebugChecks)
            last_probes_.clear();
        for (unsigned i = l0_ + 1; i <= L_; ++i)
        {
            if (!levels_[i])
                continue;
            const int64_t k = oselect(found | !real, kDummyLookup, key);
            if (kDebugChecks)
                last_probes_.push_back(k != kDummyLookup);
            bool f = levels_[i]->lookup(k, tmp.data());
            cmov_words(res.data(), tmp.data(), pw, f);
            found |= f;
        }
        cmov_words(res.data(), v, pw, write);
        std::copy(res.begin(), res.end(), out);

        if (map_)
        {
            const bool fresh = real & !found & insert;
            if (fresh && live_ + 1 > N_)
                throw CapacityError("map holds " + std::to_string(N_) + " keys");
            live_ += fresh;
        }
        const bool keep = real & (found | insert);
        trace::write(top_.ref(), top_n_);
        top_.set_key(top_n_, oselect(keep, key, kDummyKey));
        top_.set_aux(top_n_, 0);
        cmov_words(top_.payload(top_n_), res.data(), pw, true);
        ++top_n_;
        ++stats_.accesses;
        if (top_n_ == top_.size())
            rebuild();
        return found;
    }

    void LevelStack::rebuild()
    {
        unsigned target = L_;
        for (unsigned i = l0_ + 1; i <= L_; ++i)
            if (!levels_[i])
            {
                target = i;
                break;
            }
        BlockArray A = std::move(top_);
        oshuffle(A, *tape_);
        A.clear_aux();
        const unsigned last = target == L_ ? L_ : target - 1;
        for (unsigned i = l0_ + 1; i <= last; ++i)
        {
            if (!levels_[i])
                continue;
            BlockArray B = levels_[i]->extract();
            levels_[i].reset();
            A = ointersperse(A, B, *tape_);
            A.clear_aux();
        }
        if (target == L_)
        {
            for (size_t i = 0; i < A.size(); ++i)
            {
                trace::read(A.ref(), i);
                A.set_aux(i, is_real(A.key(i)));
                trace::write(A.ref(), i);
            }
            ocompact(A);
            A.resize(N_);
            A.clear_aux();
            // compaction keeps the relative order of a uniformly shuffled stream
            A.set_shuffled(true);
        }
        levels_[target] = build_spec(policy_(target, beta_), A, *tape_, log2_delta_);
        levels_[target]->set_check_recurrent(!map_ && kDebugChecks);
        stats_.rebuilds[target]++;
        top_ = BlockArray(size_t(1) << l0_, beta_);
        top_n_ = 0;
        if (ledger_check_)
            check_ledger();
    }

    void LevelStack::check_ledger() const
    {
        uint64_t c = count_real();
        if (c != live_)
            throw ContractViolation("level ledger: " + std::to_string(c) + " real blocks, " +
                                    std::to_string(live_) + " live keys");
    }

    void LevelStack::save(std::ostream &os) const
    {
        os.write(kMagic, 8);
        io::put_u64(os, kVersion);
        io::put_u64(os, map_);
        io::put_u64(os, N_);
        io::put_u64(os, beta_);
        io::put_u64(os, l0_);
        io::put_u64(os, std::bit_cast<uint64_t>(log2_delta_));
        io::put_u64(os, tape_->seed());
        io::put_u64(os, tape_->consumed());
        io::put_u64(os, live_);
        io::put_u64(os, stats_.accesses);
        for (auto r : stats_.rebuilds)
            io::put_u64(os, r);
        uint64_t occ = 0;
        for (unsigned i = 0; i <= L_; ++i)
            occ |= uint64_t(levels_[i] != nullptr) << i;
        io::put_u64(os, occ);
        io::put_u64(os, top_n_);
        io::put_blocks(os, top_);
        for (unsigned i = 0; i <= L_; ++i)
            if (levels_[i])
            {
                io::put_u64(os, uint64_t(levels_[i]->scheme()));
                levels_[i]->save(os);
            }
        if (!os)
            throw ParameterError("snapshot write failed");
    }

    std::unique_ptr<LevelStack> LevelStack::load(std::istream &is, LevelPolicy policy, bool ledger_check)
    {
        char magic[8];
        if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
            throw ParameterError("snapshot: bad magic");
        if (io::get_u64(is) != kVersion)
            throw ParameterError("snapshot: unsupported version");
        std::unique_ptr<LevelStack> s(new LevelStack());
        s->map_ = io::get_u64(is) != 0;
        s->N_ = io::get_u64(is);
        s->beta_ = io::get_u64(is);
        s->l0_ = unsigned(io::get_u64(is));
        if (s->N_ < 2 || !std::has_single_bit(s->N_) || s->beta_ == 0 || s->beta_ % 8)
            throw ParameterError("snapshot: bad header");
        s->L_ = unsigned(std::countr_zero(s->N_));
        if (s->l0_ >= s->L_)
            throw ParameterError("snapshot: bad header");
        s->log2_delta_ = std::bit_cast<double>(io::get_u64(is));
        uint64_t seed = io::get_u64(is), consumed = io::get_u64(is);
        s->tape_ = std::make_unique<Tape>(seed);
        s->tape_->seek(consumed);
        s->live_ = io::get_u64(is);
        s->stats_.accesses = io::get_u64(is);
        s->stats_.rebuilds.resize(s->L_ + 1);
        for (auto &r : s->stats_.rebuilds)
            r = io::get_u64(is);
        uint64_t occ = io::get_u64(is);
        s->top_n_ = io::get_u64(is);
        s->top_ = io::get_blocks(is);
        if (s->top_.size() != (size_t(1) << s->l0_) || s->top_.beta() != s->beta_ || s->top_n_ >= s->top_.size())
            throw ParameterError("snapshot: bad top level");
        s->levels_.resize(s->L_ + 1);
        for (unsigned i = 0; i <= s->L_; ++i)
            if (occ >> i & 1)
            {
                s->levels_[i] = load_table(Scheme(io::get_u64(is)), is, *s->tape_);
                s->levels_[i]->set_check_recurrent(false);
            }
        s->policy_ = policy ? policy : default_level_policy;
        s->ledger_check_ = ledger_check;
        return s;
    }

    Oram::Oram(OramConfig cfg, const std::vector<std::pair<uint64_t, std::vector<uint8_t>>> &init)
    {
        if (cfg.N == 0)
            throw ParameterError("ORAM capacity must be positive");
        if (cfg.beta == 0 || cfg.beta % 8)
            throw ParameterError("block size must be a positive multiple of 8");
        const uint64_t logical = cfg.N;
        cfg.N = std::max<uint64_t>(2, std::bit_ceil(cfg.N));
        if (init.size() > logical)
            throw InitError("more initial blocks than capacity");
        BlockArray bottom(cfg.N, cfg.beta);
        for (uint64_t a = 0; a < cfg.N; ++a)
            bottom.set_key(a, int64_t(a + 1));
        std::vector<uint8_t> seen(cfg.N, 0);
        for (auto &[addr, v] : init)
        {
            if (addr >= logical)
                throw InitError("initial address " + std::to_string(addr) + " out of range");
            if (seen[addr]++)
                throw InitError("duplicate initial address " + std::to_string(addr));
            fill_value(bottom, addr, v);
        }
        stack_ = std::make_unique<LevelStack>(cfg, std::move(bottom), false);
    }

    std::vector<uint8_t> Oram::access(trace::Op op, uint64_t addr, const std::vector<uint8_t> &v)
    {
        if (addr >= N())
            throw ParameterError("address " + std::to_string(addr) + " out of range");
        const size_t pw = beta() / 8;
        std::vector<uint64_t> in(pw, 0), out(pw);
        std::memcpy(in.data(), v.data(), std::min(v.size(), beta()));
        stack_->access(int64_t(addr + 1), op == trace::Op::write, true, in.data(), out.data());
        std::vector<uint8_t> r(beta());
        std::memcpy(r.data(), out.data(), beta());
        return r;
    }

    void Oram::save(std::ostream &os) const
    {
        stack_->save(os);
    }

    Oram Oram::load(std::istream &is, LevelPolicy policy, bool ledger_check)
    {
        Oram o;
        o.stack_ = LevelStack::load(is, std::move(policy), ledger_check);
        return o;
    }

    OMap::OMap(OramConfig cfg)
    {
        if (cfg.N == 0)
            throw ParameterError("map capacity must be positive");
        if (cfg.beta == 0 || cfg.beta % 8)
            throw ParameterError("block size must be a positive multiple of 8");
        cfg.N = std::max<uint64_t>(2, std::bit_ceil(cfg.N));
        stack_ = std::make_unique<LevelStack>(cfg, BlockArray(cfg.N, cfg.beta), true);
    }

    int64_t OMap::stored(uint64_t key)
    {
        if (key >= kMaxMapKey)
            throw ParameterError("map keys must be below 2^62 - 1");
        return int64_t(key + 1);
    }

    bool OMap::get_words(uint64_t key, uint64_t *out)
    {
        return stack_->access(stored(key), false, false, out, out);
    }

    void OMap::put_words(uint64_t key, const uint64_t *v)
    {
        std::vector<uint64_t> out(beta() / 8);
        stack_->access(stored(key), true, true, v, out.data());
    }

    bool OMap::get_or_dummy(bool real, uint64_t key, uint64_t *out)
    {
        const int64_t k = oselect(real, stored(key), int64_t(kDummyLookup));
        return stack_->access(k, false, false, out, out);
    }

    std::optional<std::vector<uint8_t>> OMap::get(uint64_t key)
    {
        std::vector<uint64_t> out(beta() / 8);
        if (!get_words(key, out.data()))
            return std::nullopt;
        std::vector<uint8_t> r(beta());
        std::memcpy(r.data(), out.data(), beta());
        return r;
    }

    void OMap::put(uint64_t key, const std::vector<uint8_t> &v)
    {
        std::vector<uint64_t> in(beta() / 8, 0);
        std::memcpy(in.data(), v.data(), std::min(v.size(), beta()));
        put_words(key, in.data());
    }

    void OMap::save(std::ostream &os) const
    {
        stack_->save(os);
    }

    OMap OMap::load(std::istream &is, LevelPolicy policy, bool ledger_check)
    {
        OMap m;
        m.stack_ = LevelStack::load(is, std::move(policy), ledger_check);
        return m;
    }
}
