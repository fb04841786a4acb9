#include "o2ram/planner.hpp"
#include "o2ram/bucket.hpp"
#include "o2ram/cuckoo.hpp"
#include "o2ram/errors.hpp"
#include "o2ram/oprims.hpp"
#include "o2ram/probcalc.hpp"
#include "o2ram/twotier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace o2ram
{
    std::string SchemeSpec::token() const
    {
        std::ostringstream os;
        os << to_string(scheme);
        if (scheme == Scheme::bucket)
            os << "(m=" << bucket_m << ")";
        if (scheme == Scheme::twotier)
        {
            os << "(eps=2^" << std::lround(std::log2(eps)) << ",ovf=" << to_string(overflow);
            if (overflow == Scheme::bucket)
                os << ":m=" << overflow_m;
            os << ")";
        }
        return os.str();
    }

    std::string machine_fingerprint()
    {
        std::ifstream in("/proc/cpuinfo");
        std::string line, model = "unknown";
        while (std::getline(in, line))
            if (line.rfind("model name", 0) == 0)
            {
                model = line.substr(line.find(':') + 1);
                break;
            }
        model += "/" + std::to_string(std::thread::hardware_concurrency());
        uint64_t h = 1469598103934665603ull;
        for (unsigned char c : model)
            h = (h ^ c) * 1099511628211ull;
        std::ostringstream os;
        os << std::hex << h;
        return os.str();
    }

    CostCache::CostCache(std::string path) : path_(std::move(path))
    {
        std::ifstream in(path_);
        if (in)
        {
            std::string line;
            size_t no = 0;
            while (std::getline(in, line))
            {
                ++no;
                if (line.empty())
                    continue;
                std::istringstream ls(line);
                uint64_t n;
                size_t beta;
                std::string scheme, fp, extra;
                double cost;
                if (!(ls >> n >> beta >> scheme >> fp >> cost) || (ls >> extra) || !(cost >= 0))
                {
                    std::cerr << "warning: planner cache " << path_ << ":" << no << ": skipping malformed line\n";
                    ++skipped_;
                    continue;
                }
                map_[{n, beta, scheme, fp}] = cost;
            }
        }
        std::ofstream probe(path_, std::ios::app);
        if (!probe)
        {
            std::cerr << "warning: planner cache " << path_ << " is not writable; using memory only\n";
            path_.clear();
        }
    }

    std::optional<double> CostCache::get(uint64_t n, size_t beta, const std::string &scheme,
                                         const std::string &fp) const
    {
        auto it = map_.find({n, beta, scheme, fp});
        if (it == map_.end())
            return std::nullopt;
        return it->second;
    }

    void CostCache::put(uint64_t n, size_t beta, const std::string &scheme, const std::string &fp, double cost)
    {
        map_[{n, beta, scheme, fp}] = cost;
        if (path_.empty())
            return;
        std::ofstream out(path_, std::ios::app);
        out.precision(9);
        out << n << ' ' << beta << ' ' << scheme << ' ' << fp << ' ' << cost << '\n';
        if (!out)
        {
            std::cerr << "warning: planner cache " << path_ << " write failed; using memory only\n";
            path_.clear();
        }
    }

    std::unique_ptr<HashTable> build_spec(const SchemeSpec &s, const BlockArray &blocks, Tape &tape,
                                          double log2_delta)
    {
        switch (s.scheme)
        {
        case Scheme::linear:
            return std::make_unique<LinearTable>(blocks, tape);
        case Scheme::bucket:
        {
            BucketTable::Options o;
            o.log2_delta = log2_delta;
            return std::make_unique<BucketTable>(blocks, std::max<uint64_t>(s.bucket_m, 1), tape, o);
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
            o.eps = s.eps;
            o.overflow = s.overflow;
            o.overflow_m = s.overflow_m;
            return std::make_unique<TwoTierTable>(blocks, tape, o);
        }
        }
        throw ParameterError("unknown scheme");
    }

    ProbeCost measure_scheme(const SchemeSpec &s, uint64_t n, size_t beta, uint64_t t, uint64_t seed,
                             double log2_delta)
    {
        using clock = std::chrono::steady_clock;
        Tape tape(seed);
        BlockArray a(n, beta);
        for (size_t i = 0; i < n; ++i)
        {
            a.set_key(i, int64_t(i + 1));
            a.payload(i)[0] = tape.next();
        }
        oshuffle(a, tape);
        a.clear_aux();

        uint64_t q = std::min<uint64_t>({std::max<uint64_t>(t, 1), 4 * std::max<uint64_t>(n, 1), 1 << 16});
        if (s.scheme == Scheme::linear)
            q = std::clamp<uint64_t>((uint64_t(1) << 24) / std::max<uint64_t>(n, 1), 16, q);

        // warm the sizing memo so small builds are not dominated by the probability search
        if (s.scheme != Scheme::linear && n <= (uint64_t(1) << 14))
        {
            Tape warm(seed ^ 0x5a5a);
            build_spec(s, a, warm, log2_delta);
        }

        auto t0 = clock::now();
        auto tab = build_spec(s, a, tape, log2_delta);
        tab->set_check_recurrent(false);
        auto t1 = clock::now();
        std::vector<uint64_t> out(beta / 8);
        for (uint64_t i = 0; i < q; ++i)
            tab->lookup(i < n ? int64_t(i + 1) : kDummyLookup, out.data());
        auto t2 = clock::now();
        tab->extract();
        auto t3 = clock::now();
        std::chrono::duration<double> b = t1 - t0, l = t2 - t1, e = t3 - t2;
        return ProbeCost{b.count() + e.count(), l.count() / double(q)};
    }

    Planner::Planner(CostCache cache, Options opt)
        : cache_(std::move(cache)), opt_(std::move(opt)), fp_(machine_fingerprint())
    {
        if (!opt_.measure)
        {
            double d = opt_.log2_delta;
            uint64_t seed = opt_.seed;
            opt_.measure = [d, seed](const SchemeSpec &s, uint64_t n, size_t beta, uint64_t t)
            { return measure_scheme(s, n, beta, t, seed, d); };
        }
    }

    ProbeCost Planner::cost_of(const SchemeSpec &s, uint64_t n, size_t beta, uint64_t t)
    {
        const std::string tok = s.token();
        auto f = cache_.get(n, beta, tok + ".fixed", fp_);
        auto l = cache_.get(n, beta, tok + ".lookup", fp_);
        if (f && l)
            return ProbeCost{*f, *l};
        ProbeCost c = opt_.measure(s, n, beta, t);
        cache_.put(n, beta, tok + ".fixed", fp_, c.fixed);
        cache_.put(n, beta, tok + ".lookup", fp_, c.per_lookup);
        return c;
    }

    bool Planner::eligible(Scheme s, uint64_t n, Role role, bool allow_bucket) const
    {
        switch (s)
        {
        case Scheme::linear:
            return true;
        case Scheme::bucket:
            return allow_bucket && n >= 2;
        case Scheme::cuckoo:
            if (role != Role::overflow_pile || n < 2)
                return false;
            try
            {
                probcalc::min_hash_count(n, opt_.log2_delta);
                return true;
            }
            catch (const SizingError &)
            {
                return false;
            }
        case Scheme::twotier:
            // exp(-C/16) must stay below delta
            return role == Role::level && double(n) > opt_.C &&
                   opt_.C / 16 * std::log2(std::exp(1.0)) >= -opt_.log2_delta &&
                   !epsilon_candidates(n, opt_.C).empty();
        }
        return false;
    }

    SchemeChoice Planner::plan(uint64_t n, uint64_t t, size_t beta, Role role, bool allow_bucket)
    {
        if (t < 1)
            throw ParameterError("plan: t must be at least 1");
        std::vector<SchemeChoice> cands;
        cands.push_back({SchemeSpec{}, cost_of(SchemeSpec{}, n, beta, t).at(t)});

        if (eligible(Scheme::bucket, n, role, allow_bucket))
        {
            std::map<uint64_t, double> seen;
            auto sampler = [&](uint64_t m)
            {
                SchemeSpec s;
                s.scheme = Scheme::bucket;
                s.bucket_m = m;
                double c = cost_of(s, n, beta, t).at(t);
                seen[m] = c;
                return c;
            };
            uint64_t m = plan_bucket_count(n, sampler, opt_.bucket_probes);
            SchemeSpec s;
            s.scheme = Scheme::bucket;
            s.bucket_m = m;
            cands.push_back({s, seen.at(m)});
        }
        if (eligible(Scheme::cuckoo, n, role, allow_bucket))
        {
            SchemeSpec s;
            s.scheme = Scheme::cuckoo;
            cands.push_back({s, cost_of(s, n, beta, t).at(t)});
        }
        if (eligible(Scheme::twotier, n, role, allow_bucket))
        {
            SchemeSpec best;
            double best_cost = std::numeric_limits<double>::infinity();
            plan_epsilon(n, opt_.C, [&](double eps)
                         {
                SchemeSpec s;
                s.scheme = Scheme::twotier;
                s.eps = eps;
                uint64_t Z = uint64_t(std::ceil(opt_.C / (eps * eps)));
                uint64_t B = n / Z;
                uint64_t pile = B * tier_caps(double(n) / double(B), eps).relocate;
                // every lookup reaches the overflow pile
                auto ovf = plan(pile, t, beta, Role::overflow_pile, true);
                s.overflow = ovf.spec.scheme;
                s.overflow_m = ovf.spec.bucket_m;
                double c = cost_of(s, n, beta, t).at(t);
                if (c < best_cost)
                    best = s, best_cost = c;
                return c; });
            cands.push_back({best, best_cost});
        }

        auto it = std::min_element(cands.begin(), cands.end(), [](auto &a, auto &b)
                                   { return a.cost < b.cost; });
        std::ostringstream os;
        os << "plan n=" << n << " t=" << t << " beta=" << beta
           << " role=" << (role == Role::level ? "level" : "overflow_pile") << " ->";
        for (auto &c : cands)
            os << ' ' << c.spec.token() << '=' << c.cost;
        os << " choice=" << it->spec.token();
        log_.push_back(os.str());
        return *it;
    }

    std::vector<SchemeChoice> Planner::plan_levels(unsigned lo, unsigned hi, size_t beta)
    {
        std::vector<SchemeChoice> out;
        bool allow_bucket = true;
        for (unsigned i = lo; i <= hi; ++i)
        {
            const uint64_t n = uint64_t(1) << i;
            out.push_back(plan(n, n, beta, Role::level, allow_bucket));
            if (out.back().spec.scheme == Scheme::twotier)
                allow_bucket = false;
        }
        return out;
    }
}
