#include "o2ram/probcalc.hpp"
#include "o2ram/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>
#include <mpfr.h>

namespace o2ram::probcalc
{
    namespace
    {
        namespace mp = boost::multiprecision;
        using Real = mp::number<mp::mpfr_float_backend<78>, mp::et_off>;

        // terms further than this below the largest are dropped
        constexpr double kScreenBits = 330;
        const double kNegInf = -std::numeric_limits<double>::infinity();

        Real lngamma(const Real &x)
        {
            Real r;
            mpfr_lngamma(r.backend().data(), x.backend().data(), MPFR_RNDN);
            return r;
        }

        const Real &ln2()
        {
            static const Real v = mp::log(Real(2));
            return v;
        }

        Real log2_binom(uint64_t n, uint64_t i)
        {
            Real a = lngamma(Real(n) + 1) - lngamma(Real(i) + 1) - lngamma(Real(n - i) + 1);
            return a / ln2();
        }

        double log2_binom_d(uint64_t n, uint64_t i)
        {
            return (std::lgamma(double(n) + 1) - std::lgamma(double(i) + 1) - std::lgamma(double(n - i) + 1)) /
                   std::log(2.0);
        }

        LogProb make(const Real &x)
        {
            LogProb p;
            p.log2 = x.convert_to<double>();
            p.digits = x.str(40, std::ios_base::scientific);
            return p;
        }

        LogProb make_zero()
        {
            LogProb p;
            p.log2 = kNegInf;
            p.digits = "-inf";
            return p;
        }

        // log2 of sum 2^t over the given high-precision terms
        Real log2_sum(const std::vector<Real> &terms)
        {
            Real mx = terms.front();
            for (auto &t : terms)
                mx = std::max(mx, t);
            Real s = 0;
            for (auto &t : terms)
                s += mp::exp2(t - mx);
            return mx + mp::log2(s);
        }

        struct BinTail
        {
            uint64_t n, m;
            double lm1, lm;
            Real Lm1, Lm;

            BinTail(uint64_t n, uint64_t m) : n(n), m(m)
            {
                lm1 = std::log2(double(m - 1));
                lm = std::log2(double(m));
                Lm1 = mp::log2(Real(m - 1));
                Lm = mp::log2(Real(m));
            }
            double approx(uint64_t i) const
            {
                return log2_binom_d(n, i) + double(n - i) * lm1 - double(n) * lm;
            }
            Real exact(uint64_t i) const
            {
                return log2_binom(n, i) + Real(n - i) * Lm1 - Real(n) * Lm;
            }
        };

        // Per-bin tail. Terms are log-concave in i, so the significant ones
        // form a window around max(ell, mode).
        std::pair<bool, Real> tail(uint64_t n, uint64_t m, uint64_t ell)
        {
            if (ell == 0)
                return {true, Real(0)};
            if (ell > n)
                return {false, Real(0)};
            if (m == 1)
                return {true, Real(0)};
            BinTail L(n, m);
            uint64_t mode = std::min<uint64_t>(n, (n + 1) / m);
            uint64_t top = std::max(ell, mode);
            // the discrete maximum is at top or top +- 1
            for (uint64_t c : {top + 1, top - 1})
                if (c >= ell && c <= n && c != top && L.approx(c) > L.approx(top))
                    top = c;
            const double peak = L.approx(top);
            uint64_t hi = top, lo = top;
            while (hi < n && L.approx(hi + 1) > peak - kScreenBits)
                ++hi;
            while (lo > ell && L.approx(lo - 1) > peak - kScreenBits)
                --lo;
            // term(i+1) / term(i) = (n-i) / ((i+1)(m-1)), summed relative to term(lo)
            const Real m1 = Real(m - 1);
            Real s = 1, cur = 1;
            for (uint64_t i = lo; i < hi; ++i)
            {
                cur *= Real(n - i);
                cur /= Real(i + 1) * m1;
                s += cur;
            }
            return {true, L.exact(lo) + mp::log2(s)};
        }

        std::mutex g_memo_mu;
        std::map<std::tuple<uint64_t, uint64_t, double>, uint64_t> g_bucket_memo;
        std::map<std::pair<uint64_t, double>, unsigned> g_hash_memo;
        std::map<std::tuple<uint64_t, unsigned, uint64_t>, LogProb> g_cuckoo_memo;
    }

    LogProb log_binom(uint64_t n, uint64_t i)
    {
        if (i > n)
            throw ParameterError("log_binom: i > n");
        return make(log2_binom(n, i));
    }

    LogProb overflow_prob(uint64_t n, uint64_t m, uint64_t ell)
    {
        if (n == 0 || m == 0)
            throw ParameterError("overflow_prob: n and m must be positive");
        auto [nonzero, v] = tail(n, m, ell);
        if (!nonzero)
            return make_zero();
        return make(std::min(v, Real(0)));
    }

    LogProb overflow_prob_any(uint64_t n, uint64_t m, uint64_t ell)
    {
        if (n == 0 || m == 0)
            throw ParameterError("overflow_prob_any: n and m must be positive");
        auto [nonzero, v] = tail(n, m, ell);
        if (!nonzero)
            return make_zero();
        return make(std::min(v + mp::log2(Real(m)), Real(0)));
    }

    uint64_t tight_bucket_size(uint64_t n, uint64_t m, double log2_delta)
    {
        if (m == 0)
            throw ParameterError("tight_bucket_size: m must be positive");
        if (!(log2_delta < 0))
            throw ParameterError("tight_bucket_size: delta must lie in (0,1)");
        if (n == 0)
            return 0;
        auto key = std::make_tuple(n, m, log2_delta);
        {
            std::lock_guard lk(g_memo_mu);
            if (auto it = g_bucket_memo.find(key); it != g_bucket_memo.end())
                return it->second;
        }
        const Real target = Real(log2_delta), lm = mp::log2(Real(m));
        auto ok = [&](uint64_t ell)
        {
            auto [nonzero, v] = tail(n, m, ell);
            return !nonzero || v + lm <= target;
        };
        // smallest ell in [0, n] that passes; a bin of capacity n never overflows
        uint64_t lo = 0, hi = n;
        if (!ok(hi))
            lo = hi;
        while (lo < hi)
        {
            uint64_t mid = lo + (hi - lo) / 2;
            if (ok(mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        std::lock_guard lk(g_memo_mu);
        g_bucket_memo[key] = lo;
        return lo;
    }

    LogProb cuckoo_fail_prob(uint64_t n, unsigned k, uint64_t m)
    {
        if (k < 2)
            throw ParameterError("cuckoo_fail_prob: k must be at least 2");
        const uint64_t b = m / k;
        if (b == 0)
            throw ParameterError("cuckoo_fail_prob: fewer slots than hash functions");
        if (n < k + 1)
            return make_zero();
        auto key = std::make_tuple(n, k, m);
        {
            std::lock_guard lk(g_memo_mu);
            if (auto it = g_cuckoo_memo.find(key); it != g_cuckoo_memo.end())
                return it->second;
        }
        // log2 term(t) = log2 C(n,t) + log2 C(m,t-1) + k t log2((t-1)/(k b))
        const double lkb = std::log2(double(k) * double(b));
        std::vector<double> approx(n - k);
        double peak = -std::numeric_limits<double>::infinity();
        for (uint64_t t = k + 1; t <= n; ++t)
        {
            double a = log2_binom_d(n, t) + log2_binom_d(m, t - 1) +
                       double(k) * double(t) * (std::log2(double(t - 1)) - lkb);
            approx[t - k - 1] = a;
            peak = std::max(peak, a);
        }
        uint64_t first = n, last = k + 1;
        for (uint64_t t = k + 1; t <= n; ++t)
            if (approx[t - k - 1] > peak - kScreenBits)
                first = std::min(first, t), last = t;
        // binomial part relative to t = first, stepped by exact ratios
        const Real Lkb = mp::log2(Real(k) * Real(b));
        const Real anchor = log2_binom(n, first) + log2_binom(m, first - 1);
        std::vector<Real> terms;
        Real rel = 1;
        for (uint64_t t = first; t <= last; ++t)
        {
            if (t > first)
            {
                rel *= Real(n - t + 1) * Real(m - t + 2);
                rel /= Real(t) * Real(t - 1);
            }
            terms.push_back(anchor + mp::log2(rel) + Real(k) * Real(t) * (mp::log2(Real(t - 1)) - Lkb));
        }
        LogProb out = make(log2_sum(terms));
        std::lock_guard lk(g_memo_mu);
        g_cuckoo_memo[key] = out;
        return out;
    }

    unsigned min_hash_count(uint64_t n, double log2_delta)
    {
        if (log2_delta >= 0)
            return 3;
        auto key = std::make_pair(n, log2_delta);
        {
            std::lock_guard lk(g_memo_mu);
            if (auto it = g_hash_memo.find(key); it != g_hash_memo.end())
                return it->second;
        }
        for (unsigned k = 3; k <= 8; ++k)
        {
            uint64_t m = std::max<uint64_t>(2 * n, k);
            if (cuckoo_fail_prob(n, k, m).log2 <= log2_delta)
            {
                std::lock_guard lk(g_memo_mu);
                g_hash_memo[key] = k;
                return k;
            }
        }
        throw SizingError("min_hash_count: no k <= 8 reaches the target for n=" + std::to_string(n));
    }

    uint64_t cuckoo_tau(uint64_t n)
    {
        uint64_t lg = n <= 1 ? 0 : uint64_t(std::bit_width(n - 1));
        return std::max<uint64_t>(3 * lg + 1, 30);
    }

    LogProb relaxed_compact_fail(uint64_t n, uint64_t Z)
    {
        if (Z == 0 || n == 0)
            throw ParameterError("relaxed_compact_fail: n and Z must be positive");
        Real v = mp::log2(Real(2) * Real(n) / Real(Z)) - Real(Z) / (Real(256) * ln2());
        return make(v);
    }

    double parse_delta(const std::string &s)
    {
        try
        {
            double v;
            if (auto p = s.find("2^"); p == 0)
                v = std::stod(s.substr(2));
            else
            {
                double x = std::stod(s);
                if (!(x > 0 && x <= 1))
                    throw ParameterError("delta must lie in (0, 1]");
                v = std::log2(x);
            }
            if (!(v <= 0) || std::isnan(v))
                throw ParameterError("delta must lie in (0, 1]");
            return v;
        }
        catch (const std::logic_error &)
        {
            throw ParameterError("cannot parse delta '" + s + "'");
        }
    }
}
