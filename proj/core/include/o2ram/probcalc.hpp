#pragma once
#include <cstdint>
#include <limits>
#include <string>

namespace o2ram::probcalc
{
    // log2 of a probability (or of an upper bound, which may exceed 0 before
    // clamping). digits carries the 256-bit value to 40 significant digits.
    struct LogProb
    {
        double log2 = 0;
        std::string digits;

        bool zero() const { return log2 == -std::numeric_limits<double>::infinity(); }
        double clamped() const { return log2 > 0 ? 0.0 : log2; }
    };

    LogProb log_binom(uint64_t n, uint64_t i);

    // single-bin tail: sum_{i>=ell} C(n,i) (m-1)^(n-i) / m^n
    LogProb overflow_prob(uint64_t n, uint64_t m, uint64_t ell);

    // any of the m bins: m * overflow_prob, clamped to 1
    LogProb overflow_prob_any(uint64_t n, uint64_t m, uint64_t ell);

    // minimal ell <= n with overflow_prob_any <= 2^log2_delta (n if none)
    uint64_t tight_bucket_size(uint64_t n, uint64_t m, double log2_delta);

    // k-choice cuckoo failure bound with the equal split a_i = (t-1)/k
    LogProb cuckoo_fail_prob(uint64_t n, unsigned k, uint64_t m);

    // smallest k in [3, 8] meeting the target; SizingError otherwise
    unsigned min_hash_count(uint64_t n, double log2_delta);

    uint64_t cuckoo_tau(uint64_t n);

    // 2n exp(-Z/256) / Z
    LogProb relaxed_compact_fail(uint64_t n, uint64_t Z);

    // parses "2^-64", "1e-20", "0.5"; returns log2 of the value
    double parse_delta(const std::string &s);
}
