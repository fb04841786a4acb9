#pragma once
#include <functional>
#include <vector>

#include "o2ram/hash_table.hpp"

namespace o2ram
{
    struct TierCaps
    {
        uint64_t keep;     // K: blocks every major keeps
        uint64_t relocate; // R: padded blocks every bin sends to the overflow pile
    };

    // K = floor((1-eps) mu), R = ceil(2 eps mu)
    TierCaps tier_caps(double mean_load, double eps);

    struct TwoTierSizing
    {
        uint64_t n = 0, bins = 1, Z = 0;
        double eps = 0.5, C = 1024;
        TierCaps caps{};
        uint64_t major_bins = 1, major_ell = 1; // inner bucket layout
    };

    class TwoTierTable final : public HashTable
    {
    public:
        struct Options
        {
            double eps = 0.5;
            double C = 1024;
            double log2_delta = -64;
            Scheme major = Scheme::bucket; // bucket or linear
            Scheme overflow = Scheme::cuckoo;
            uint64_t overflow_m = 0;
            uint64_t major_bins = 0; // inner bucket bins per major; 0 picks K/64
            int max_attempts = 3;
            bool require_shuffled = kDebugChecks;
        };

        TwoTierTable(const BlockArray &blocks, Tape &tape, Options opt);

        bool lookup(int64_t key, uint64_t *out) override;
        using HashTable::lookup;
        BlockArray extract() override;
        Scheme scheme() const override { return Scheme::twotier; }
        uint64_t capacity() const override { return sizing_.n; }
        size_t beta() const override { return majors_.beta(); }
        uint64_t count_real() const override;
        void save(std::ostream &os) const override;
        static std::unique_ptr<TwoTierTable> load(std::istream &is, Tape &tape);

        const TwoTierSizing &sizing() const { return sizing_; }
        int attempts() const { return attempts_; }
        const HashTable &overflow() const { return *overflow_; }
        uint64_t major_rows() const { return majors_.size(); }
        uint64_t relocated_reals() const { return relocated_; }

    private:
        TwoTierTable(Tape &tape) : tape_(&tape) {}
        uint64_t major_width() const;

        BlockArray majors_; // major j occupies [j*width, (j+1)*width)
        std::vector<Prf> major_prf_;
        Prf route_;
        std::unique_ptr<HashTable> overflow_;
        TwoTierSizing sizing_;
        Scheme major_ = Scheme::bucket;
        uint64_t dummy_ctr_ = 0;
        uint64_t relocated_ = 0;
        int attempts_ = 0;
        Tape *tape_;
    };

    // Brute force over eps = 2^-j in [sqrt(C/n), 1); sampler returns a cost.
    double plan_epsilon(uint64_t n, double C, const std::function<double(double eps)> &sampler);
    std::vector<double> epsilon_candidates(uint64_t n, double C);

    // bucket_m = 0 picks n/64 bins
    std::unique_ptr<HashTable> build_table(Scheme s, const BlockArray &blocks, Tape &tape, double log2_delta,
                                           uint64_t bucket_m = 0);
    std::unique_ptr<HashTable> load_table(Scheme s, std::istream &is, Tape &tape);
}
