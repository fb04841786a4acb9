#include "o2ram/trace.hpp"
#include "o2ram/errors.hpp"

#include <atomic>
#include <istream>
#include <ostream>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <sodium.h>

namespace o2ram::trace
{
    namespace detail
    {
        constinit thread_local Session *active = nullptr;
    }

    uint64_t new_uid()
    {
        static std::atomic<uint64_t> next{1};
        return next.fetch_add(1, std::memory_order_relaxed);
    }

    struct Session::Hasher
    {
        crypto_generichash_state st;
        std::vector<uint8_t> buf;
        uint64_t records = 0;
        bool done = false;

        Hasher()
        {
            if (sodium_init() < 0)
                throw ContractViolation("trace: libsodium init failed");
            crypto_generichash_init(&st, nullptr, 0, 32);
            buf.reserve(1 << 16);
        }

        void flush()
        {
            crypto_generichash_update(&st, buf.data(), buf.size());
            buf.clear();
        }

        template <class T>
        void put(T v)
        {
            for (size_t i = 0; i < sizeof(T); ++i)
                buf.push_back(uint8_t(uint64_t(v) >> (8 * i)));
        }

        void add(const AccessRecord &r)
        {
            put(r.array_id);
            put(uint8_t(r.op));
            put(r.derived == Derived::data_independent ? r.index : kMaskedIndex);
            put(r.span);
            put(uint8_t(r.derived));
            ++records;
            if (buf.size() + 32 > buf.capacity())
                flush();
        }
    };

    Session::Session(Mode mode) : prev_(detail::active)
    {
        if (mode == Mode::digest)
            hasher_ = std::make_unique<Hasher>();
        detail::active = this;
    }

    Session::~Session()
    {
        detail::active = prev_;
    }

    ShapeDigest Session::digest()
    {
        if (!hasher_ || hasher_->done)
            throw ContractViolation("trace: digest needs a live digest-mode session");
        hasher_->flush();
        ShapeDigest d;
        d.records = hasher_->records;
        crypto_generichash_final(&hasher_->st, d.hash.data(), d.hash.size());
        hasher_->done = true;
        return d;
    }

    Trace Session::take()
    {
        Trace out = std::move(trace_);
        trace_ = Trace{};
        ids_.clear();
        return out;
    }

    void Session::set_param(const std::string &key, const std::string &value)
    {
        trace_.public_params[key] = value;
    }

    void Session::set_param(const std::string &key, uint64_t value)
    {
        trace_.public_params[key] = std::to_string(value);
    }

    void Session::append(const ArrayRef &a, Op op, uint64_t index, uint64_t span, Derived d)
    {
        if (span == 0 || index > a.length || span > a.length - index)
            throw ContractViolation("trace: access [" + std::to_string(index) + ", +" +
                                    std::to_string(span) + ") outside array of length " +
                                    std::to_string(a.length));
        auto [it, fresh] = ids_.try_emplace(a.uid, static_cast<uint32_t>(ids_.size()));
        (void)fresh;
        if (hasher_)
        {
            if (!hasher_->done)
                hasher_->add(AccessRecord{it->second, op, index, span, d});
        }
        else
            trace_.records.push_back(AccessRecord{it->second, op, index, span, d});
    }

    TraceShape shape_of(const Trace &t)
    {
        TraceShape s;
        s.records = t.records;
        for (auto &r : s.records)
            if (r.derived != Derived::data_independent)
                r.index = kMaskedIndex;
        return s;
    }

    bool assert_shape_equal(const TraceShape &a, const TraceShape &b)
    {
        return a == b;
    }

    const char *to_string(Op op)
    {
        return op == Op::read ? "r" : "w";
    }

    const char *to_string(Derived d)
    {
        switch (d)
        {
        case Derived::prf_derived:
            return "prf";
        case Derived::random_tape:
            return "tape";
        default:
            return "fixed";
        }
    }

    void dump(std::ostream &os, const Trace &t)
    {
        for (auto &[k, v] : t.public_params)
            os << k << '=' << v << '\n';
        os << "--\n";
        for (auto &r : t.records)
            os << r.array_id << ' ' << to_string(r.op) << ' ' << r.index << ' ' << r.span << ' '
               << to_string(r.derived) << '\n';
    }

    Trace load(std::istream &is)
    {
        Trace t;
        std::string line;
        size_t lineno = 0;
        bool body = false;
        while (std::getline(is, line))
        {
            ++lineno;
            if (line.empty())
                continue;
            if (!body)
            {
                if (line == "--")
                {
                    body = true;
                    continue;
                }
                auto eq = line.find('=');
                if (eq == std::string::npos)
                    throw ParseError(lineno, "expected key=value");
                t.public_params[line.substr(0, eq)] = line.substr(eq + 1);
                continue;
            }
            std::istringstream ls(line);
            AccessRecord r{};
            std::string op, d;
            if (!(ls >> r.array_id >> op >> r.index >> r.span >> d))
                throw ParseError(lineno, "malformed record");
            if (op != "r" && op != "w")
                throw ParseError(lineno, "bad op " + op);
            r.op = op == "r" ? Op::read : Op::write;
            if (d == "fixed")
                r.derived = Derived::data_independent;
            else if (d == "prf")
                r.derived = Derived::prf_derived;
            else if (d == "tape")
                r.derived = Derived::random_tape;
            else
                throw ParseError(lineno, "bad derived flag " + d);
            t.records.push_back(r);
        }
        return t;
    }

    Verdict uniformity_test(std::span<const uint64_t> indices, uint64_t domain, double significance)
    {
        if (domain < 2)
            throw ParameterError("uniformity_test: domain must be at least 2");
        if (indices.empty())
            throw ParameterError("uniformity_test: no samples");
        // one sample cannot reject anything
        if (indices.size() == 1)
            return Verdict::pass;
        std::vector<uint64_t> counts(domain, 0);
        for (uint64_t x : indices)
        {
            if (x >= domain)
                return Verdict::fail;
            ++counts[x];
        }
        const double expect = double(indices.size()) / double(domain);
        double stat = 0;
        for (uint64_t c : counts)
            stat += (double(c) - expect) * (double(c) - expect) / expect;
        boost::math::chi_squared dist(double(domain - 1));
        double p = boost::math::cdf(boost::math::complement(dist, stat));
        return p >= significance ? Verdict::pass : Verdict::fail;
    }
}
