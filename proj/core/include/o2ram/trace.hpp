#pragma once
#include <cstdint>
#include <array>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace o2ram::trace
{
    enum class Op : uint8_t
    {
        read,
        write
    };

    enum class Derived : uint8_t
    {
        data_independent,
        prf_derived,
        random_tape
    };

    // Handle for a logical array. uid is process-unique; sessions renumber
    // arrays in order of first touch so two runs produce comparable ids.
    struct ArrayRef
    {
        uint64_t uid = 0;
        uint64_t length = 0;
    };

    uint64_t new_uid();

    inline ArrayRef declare(uint64_t length)
    {
        return ArrayRef{new_uid(), length};
    }

    struct AccessRecord
    {
        uint32_t array_id;
        Op op;
        uint64_t index;
        uint64_t span;
        Derived derived;

        bool operator==(const AccessRecord &) const = default;
    };

    struct Trace
    {
        std::vector<AccessRecord> records;
        std::map<std::string, std::string> public_params;
    };

    inline constexpr uint64_t kMaskedIndex = ~uint64_t(0);

    struct TraceShape
    {
        std::vector<AccessRecord> records;
        bool operator==(const TraceShape &) const = default;
    };

    // BLAKE2b of the shape records, for traces too large to keep
    struct ShapeDigest
    {
        std::array<uint8_t, 32> hash{};
        uint64_t records = 0;
        bool operator==(const ShapeDigest &) const = default;
    };

    class Session
    {
    public:
        enum class Mode
        {
            record,
            digest // keep only a running hash of the shape
        };

        explicit Session(Mode mode = Mode::record);
        ~Session();
        Session(const Session &) = delete;
        Session &operator=(const Session &) = delete;

        const Trace &trace() const { return trace_; }
        Trace take();
        ShapeDigest digest(); // digest mode only; ends the stream
        void set_param(const std::string &key, const std::string &value);
        void set_param(const std::string &key, uint64_t value);

        void append(const ArrayRef &a, Op op, uint64_t index, uint64_t span, Derived d);

    private:
        struct Hasher;
        Trace trace_;
        std::unordered_map<uint64_t, uint32_t> ids_;
        std::unique_ptr<Hasher> hasher_;
        Session *prev_;
    };

    namespace detail
    {
        extern constinit thread_local Session *active;
    }

    inline bool active()
    {
#if O2RAM_TRACE
        return detail::active != nullptr;
#else
        return false;
#endif
    }

    inline void record(const ArrayRef &a, Op op, uint64_t index, uint64_t span = 1,
                       Derived d = Derived::data_independent)
    {
#if O2RAM_TRACE
        if (detail::active) [[unlikely]]
            detail::active->append(a, op, index, span, d);
#else
        (void)a, (void)op, (void)index, (void)span, (void)d;
#endif
    }

    inline void read(const ArrayRef &a, uint64_t index, uint64_t span = 1,
                     Derived d = Derived::data_independent)
    {
        record(a, Op::read, index, span, d);
    }

    inline void write(const ArrayRef &a, uint64_t index, uint64_t span = 1,
                      Derived d = Derived::data_independent)
    {
        record(a, Op::write, index, span, d);
    }

    inline void set_param(const std::string &key, uint64_t value)
    {
#if O2RAM_TRACE
        if (detail::active)
            detail::active->set_param(key, value);
#else
        (void)key, (void)value;
#endif
    }

    TraceShape shape_of(const Trace &t);
    bool assert_shape_equal(const TraceShape &a, const TraceShape &b);

    void dump(std::ostream &os, const Trace &t);
    Trace load(std::istream &is);

    enum class Verdict
    {
        pass,
        fail
    };

    // chi-square goodness of fit against the uniform distribution on [0, domain)
    Verdict uniformity_test(std::span<const uint64_t> indices, uint64_t domain, double significance);

    const char *to_string(Op op);
    const char *to_string(Derived d);
}
