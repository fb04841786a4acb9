#pragma once
#include <stdexcept>
#include <string>

namespace o2ram
{
    struct ParameterError : std::invalid_argument
    {
        using std::invalid_argument::invalid_argument;
    };

    struct ContractViolation : std::logic_error
    {
        using std::logic_error::logic_error;
    };

    // raised by lookup of an already consumed key when recurrence checking is on
    struct RecurrentLookup : ContractViolation
    {
        using ContractViolation::ContractViolation;
    };

    struct CompactionOverflow : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct BinOverflow : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct MatchingIncomplete : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct TierImbalance : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct SizingError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // retries exhausted
    struct BuildFailure : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct InitError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct CapacityError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct ParseError : std::runtime_error
    {
        ParseError(size_t line, const std::string &what)
            : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
        size_t line;
    };
}
