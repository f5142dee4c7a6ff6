#pragma once

#include <stdexcept>
#include <string>

namespace causal
{
    /// Malformed input: bad node ids, shape mismatches, parse failures.
    class InputError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    /// An exhaustive scan would exceed the configured step budget.
    class BudgetExceeded : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// A library invariant was found broken at runtime.
    class InvariantViolation : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };
}
