#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace causal
{
    /// Exact probabilities and game values.
    using Rational = boost::rational<std::int64_t>;

    inline auto to_string(const Rational & r) -> std::string
    {
        return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
    }
}
