#pragma once

// Exact rational numbers backed by GMP, plus the text conventions used by
// every serializer in the library ("p/q", integers without a denominator).

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rspin {

using Rational = mpq_class;
using Integer = mpz_class;

/// Every failure raised by the library derives from this type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1)
{
    if (den == 0)
        throw Error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q)
{
    // mpq_get_str already emits "p" for integers and "p/q" otherwise.
    return q.get_str();
}

inline Rational parse_rational(std::string_view text)
{
    if (text.empty())
        throw Error("empty rational literal");
    std::string s(text);
    // mpq_set_str accepts leading whitespace and "+"; keep the format strict.
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        const bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && i == 0);
        if (!ok)
            throw Error("malformed rational literal '" + s + "'");
    }
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw Error("malformed rational literal '" + s + "'");
    if (q.get_den() == 0)
        throw Error("rational literal with zero denominator '" + s + "'");
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Rational rational_pow(const Rational& base, unsigned exponent)
{
    Rational out(1);
    for (unsigned i = 0; i < exponent; ++i)
        out *= base;
    return out;
}

/// Generalized binomial coefficient C(k, j) = k (k-1) ... (k-j+1) / j!, valid for negative k.
inline Rational binomial(long k, unsigned j)
{
    Rational out(1);
    for (unsigned i = 0; i < j; ++i) {
        out *= Rational(k - static_cast<long>(i));
        out /= Rational(static_cast<long>(i) + 1);
    }
    return out;
}

inline Rational factorial(unsigned n)
{
    Integer f(1);
    for (unsigned i = 2; i <= n; ++i)
        f *= i;
    return Rational(f);
}

} // namespace rspin
