#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "oscil/errors.hpp"

namespace oscil {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "3/4", "-3/4", "17" as an exact rational. No decimals: every
// parameter that reaches arithmetic must be representable exactly.
inline Rational parse_rational(std::string_view text) {
    auto bad = [&](const char* why) {
        throw ParseError("bad fraction '" + std::string(text) + "': " + why);
    };
    if (text.empty()) bad("empty");
    std::size_t slash = text.find('/');
    auto parse_int = [&](std::string_view part) -> BigInt {
        if (part.empty()) bad("empty integer part");
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) bad("sign without digits");
        for (std::size_t k = i; k < part.size(); ++k)
            if (part[k] < '0' || part[k] > '9') bad("non-digit character");
        return BigInt(std::string(part));
    };
    BigInt num = parse_int(text.substr(0, slash));
    if (slash == std::string_view::npos) return Rational(num);
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) bad("zero denominator");
    return Rational(num, den);
}

inline std::string to_fraction_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

inline BigInt rat_floor(const Rational& q) {
    BigInt n = numerator(q), d = denominator(q);  // d > 0 canonical
    BigInt quot = n / d;
    if (n % d != 0 && n < 0) --quot;
    return quot;
}

inline BigInt rat_ceil(const Rational& q) {
    BigInt n = numerator(q), d = denominator(q);
    BigInt quot = n / d;
    if (n % d != 0 && n > 0) ++quot;
    return quot;
}

inline std::int64_t to_int64(const BigInt& v) {
    if (v < std::numeric_limits<std::int64_t>::min() ||
        v > std::numeric_limits<std::int64_t>::max())
        throw ResourceError("integer out of 64-bit range: " + v.str());
    return static_cast<std::int64_t>(v);
}

inline std::int64_t floor64(const Rational& q) { return to_int64(rat_floor(q)); }
inline std::int64_t ceil64(const Rational& q) { return to_int64(rat_ceil(q)); }

// True when the canonical numerator and denominator both fit in int64;
// hot loops use this to stay on machine words.
inline bool fits_int64(const Rational& q, std::int64_t& num, std::int64_t& den) {
    const BigInt& n = numerator(q);
    const BigInt& d = denominator(q);
    if (n < std::numeric_limits<std::int64_t>::min() ||
        n > std::numeric_limits<std::int64_t>::max() ||
        d > std::numeric_limits<std::int64_t>::max())
        return false;
    num = static_cast<std::int64_t>(n);
    den = static_cast<std::int64_t>(d);
    return true;
}

}  // namespace oscil
