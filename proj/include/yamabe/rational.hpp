#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace yamabe {

// Arbitrary-precision rationals. Denominators like 60480 and 163840 show up
// in the expansion coefficients, so fixed-width arithmetic is not an option.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rat(long long num, long long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return Rational(num, den);
}

inline double to_double(const Rational& q) {
    return static_cast<double>(q);
}

// Canonical string, "p/q" or "p" when q == 1.
inline std::string rat_str(const Rational& q) {
    return q.str();
}

// Parses "p", "p/q", optionally signed.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rational(num, den);
}

inline BigInt factorial(unsigned k) {
    BigInt f = 1;
    for (unsigned i = 2; i <= k; ++i) f *= i;
    return f;
}

inline BigInt double_factorial(int k) {
    // (-1)!! = 0!! = 1
    BigInt f = 1;
    for (int i = k; i >= 2; i -= 2) f *= i;
    return f;
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    BigInt b = 1;
    for (unsigned i = 0; i < k; ++i) {
        b *= (n - i);
        b /= (i + 1);
    }
    return b;
}

}  // namespace yamabe
