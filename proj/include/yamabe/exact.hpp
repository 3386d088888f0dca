#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "yamabe/rational.hpp"

namespace yamabe {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// -------------------------------------------------------------------------
// ExactScalar: an element q0 + q1*pi of the field Q + Q*pi.
//
// Every displayed constant of the analysis lives here (possibly as the
// coefficient of a symbolic surface-area unit, which is carried separately:
// products of two pi-carrying scalars leave the field and are rejected).
// -------------------------------------------------------------------------
struct ExactScalar {
    Rational rat;  // rational part
    Rational pi;   // coefficient of pi

    ExactScalar() = default;
    ExactScalar(Rational r) : rat(std::move(r)) {}
    ExactScalar(Rational r, Rational p) : rat(std::move(r)), pi(std::move(p)) {}

    static ExactScalar zero() { return {}; }
    static ExactScalar of_pi(Rational p) { return ExactScalar(Rational(0), std::move(p)); }

    bool is_zero() const { return rat == 0 && pi == 0; }
    bool is_rational() const { return pi == 0; }

    double to_double() const { return yamabe::to_double(rat) + yamabe::to_double(pi) * kPi; }

    ExactScalar operator+(const ExactScalar& o) const { return {rat + o.rat, pi + o.pi}; }
    ExactScalar operator-(const ExactScalar& o) const { return {rat - o.rat, pi - o.pi}; }
    ExactScalar operator-() const { return {-rat, -pi}; }
    ExactScalar& operator+=(const ExactScalar& o) {
        rat += o.rat;
        pi += o.pi;
        return *this;
    }

    ExactScalar scaled(const Rational& r) const { return {rat * r, pi * r}; }

    // Product; rejected when both factors carry pi (pi^2 is not representable).
    ExactScalar operator*(const ExactScalar& o) const {
        if (pi != 0 && o.pi != 0)
            throw std::domain_error("ExactScalar product would produce pi^2");
        return {rat * o.rat, rat * o.pi + pi * o.rat};
    }

    bool operator==(const ExactScalar& o) const { return rat == o.rat && pi == o.pi; }
    bool operator!=(const ExactScalar& o) const { return !(*this == o); }

    // Report form "p/q + r/s*pi".
    std::string str() const { return rat_str(rat) + " + " + rat_str(pi) + "*pi"; }
};

inline ExactScalar exact_add(const ExactScalar& a, const ExactScalar& b) { return a + b; }
inline ExactScalar exact_scale(const ExactScalar& a, const Rational& r) { return a.scaled(r); }

// -------------------------------------------------------------------------
// PiValue: q * pi^m with exact rational q and integer m >= 0. The sphere
// moments and surface areas need pi^2 (|S^3| = 2 pi^2), which does not fit
// in ExactScalar; this is the internal exact carrier for them.
// -------------------------------------------------------------------------
struct PiValue {
    Rational q;
    int pi_pow = 0;

    PiValue() = default;
    PiValue(Rational v, int p = 0) : q(std::move(v)), pi_pow(v == 0 ? 0 : p) {}

    bool is_zero() const { return q == 0; }

    double to_double() const { return yamabe::to_double(q) * std::pow(kPi, pi_pow); }

    PiValue operator*(const PiValue& o) const {
        if (q == 0 || o.q == 0) return {};
        return {q * o.q, pi_pow + o.pi_pow};
    }
    PiValue scaled(const Rational& r) const { return {q * r, pi_pow}; }

    PiValue operator+(const PiValue& o) const {
        if (q == 0) return o;
        if (o.q == 0) return *this;
        if (pi_pow != o.pi_pow)
            throw std::domain_error("PiValue addition with mismatched pi powers");
        return {q + o.q, pi_pow};
    }

    // Exact quotient; both must share the zero-test convention above.
    PiValue divided_by(const PiValue& o) const {
        if (o.q == 0) throw std::domain_error("PiValue division by zero");
        if (q == 0) return {};
        return {q / o.q, pi_pow - o.pi_pow};
    }

    bool operator==(const PiValue& o) const {
        return q == o.q && (q == 0 || pi_pow == o.pi_pow);
    }

    // Representable in Q + Q*pi only for pi_pow <= 1.
    std::optional<ExactScalar> to_exact() const {
        if (q == 0) return ExactScalar::zero();
        if (pi_pow == 0) return ExactScalar(q);
        if (pi_pow == 1) return ExactScalar::of_pi(q);
        return std::nullopt;
    }

    std::string str() const {
        if (pi_pow == 0) return rat_str(q);
        std::string s = rat_str(q) + "*pi";
        if (pi_pow > 1) s += "^" + std::to_string(pi_pow);
        return s;
    }
};

// Gamma(k/2) for integer k >= 1, as q * sqrt(pi)^s with s in {0,1}.
struct GammaHalf {
    Rational q;
    int sqrt_pi = 0;  // 0 or 1
};

inline GammaHalf gamma_half(int k) {
    if (k <= 0) throw std::domain_error("gamma_half needs a positive argument");
    if (k % 2 == 0) return {Rational(factorial(static_cast<unsigned>(k / 2 - 1))), 0};
    // Gamma(k/2) = (k-2)!! / 2^((k-1)/2) * sqrt(pi)
    BigInt num = double_factorial(k - 2);
    BigInt den = BigInt(1) << ((k - 1) / 2);
    return {Rational(num, den), 1};
}

// -------------------------------------------------------------------------
// AsymptoticValue: c_log * log(R) + c0 + o(1) as the cutoff R grows. Only the
// log coefficient is exact; the O(1) part is numerical and usually unknown
// (the analysis absorbs it into error terms).
// -------------------------------------------------------------------------
struct AsymptoticValue {
    ExactScalar log_coeff;
    double const_part = 0.0;
    bool const_known = false;

    AsymptoticValue() = default;
    explicit AsymptoticValue(ExactScalar lc) : log_coeff(std::move(lc)) {}
    AsymptoticValue(ExactScalar lc, double c0)
        : log_coeff(std::move(lc)), const_part(c0), const_known(true) {}

    static AsymptoticValue convergent(double value) {
        return AsymptoticValue(ExactScalar::zero(), value);
    }

    bool is_convergent() const { return log_coeff.is_zero(); }

    AsymptoticValue operator+(const AsymptoticValue& o) const {
        AsymptoticValue r(log_coeff + o.log_coeff);
        r.const_known = const_known && o.const_known;
        r.const_part = const_part + o.const_part;
        return r;
    }

    AsymptoticValue scaled(const Rational& c) const {
        AsymptoticValue r(log_coeff.scaled(c));
        r.const_known = const_known;
        r.const_part = const_part * yamabe::to_double(c);
        return r;
    }

    // Value at a concrete cutoff; meaningful only when const_known.
    double at(double cutoff) const {
        return log_coeff.to_double() * std::log(cutoff) + const_part;
    }
};

// -------------------------------------------------------------------------
// Surface areas |S^k| = 2 pi^((k+1)/2) / Gamma((k+1)/2).
// -------------------------------------------------------------------------
inline PiValue sphere_area_pi(int k) {
    if (k < 0) throw std::domain_error("sphere_area needs k >= 0");
    GammaHalf g = gamma_half(k + 1);
    // 2 * pi^((k+1)/2) / (g.q * sqrt(pi)^g.sqrt_pi)
    // (k+1) even: integer pi power; odd: the sqrt(pi) of Gamma cancels one half.
    int twice_pow = (k + 1) - g.sqrt_pi;
    if (twice_pow % 2 != 0) throw std::logic_error("sphere area with fractional pi power");
    return {Rational(2) / g.q, twice_pow / 2};
}

struct SphereArea {
    ExactScalar exact;     // valid only when representable
    bool representable;    // pi power <= 1
    double value;
    PiValue symbolic;      // always exact, possibly with pi^2
};

inline SphereArea sphere_area(int k) {
    if (k < 1) throw std::domain_error("sphere_area expects k >= 1");
    PiValue p = sphere_area_pi(k);
    SphereArea out;
    out.symbolic = p;
    out.value = p.to_double();
    if (auto e = p.to_exact()) {
        out.exact = *e;
        out.representable = true;
    } else {
        out.exact = ExactScalar::zero();
        out.representable = false;
    }
    return out;
}

}  // namespace yamabe
