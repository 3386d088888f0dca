#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "yamabe/quadrature.hpp"
#include "yamabe/tensors.hpp"

namespace yamabe {

// Per-dimension expansion coefficients of the Pohozaev bulk term, assembled
// exactly from the 1-D closed forms (never transcribed): the leading
// F(W,W) coefficient, the quadratic-in-(a1,a2) lower bound polynomial for the
// cross terms, its exact maximizer, the N = 4 delta gain, and the N = 5
// second-order log coefficient. Every value carries the symbolic surface-area
// unit |S^{N-2}| of the boundary sphere; nothing multiplies it out.

enum class OrderTag {
    Eps2PiSq,      // eps^2 |pi|^2
    Eps2LogPiSq,   // eps^2 log(rho/eps) |pi|^2
    Eps3LogPiDD,   // eps^3 log(rho/eps) pi_ij,ij
};

// Quadratic polynomial in (a1, a2) with ExactScalar coefficients, understood
// as the coefficient of |S^{N-2}| * (order tag).
struct ExpansionPolynomial {
    int N = 0;
    int sphere_dim = 0;  // the unit is |S^{sphere_dim}|
    OrderTag tag = OrderTag::Eps2PiSq;
    ExactScalar c0, c1, c2, c11, c12, c22;  // {1, a1, a2, a1^2, a1 a2, a2^2}

    ExactScalar evaluate(const Rational& a1, const Rational& a2) const {
        ExactScalar v = c0;
        v += c1.scaled(a1);
        v += c2.scaled(a2);
        v += c11.scaled(a1 * a1);
        v += c12.scaled(a1 * a2);
        v += c22.scaled(a2 * a2);
        return v;
    }

    ExpansionPolynomial operator+(const ExpansionPolynomial& o) const {
        if (N != o.N || tag != o.tag)
            throw std::invalid_argument("ExpansionPolynomial: incompatible addition");
        ExpansionPolynomial s = *this;
        s.c0 += o.c0;
        s.c1 += o.c1;
        s.c2 += o.c2;
        s.c11 += o.c11;
        s.c12 += o.c12;
        s.c22 += o.c22;
        return s;
    }
};

// ------------------------------------------------------------ F(W,W) -------

struct LeadingCoefficient {
    int N = 0;
    int sphere_dim = 0;
    OrderTag tag = OrderTag::Eps2PiSq;
    ExactScalar coeff;
    bool vanishes_at_eps2 = false;  // N = 6: the term is O(eps^3)
};

inline LeadingCoefficient fww_coefficient(int N) {
    LeadingCoefficient out;
    out.N = N;
    out.sphere_dim = N - 2;
    switch (N) {
        case 5: {
            // -(9/8) |S^3| int t^2/(t+1)^4 dt int s^5/(s^2+1)^5 ds
            ExactScalar v = axial_closed_value(2, 4) * radial_closed(5, Rational(5));
            out.coeff = v.scaled(Rational(-9, 8));
            out.tag = OrderTag::Eps2PiSq;
            return out;
        }
        case 4: {
            // log-divergent at eps^2: coefficient of eps^2 log(rho/eps) |pi|^2.
            // Bulk curvature part: -(1/6) * logcoeff(int W Z^0).
            ExactScalar one_a = axial_log_coefficient(0, 1);   // int dt/(t+1)
            ExactScalar one_b = axial_log_coefficient(2, 3);   // int t^2/(t+1)^3
            ExactScalar wz0 = -(radial_closed(4, Rational(3)) * one_a +
                                radial_closed(2, Rational(3)) * one_b);
            ExactScalar f0 = wz0.scaled(Rational(-1, 6));
            // Metric part: -(2/3) * logcoeff(int x4^2 Lap_tan W Z^0); the four
            // log-carrying pieces of the expanded integrand.
            ExactScalar la = axial_log_coefficient(2, 3);
            ExactScalar lb = axial_log_coefficient(4, 5);
            ExactScalar xz = (-(radial_closed(6, Rational(5)) * la) -
                              radial_closed(4, Rational(5)) * lb +
                              (radial_closed(4, Rational(5)) * la).scaled(3) +
                              (radial_closed(2, Rational(5)) * lb).scaled(3))
                                 .scaled(2);
            ExactScalar f1 = xz.scaled(Rational(-2, 3));
            out.coeff = f0 + f1;
            out.tag = OrderTag::Eps2LogPiSq;
            return out;
        }
        case 6:
            out.coeff = ExactScalar::zero();
            out.tag = OrderTag::Eps2PiSq;
            out.vanishes_at_eps2 = true;
            return out;
        default:
            throw std::invalid_argument("fww_coefficient: N must be 4, 5 or 6");
    }
}

// --------------------------------------------- cross terms F(W,Psi)+... ----

struct CrossPolynomials {
    ExpansionPolynomial bulk;      // 2 eps pi int x_N d_ij W Phi
    ExpansionPolynomial boundary;  // int q Phi over the boundary
    ExpansionPolynomial total;     // their sum (the displayed lower bound)
};

namespace detail {

// tiny expansion helper: linear forms in {1, a1, a2} with a power offset of
// u = r^2+1, multiplied into quadratic forms in {1, a1, a2, a1^2, a1a2, a2^2}
struct LinTerm {
    int id;  // 0 -> 1, 1 -> a1, 2 -> a2
    int upow;
    Rational c;
};

inline int product_id(int a, int b) {
    if (a > b) std::swap(a, b);
    if (a == 0) return b;          // 1 * x
    if (a == 1 && b == 1) return 3;  // a1^2
    if (a == 1 && b == 2) return 4;  // a1 a2
    return 5;                        // a2^2
}

}  // namespace detail

inline CrossPolynomials cross_polynomial(int N) {
    if (N == 4)
        throw std::invalid_argument(
            "cross_polynomial: the N = 4 case is log-divergent; use delta_gain");
    if (N != 5 && N != 6) throw std::invalid_argument("cross_polynomial: N must be 5 or 6");
    const int n = N - 1;
    const Rational quartic = quartic_angular_factor(n);

    CrossPolynomials out;
    for (ExpansionPolynomial* p : {&out.bulk, &out.boundary, &out.total}) {
        p->N = N;
        p->sphere_dim = N - 2;
        p->tag = OrderTag::Eps2PiSq;
    }

    // Bulk: 2 N (N-2) * quartic * [ ((N-2)/2) (ax(2,N-1)-ax(1,N-1)) rad(n+3,N+1)
    //                               + a1 ax(1,N+2) rad(n+3,N+3)
    //                               + a2 ax(1,N+1) rad(n+3,N+2) ]
    {
        Rational pref = Rational(2 * N * (N - 2)) * quartic;
        ExactScalar cst = (axial_closed_value(2, N - 1) - axial_closed_value(1, N - 1)) *
                          radial_closed(n + 3, Rational(N + 1));
        out.bulk.c0 = cst.scaled(pref * Rational(N - 2, 2));
        out.bulk.c1 =
            (axial_closed_value(1, N + 2) * radial_closed(n + 3, Rational(N + 3))).scaled(pref);
        out.bulk.c2 =
            (axial_closed_value(1, N + 1) * radial_closed(n + 3, Rational(N + 2))).scaled(pref);
    }

    // Boundary: quartic * int r^{n+3} u^{-N} [q-bracket][Phi-bracket] dr, u = r^2+1
    {
        const Rational half = Rational(N - 2, 2);
        std::vector<detail::LinTerm> qb = {
            {0, 0, half}, {1, 2, Rational(1)}, {1, 3, Rational(-4)}, {2, 2, Rational(-2)}};
        std::vector<detail::LinTerm> pb = {
            {0, 0, -half}, {1, 2, Rational(1)}, {2, 1, Rational(1)}};
        ExactScalar acc[6];
        for (const auto& ta : qb)
            for (const auto& tb : pb) {
                int id = detail::product_id(ta.id, tb.id);
                ExactScalar rint = radial_closed(n + 3, Rational(N + ta.upow + tb.upow));
                acc[id] += rint.scaled(ta.c * tb.c * quartic);
            }
        out.boundary.c0 = acc[0];
        out.boundary.c1 = acc[1];
        out.boundary.c2 = acc[2];
        out.boundary.c11 = acc[3];
        out.boundary.c12 = acc[4];
        out.boundary.c22 = acc[5];
    }

    out.total = out.bulk + out.boundary;
    return out;
}

// Full eps^2-order polynomial: F(W,W) + [F(W,Psi) + F(Psi,W)] lower bound.
inline ExpansionPolynomial total_polynomial(int N) {
    CrossPolynomials cp = cross_polynomial(N);
    ExpansionPolynomial tot = cp.total;
    LeadingCoefficient lead = fww_coefficient(N);
    if (!lead.vanishes_at_eps2) {
        if (lead.tag != tot.tag)
            throw std::logic_error("total_polynomial: mixed order tags");
        tot.c0 += lead.coeff;
    }
    return tot;
}

// ----------------------------------------------------------- maximize ------

struct MaximizeResult {
    Rational a1, a2;       // exact critical point
    ExactScalar value;     // exact value there (coefficient of the unit)
    bool negative_definite = true;
};

namespace detail {

// All five coefficients must live on a common ray (all rational or all pi
// multiples); returns the rational parts against that common unit.
inline Rational ray_part(const ExactScalar& v, bool pi_ray) {
    if (pi_ray) {
        if (v.rat != 0) throw std::domain_error("maximize: mixed rational/pi coefficients");
        return v.pi;
    }
    if (v.pi != 0) throw std::domain_error("maximize: mixed rational/pi coefficients");
    return v.rat;
}

}  // namespace detail

inline MaximizeResult maximize(const ExpansionPolynomial& p) {
    bool pi_ray = p.c11.rat == 0 && p.c22.rat == 0 && !(p.c11.pi == 0 && p.c22.pi == 0);
    Rational q11 = detail::ray_part(p.c11, pi_ray);
    Rational q12 = detail::ray_part(p.c12, pi_ray);
    Rational q22 = detail::ray_part(p.c22, pi_ray);
    Rational l1 = detail::ray_part(p.c1, pi_ray);
    Rational l2 = detail::ray_part(p.c2, pi_ray);

    // Hessian [[2 q11, q12], [q12, 2 q22]]
    Rational det = 4 * q11 * q22 - q12 * q12;
    if (det == 0)
        throw std::domain_error("maximize: singular quadratic part (critical line)");
    if (!(2 * q11 < 0 && det > 0)) {
        if (2 * q11 > 0 && det > 0)
            throw std::domain_error("maximize: quadratic part is positive definite (a minimum)");
        throw std::domain_error("maximize: quadratic part is indefinite (saddle)");
    }
    // 2 q11 a1 + q12 a2 = -l1 ;  q12 a1 + 2 q22 a2 = -l2
    Rational a1 = (-2 * q22 * l1 + q12 * l2) / det;
    Rational a2 = (q12 * l1 - 2 * q11 * l2) / det;

    MaximizeResult r;
    r.a1 = a1;
    r.a2 = a2;
    r.value = p.evaluate(a1, a2);
    return r;
}

// ------------------------------------------------------ N = 4 delta gain ---

struct DeltaGain {
    ExactScalar log_const;     // pi/24: the delta-free log coefficient of the cross terms
    ExactScalar piece_31;      // 32/105 (bulk pairing, delta-linear)
    ExactScalar piece_311;     // 6/35   (interior source against Phi_delta)
    ExactScalar piece_32;      // 2/15   (boundary q_delta Phi_delta)
    ExactScalar delta_coeff;   // 64/105
    ExactScalar pi_part_total; // log_const + F(W,W) log coefficient; cancels exactly
};

inline DeltaGain delta_gain() {
    const int n = 3;
    const Rational quartic = quartic_angular_factor(n);  // 2/15
    DeltaGain g;

    // 2 eps pi int x4 d_ij W Phi_delta: prefactor 2*4*2 = 16 times the quartic.
    Rational pref31 = Rational(16) * quartic;  // 32/15
    g.log_const = (radial_closed(6, Rational(5)) * axial_log_coefficient(2, 3)).scaled(pref31);
    g.piece_31 =
        (radial_closed(6, Rational(9, 2)) * axial_log_coefficient(1, 2)).scaled(pref31);

    // interior source 9 delta eps h sigma^{-5/2} against Phi_delta
    g.piece_311 =
        (radial_closed(6, Rational(9, 2)) * axial_log_coefficient(1, 2)).scaled(Rational(9) * quartic);

    // boundary q_delta Phi_delta: log-divergent radial integral r^6 u^{-7/2}
    g.piece_32 = radial_log_coefficient(6, Rational(7, 2)).scaled(quartic);

    g.delta_coeff = g.piece_31 + g.piece_311 + g.piece_32;
    g.pi_part_total = g.log_const + fww_coefficient(4).coeff;
    return g;
}

// --------------------------------- N = 5 second-order log coefficient ------

struct SecondOrderLog {
    ExactScalar piece_quartic;  // log coeff of int x5 |xbar|^4 (1-|x|^2) sigma^-6 / |S^3|
    ExactScalar piece_quadratic;  // same with |xbar|^2, sigma^-5
    ExactScalar coeff;          // -(15/8) A + (9/4) B = -9/64
};

inline SecondOrderLog second_order_log_coefficient(double pi_second_derivative_scale = 1.0) {
    SecondOrderLog s;
    // A: the "1" term converges (axial a=1 against (t+1)^-4); the -r^2 and
    // -x5^2 terms carry the log.
    s.piece_quartic = -(radial_closed(9, Rational(6)) * axial_log_coefficient(1, 2) +
                        radial_closed(7, Rational(6)) * axial_log_coefficient(3, 4));
    s.piece_quadratic = -(radial_closed(7, Rational(5)) * axial_log_coefficient(1, 2) +
                          radial_closed(5, Rational(5)) * axial_log_coefficient(3, 4));
    s.coeff = s.piece_quartic.scaled(Rational(-15, 8)) + s.piece_quadratic.scaled(Rational(9, 4));
    if (pi_second_derivative_scale == 0.0) s.coeff = ExactScalar::zero();
    return s;
}

// 1-D reduced integrands (exact r-integration already applied) for the
// numerical log-fit cross-check of the two pieces above.
inline std::function<double(double)> second_order_integrand_quartic() {
    double r76 = radial_closed(7, Rational(6)).to_double();
    double r96 = radial_closed(9, Rational(6)).to_double();
    return [r76, r96](double t) {
        double tp = t + 1.0;
        return t * ((1.0 - t * t) * r76 / std::pow(tp, 4) - r96 / (tp * tp));
    };
}

inline std::function<double(double)> second_order_integrand_quadratic() {
    double r55 = radial_closed(5, Rational(5)).to_double();
    double r75 = radial_closed(7, Rational(5)).to_double();
    return [r55, r75](double t) {
        double tp = t + 1.0;
        return t * ((1.0 - t * t) * r55 / std::pow(tp, 4) - r75 / (tp * tp));
    };
}

// --------------------------------------------- numerical cross-checks ------

// The eq_FW_32-type boundary integrand at concrete (a1,a2), reduced to 1-D;
// integrates to boundary-polynomial(a1,a2) (in |S^{N-2}| units).
inline std::function<double(double)> boundary_integrand(int N, double a1, double a2) {
    const int n = N - 1;
    double quartic = to_double(quartic_angular_factor(n));
    return [N, n, a1, a2, quartic](double r) {
        double u = r * r + 1.0;
        double bq = 0.5 * (N - 2) + a1 * (1.0 / (u * u) - 4.0 / (u * u * u)) - 2.0 * a2 / (u * u);
        double bp = -0.5 * (N - 2) + a1 / (u * u) + a2 / u;
        return quartic * std::pow(r, n + 3) * std::pow(u, -double(N)) * bq * bp;
    };
}

// The eq_FW_31-type bulk integrand, reduced to 2-D (r, t); integrates over the
// quarter plane to bulk-polynomial(a1,a2).
inline std::function<double(double, double)> bulk_integrand(int N, double a1, double a2) {
    const int n = N - 1;
    double quartic = to_double(quartic_angular_factor(n));
    double pref = 2.0 * N * (N - 2) * quartic;
    return [N, n, a1, a2, pref](double r, double t) {
        double tp = t + 1.0;
        double sg = r * r + tp * tp;
        double phi = 0.5 * (N - 2) * (t - 1.0) * std::pow(sg, -0.5 * N) +
                     a1 * tp * std::pow(sg, -0.5 * (N + 4)) + a2 * std::pow(sg, -0.5 * (N + 2));
        return pref * std::pow(r, n + 3) * t * std::pow(sg, -0.5 * (N + 2)) * phi;
    };
}

}  // namespace yamabe
