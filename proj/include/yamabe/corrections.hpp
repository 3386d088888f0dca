#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "yamabe/bubble.hpp"
#include "yamabe/profiles.hpp"
#include "yamabe/tensors.hpp"

namespace yamabe {

// Explicit correction functions attached to the linearized problem
//   -Delta Psi = 2 eps pi_ij x_N d_ij W_{1,0},   -d_N Psi = N w^{2/(N-2)} Psi.
//
// Phi(a1,a2) shares Psi's interior equation; Xi = Psi - Phi is harmonic with
// boundary defect q. The N=4 variant Phi_delta trades the (a1,a2) freedom for
// a single delta. Everything here is a closed form over the shifted kernel
// sigma = r^2 + (t+1)^2 and the quadratic h = pi_ij x_i x_j.

struct CorrectionParams {
    int N = 5;
    double eps = 1.0;
    TraceFreePi pi;
    Rational a1 = 0, a2 = 0;
    double delta = 0.0;  // N = 4 only

    CorrectionParams() = default;
    CorrectionParams(int dim, double e, TraceFreePi p, Rational a1_ = 0, Rational a2_ = 0,
                     double d = 0.0)
        : N(dim), eps(e), pi(std::move(p)), a1(std::move(a1_)), a2(std::move(a2_)), delta(d) {
        if (N < 4) throw std::invalid_argument("corrections need N >= 4");
        if (eps <= 0) throw std::invalid_argument("corrections need eps > 0");
        if (pi.n() != N - 1) throw std::invalid_argument("pi must be (N-1)x(N-1)");
    }
};

// (r,t)-profile of Phi/(eps*h):
//   ((N-2)/2)(t-1) sigma^{-N/2} + a1 (t+1) sigma^{-(N+4)/2} + a2 sigma^{-(N+2)/2}
inline Profile correction_profile(int N, double a1, double a2) {
    Profile p;
    p.add({0.5 * (N - 2), 1, -1.0, 0.5 * N, false});
    p.add({a1, 1, +1.0, 0.5 * (N + 4), false});
    p.add({a2, 0, 0.0, 0.5 * (N + 2), false});
    return p;
}

// N = 4 profile of Phi_delta/(eps*h): (t-1) sigma^{-2} + delta sigma^{-3/2}
inline Profile correction_profile_delta(double delta) {
    Profile p;
    p.add({1.0, 1, -1.0, 2.0, false});
    p.add({delta, 0, 0.0, 1.5, false});
    return p;
}

namespace detail {

inline double radius_tangential(const std::vector<double>& x, int n) {
    double r2 = 0;
    for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
    return std::sqrt(r2);
}

// value / first / second derivatives of eps * h(xbar) * u(r, t)
inline double eval_h_sector(const TraceFreePi& pi, double eps, const Profile& prof,
                            const std::vector<double>& x, const std::vector<int>& deriv) {
    const int n = pi.n();
    const int N = n + 1;
    if (static_cast<int>(x.size()) != N)
        throw std::invalid_argument("correction evaluation: bad point");

    const double r = radius_tangential(x, n);
    const double t = x[N - 1];
    ProfileDerivs d = prof.eval(r, t);

    std::vector<double> xb(x.begin(), x.end() - 1);
    const double h = pi.quadratic_form(xb);
    std::vector<double> pix(n, 0.0);  // (pi x)_k
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) pix[k] += pi.at_d(k, j) * xb[j];

    const double tiny = 1e-300;
    const double ur_over_r = (r > tiny) ? d.ur / r : d.urr;

    int order = 0;
    int da = -1, db = -1;
    if (!deriv.empty()) {
        if (static_cast<int>(deriv.size()) != N)
            throw std::invalid_argument("correction evaluation: deriv length must be N");
        for (int a = 0; a < N; ++a)
            for (int c = 0; c < deriv[a]; ++c) {
                if (order == 0) da = a;
                else if (order == 1) db = a;
                ++order;
            }
        if (order > 2)
            throw std::invalid_argument("correction evaluation: derivatives up to order 2");
    }

    if (order == 0) return eps * h * d.u;

    const int vert = N - 1;
    if (order == 1) {
        if (da == vert) return eps * h * d.ut;
        return eps * (2.0 * pix[da] * d.u + h * ur_over_r * x[da]);
    }

    if (da == vert && db == vert) return eps * h * d.utt;
    if (da == vert || db == vert) {
        int k = (da == vert) ? db : da;
        double urt_over_r = (r > tiny) ? d.urt / r : 0.0;  // urt ~ O(r) near the axis
        return eps * (2.0 * pix[k] * d.ut + h * urt_over_r * x[k]);
    }
    // two tangential derivatives
    double xk_hat = (r > tiny) ? x[da] / r : 0.0;
    double xl_hat = (r > tiny) ? x[db] / r : 0.0;
    double second = (d.urr - ur_over_r) * xk_hat * xl_hat;
    double v = 2.0 * pi.at_d(da, db) * d.u +
               2.0 * (pix[da] * x[db] + pix[db] * x[da]) * ur_over_r + h * second;
    if (da == db) v += h * ur_over_r;
    return eps * v;
}

}  // namespace detail

inline double eval_Phi(const CorrectionParams& c, const std::vector<double>& x,
                       const std::vector<int>& deriv = {}) {
    Profile prof = correction_profile(c.N, to_double(c.a1), to_double(c.a2));
    return detail::eval_h_sector(c.pi, c.eps, prof, x, deriv);
}

// -Delta Phi - 2 eps pi_ij x_N d_ij W_{1,0}, closed form (vanishes identically).
inline double residual_Phi_interior(const CorrectionParams& c, const std::vector<double>& x) {
    const int N = c.N;
    Profile prof = correction_profile(N, to_double(c.a1), to_double(c.a2));
    const double r = detail::radius_tangential(x, N - 1);
    const double t = x[N - 1];
    std::vector<double> xb(x.begin(), x.end() - 1);
    const double h = c.pi.quadratic_form(xb);
    const double lap = c.eps * h * prof.laplacian_h_sector(r, t, N);
    const double tp1 = t + 1.0;
    const double sg = r * r + tp1 * tp1;
    const double rhs = 2.0 * c.eps * N * (N - 2) * h * t * std::pow(sg, -0.5 * (N + 2));
    return -lap - rhs;
}

// Boundary defect of Xi = Psi - Phi:
//   q(xbar) = eps h (|xbar|^2+1)^{-N/2}
//             [ (N-2)/2 + a1 { (|xbar|^2+1)^{-2} - 4 (|xbar|^2+1)^{-3} } - 2 a2 (|xbar|^2+1)^{-2} ]
inline double q_profile(int N, double a1, double a2, double r) {
    const double u = r * r + 1.0;
    return std::pow(u, -0.5 * N) *
           (0.5 * (N - 2) + a1 * (1.0 / (u * u) - 4.0 / (u * u * u)) - 2.0 * a2 / (u * u));
}

inline double eval_q(const CorrectionParams& c, const std::vector<double>& xbar) {
    if (static_cast<int>(xbar.size()) != c.N - 1)
        throw std::invalid_argument("eval_q: point must lie on the boundary R^n");
    const double r = detail::radius_tangential(xbar, c.N - 1);
    return c.eps * c.pi.quadratic_form(xbar) * q_profile(c.N, to_double(c.a1), to_double(c.a2), r);
}

// The boundary-operator route to the same function: d_N Phi + N w^{2/(N-2)} Phi
// at x_N = 0. eval_q is verified against this identity rather than trusted.
inline double q_from_boundary_operator(const CorrectionParams& c,
                                       const std::vector<double>& xbar) {
    std::vector<double> x = xbar;
    x.push_back(0.0);
    std::vector<int> dN(c.N, 0);
    dN[c.N - 1] = 1;
    const double dPhi = eval_Phi(c, x, dN);
    const double phi0 = eval_Phi(c, x);
    BubbleParams b(c.N);
    return dPhi + c.N * w_pow_2_over_Nm2(b, xbar) * phi0;
}

// ---------------------------------------------------------------- N = 4 ----

inline double eval_Phi_delta(const CorrectionParams& c, const std::vector<double>& x,
                             const std::vector<int>& deriv = {}) {
    if (c.N != 4) throw std::invalid_argument("Phi_delta is the N = 4 correction");
    Profile prof = correction_profile_delta(c.delta);
    return detail::eval_h_sector(c.pi, c.eps, prof, x, deriv);
}

inline double q_delta_profile(double delta, double r) {
    const double u = r * r + 1.0;
    return 1.0 / (u * u) + delta * std::pow(u, -2.5);
}

inline double eval_q_delta(const CorrectionParams& c, const std::vector<double>& xbar) {
    if (c.N != 4) throw std::invalid_argument("q_delta is the N = 4 boundary defect");
    const double r = detail::radius_tangential(xbar, 3);
    return c.eps * c.pi.quadratic_form(xbar) * q_delta_profile(c.delta, r);
}

// -Delta Phi_delta - 2 eps pi_ij x_4 d_ij W + 9 delta eps h sigma^{-5/2}  -> 0
inline double residual_Phi_delta_interior(const CorrectionParams& c,
                                          const std::vector<double>& x) {
    if (c.N != 4) throw std::invalid_argument("Phi_delta residual needs N = 4");
    Profile prof = correction_profile_delta(c.delta);
    const double r = detail::radius_tangential(x, 3);
    const double t = x[3];
    std::vector<double> xb(x.begin(), x.end() - 1);
    const double h = c.pi.quadratic_form(xb);
    const double lap = c.eps * h * prof.laplacian_h_sector(r, t, 4);
    const double tp1 = t + 1.0;
    const double sg = r * r + tp1 * tp1;
    const double rhs = 2.0 * c.eps * 4 * 2 * h * t * std::pow(sg, -3.0);
    const double source = 9.0 * c.delta * c.eps * h * std::pow(sg, -2.5);
    return -lap - rhs + source;
}

// ------------------------------------------------------- appendix chain ----
//
// Phi0 -> Phi1 -> Phi2 -> Phi1 - Phi2, with
//   -Delta Phi0 = sigma^{-(N-4)/2},
//   -Delta Phi1 = (x_N+1) sigma^{-(N-2)/2},
//   -Delta Phi2 = sigma^{-(N-2)/2},
//   -Delta (Phi1 - Phi2) = x_N W_{1,0}.
// N = 6 takes the logarithmic branch of Phi0; the final correction stays
// log-free. The free additive constants are fixed to zero (they disappear
// under the differentiation that produces Phi).

inline Profile phi0_profile(int N, double A1, bool log_branch) {
    if (N < 5) throw std::invalid_argument("appendix chain needs N >= 5");
    Profile p;
    if (N == 6) {
        if (!log_branch)
            throw std::invalid_argument("N = 6 requires the logarithmic branch of Phi0");
        p.add({-0.125, 0, 0.0, 0.0, true});
        p.add({A1, 0, 0.0, 2.0, false});
        return p;
    }
    p.add({1.0 / (4.0 * (N - 6)), 0, 0.0, 0.5 * (N - 6), false});
    p.add({A1, 0, 0.0, 0.5 * (N - 2), false});
    return p;
}

inline Profile phi1_profile(int N, double A1) {
    if (N < 5) throw std::invalid_argument("appendix chain needs N >= 5");
    Profile p;
    p.add({1.0 / (4.0 * (N - 4)), 1, +1.0, 0.5 * (N - 4), false});
    p.add({A1, 1, +1.0, 0.5 * N, false});
    return p;
}

inline Profile phi2_profile(int N, double A2) {
    if (N < 5) throw std::invalid_argument("appendix chain needs N >= 5");
    Profile p;
    p.add({1.0 / (2.0 * (N - 4)), 0, 0.0, 0.5 * (N - 4), false});
    p.add({A2, 0, 0.0, 0.5 * (N - 2), false});
    return p;
}

struct AppendixChainValues {
    double phi0 = 0, phi1 = 0, phi2 = 0, phi1_minus_phi2 = 0;
};

inline AppendixChainValues appendix_chain(int N, double A1, double A2,
                                          const std::vector<double>& x) {
    const double r = detail::radius_tangential(x, N - 1);
    const double t = x[N - 1];
    AppendixChainValues v;
    v.phi0 = phi0_profile(N, A1, N == 6).value(r, t);
    v.phi1 = phi1_profile(N, A1).value(r, t);
    v.phi2 = phi2_profile(N, A2).value(r, t);
    v.phi1_minus_phi2 = v.phi1 - v.phi2;
    return v;
}

// -Delta(Phi1 - Phi2) - x_N W_{1,0} at a point, closed form.
inline double residual_appendix_target(int N, double A1, double A2,
                                       const std::vector<double>& x) {
    const double r = detail::radius_tangential(x, N - 1);
    const double t = x[N - 1];
    double lap = phi1_profile(N, A1).laplacian_plain(r, t, N) -
                 phi2_profile(N, A2).laplacian_plain(r, t, N);
    const double tp1 = t + 1.0;
    const double sg = r * r + tp1 * tp1;
    return -lap - t * std::pow(sg, -0.5 * (N - 2));
}

// 2 pi_ij d_ij (Phi1 - Phi2): the trace-free contraction that produces Phi
// with a1 = -2(N+2) A1 and a2 = -2N A2 (eps = 1).
inline double hessian_contraction_chain(int N, double A1, double A2, const TraceFreePi& pi,
                                        const std::vector<double>& x) {
    const int n = N - 1;
    const double r = detail::radius_tangential(x, n);
    const double t = x[N - 1];
    ProfileDerivs d1 = phi1_profile(N, A1).eval(r, t);
    ProfileDerivs d2 = phi2_profile(N, A2).eval(r, t);
    double grr = d1.urr - d2.urr;
    double gr = d1.ur - d2.ur;
    std::vector<double> xb(x.begin(), x.end() - 1);
    const double h = pi.quadratic_form(xb);
    if (r < 1e-300) return 0.0;
    return 2.0 * (grr - gr / r) * h / (r * r);
}

}  // namespace yamabe
