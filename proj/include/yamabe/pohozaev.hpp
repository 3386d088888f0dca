#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "yamabe/bubble.hpp"
#include "yamabe/corrections.hpp"
#include "yamabe/expansions.hpp"
#include "yamabe/quadrature.hpp"
#include "yamabe/tensors.hpp"

namespace yamabe {

// =========================================================================
// Fields on the half-space
// =========================================================================

// Evaluator with a declared angular symmetry class. Radial means U = u(r,t);
// HQuadratic means U = pi_ij x_i x_j * u(r,t). The class is what lets the
// N-dimensional integrals reduce to one or two dimensions.
class FieldOnHalfSpace {
public:
    enum class Sym { Radial, HQuadratic };

    using ProfileFn = std::function<ProfileDerivs(double, double)>;

    FieldOnHalfSpace(int N, Sym s, ProfileFn prof, TraceFreePi pi = {})
        : N_(N), sym_(s), prof_(std::move(prof)), pi_(std::move(pi)) {
        if (s == Sym::HQuadratic && pi_.n() != N - 1)
            throw std::invalid_argument("HQuadratic field needs pi of size N-1");
    }

    int dim() const { return N_; }
    Sym sym() const { return sym_; }
    const TraceFreePi& pi() const { return pi_; }

    ProfileDerivs profile(double r, double t) const { return prof_(r, t); }

    double value(const std::vector<double>& x) const {
        auto [r, t] = split(x);
        double u = prof_(r, t).u;
        if (sym_ == Sym::Radial) return u;
        std::vector<double> xb(x.begin(), x.end() - 1);
        return pi_.quadratic_form(xb) * u;
    }

    std::vector<double> gradient(const std::vector<double>& x) const {
        auto [r, t] = split(x);
        ProfileDerivs d = prof_(r, t);
        std::vector<double> g(N_, 0.0);
        if (sym_ == Sym::Radial) {
            double ur_over_r = (r > 1e-300) ? d.ur / r : d.urr;
            for (int i = 0; i < N_ - 1; ++i) g[i] = ur_over_r * x[i];
            g[N_ - 1] = d.ut;
            return g;
        }
        std::vector<double> xb(x.begin(), x.end() - 1);
        double h = pi_.quadratic_form(xb);
        double ur_over_r = (r > 1e-300) ? d.ur / r : d.urr;
        for (int k = 0; k < N_ - 1; ++k) {
            double pix = 0;
            for (int j = 0; j < N_ - 1; ++j) pix += pi_.at_d(k, j) * xb[j];
            g[k] = 2.0 * pix * d.u + h * ur_over_r * x[k];
        }
        g[N_ - 1] = h * d.ut;
        return g;
    }

private:
    static std::pair<double, double> split(const std::vector<double>& x) {
        double r2 = 0;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) r2 += x[i] * x[i];
        return {std::sqrt(r2), x.back()};
    }

    int N_;
    Sym sym_;
    ProfileFn prof_;
    TraceFreePi pi_;
};

inline FieldOnHalfSpace bubble_field(int N) {
    Profile p = bubble_profile(N);
    return FieldOnHalfSpace(N, FieldOnHalfSpace::Sym::Radial,
                            [p](double r, double t) { return p.eval(r, t); });
}

inline FieldOnHalfSpace constant_field(int N, double c) {
    return FieldOnHalfSpace(N, FieldOnHalfSpace::Sym::Radial, [c](double, double) {
        ProfileDerivs d;
        d.u = c;
        return d;
    });
}

// |x|^{2-N}, the singular model (profile in the unshifted radius)
inline FieldOnHalfSpace power_field(int N) {
    double a = 2.0 - N;
    return FieldOnHalfSpace(N, FieldOnHalfSpace::Sym::Radial, [a](double r, double t) {
        double rho2 = r * r + t * t;
        double rho = std::sqrt(rho2);
        ProfileDerivs d;
        double p = std::pow(rho, a);
        d.u = p;
        d.ur = a * p / rho2 * r;
        d.ut = a * p / rho2 * t;
        d.urr = a * p / rho2 * (1.0 + (a - 2.0) * r * r / rho2);
        d.utt = a * p / rho2 * (1.0 + (a - 2.0) * t * t / rho2);
        d.urt = a * (a - 2.0) * p / (rho2 * rho2) * r * t;
        return d;
    });
}

inline FieldOnHalfSpace field_sum(const FieldOnHalfSpace& f, double cf,
                                  const FieldOnHalfSpace& g, double cg) {
    if (f.dim() != g.dim() || f.sym() != g.sym())
        throw std::invalid_argument("field_sum: incompatible fields");
    auto pf = [f, cf, g, cg](double r, double t) {
        ProfileDerivs a = f.profile(r, t);
        ProfileDerivs b = g.profile(r, t);
        ProfileDerivs out;
        out.u = cf * a.u + cg * b.u;
        out.ur = cf * a.ur + cg * b.ur;
        out.ut = cf * a.ut + cg * b.ut;
        out.urr = cf * a.urr + cg * b.urr;
        out.utt = cf * a.utt + cg * b.utt;
        out.urt = cf * a.urt + cg * b.urt;
        return out;
    };
    return FieldOnHalfSpace(f.dim(), f.sym(), pf, f.pi());
}

// The correction Phi as a field (profile includes the eps factor).
inline FieldOnHalfSpace correction_field(const CorrectionParams& c) {
    Profile p = correction_profile(c.N, to_double(c.a1), to_double(c.a2));
    double eps = c.eps;
    return FieldOnHalfSpace(
        c.N, FieldOnHalfSpace::Sym::HQuadratic,
        [p, eps](double r, double t) {
            ProfileDerivs d = p.eval(r, t);
            d.u *= eps; d.ur *= eps; d.ut *= eps; d.urr *= eps; d.utt *= eps; d.urt *= eps;
            return d;
        },
        c.pi);
}

// =========================================================================
// The Pohozaev surface functionals P' and P
// =========================================================================

struct FluxReport {
    double rho = 0;
    double P_prime = 0;
    double P = 0;
    // per-term breakdown of the surface integral
    double term_u_dnu = 0;
    double term_grad_sq = 0;
    double term_dnu_sq = 0;
    double term_ring = 0;
    double quad_error = 0;
};

struct PohozaevOptions {
    // inward normal on the half-sphere points toward the origin; the switch
    // exists so the convention can be pinned by the P(W, rho) = 0 identity
    bool normal_toward_origin = true;
    double tol = 1e-11;
    // ring-term data (the boundary nonlinearity); defaults are the bubble's
    double f_const = -1;  // negative means use N-2
    double p_exponent = -1;  // negative means use N/(N-2)
};

inline FluxReport eval_P_prime(const FieldOnHalfSpace& U, double rho,
                               PohozaevOptions opt = {}) {
    if (U.sym() != FieldOnHalfSpace::Sym::Radial)
        throw std::invalid_argument("eval_P_prime: only radial-class fields are supported");
    const int N = U.dim();
    const int n = N - 1;
    const double sgn = opt.normal_toward_origin ? -1.0 : 1.0;  // nu = sgn * x/rho
    const double area = sphere_area_pi(n - 1).to_double();     // |S^{N-2}|

    FluxReport rep;
    rep.rho = rho;

    double err_total = 0;
    auto integrate_term = [&](auto&& f) {
        QuadResult q = adaptive(f, 0.0, 1.5707963267948966, opt.tol);
        err_total += q.error;
        return q.value * area * std::pow(rho, N - 1);
    };

    auto at_theta = [&](double th) {
        double r = rho * std::sin(th);
        double t = rho * std::cos(th);
        ProfileDerivs d = U.profile(r, t);
        double dnu = sgn * (r * d.ur + t * d.ut) / rho;
        double grad2 = d.ur * d.ur + d.ut * d.ut;
        return std::tuple<double, double, double>(d.u, dnu, grad2);
    };
    auto wgt = [n](double th) { return std::pow(std::sin(th), n - 1); };

    rep.term_u_dnu = integrate_term([&](double th) {
        auto [u, dnu, g2] = at_theta(th);
        return -0.5 * (N - 2) * u * dnu * wgt(th);
    });
    rep.term_grad_sq = integrate_term([&](double th) {
        auto [u, dnu, g2] = at_theta(th);
        return -0.5 * rho * g2 * wgt(th);
    });
    rep.term_dnu_sq = integrate_term([&](double th) {
        auto [u, dnu, g2] = at_theta(th);
        return rho * dnu * dnu * wgt(th);
    });
    rep.P_prime = rep.term_u_dnu + rep.term_grad_sq + rep.term_dnu_sq;

    double fc = opt.f_const < 0 ? double(N - 2) : opt.f_const;
    double p = opt.p_exponent < 0 ? double(N) / (N - 2) : opt.p_exponent;
    double ub = U.profile(rho, 0.0).u;
    double ring_area = sphere_area_pi(n - 2).to_double() * std::pow(rho, n - 1);
    rep.term_ring = rho / (p + 1.0) * fc * std::pow(ub, p + 1.0) * ring_area;
    rep.P = rep.P_prime + rep.term_ring;
    rep.quad_error = err_total * area * std::pow(rho, N - 1);
    return rep;
}

// Bulk/boundary data of the identity: U solves -Delta U = Q in the half-ball
// and -d_N U + ((N-2)/2) H U = f U^p on the flat part.
struct PohozaevData {
    std::function<double(double, double)> Q = nullptr;  // (r,t), radial class
    std::function<double(double)> H = nullptr;          // boundary, radial
    double f_const = -1;                                // -1: use N-2
    std::function<double(double)> f_dr = nullptr;       // df/dr, nullptr = 0
    double p_exponent = -1;                             // -1: use N/(N-2)
};

// P(U, rho) minus the four bulk/boundary integrals of the identity; vanishes
// exactly when U solves the stated problem. U need not solve anything: the
// residual is the diagnostic.
inline double poho_identity_residual(const FieldOnHalfSpace& U, const PohozaevData& data,
                                     double rho, PohozaevOptions opt = {}) {
    const int N = U.dim();
    const int n = N - 1;
    opt.f_const = data.f_const;
    opt.p_exponent = data.p_exponent;
    FluxReport rep = eval_P_prime(U, rho, opt);

    const double fc = data.f_const < 0 ? double(N - 2) : data.f_const;
    const double p = data.p_exponent < 0 ? double(N) / (N - 2) : data.p_exponent;
    const double area_n = sphere_area_pi(n - 1).to_double();  // |S^{n-1}|

    double rhs = 0.0;
    // -int_B Q [x.grad U + ((N-2)/2) U]
    if (data.Q) {
        auto f2 = [&](double r, double t) {
            if (r * r + t * t > rho * rho) return 0.0;
            ProfileDerivs d = U.profile(r, t);
            double mult = r * d.ur + t * d.ut + 0.5 * (N - 2) * d.u;
            return data.Q(r, t) * mult * std::pow(r, n - 1);
        };
        QuadResult q = adaptive_2d(f2, 0.0, rho, 0.0, rho, opt.tol);
        rhs -= area_n * q.value;
    }
    // ((N-2)/2) int_{B^n} H [x.grad U + ((N-2)/2) U] U
    if (data.H) {
        auto f1 = [&](double r) {
            ProfileDerivs d = U.profile(r, 0.0);
            double mult = r * d.ur + 0.5 * (N - 2) * d.u;
            return data.H(r) * mult * d.u * std::pow(r, n - 1);
        };
        QuadResult q = adaptive(f1, 0.0, rho, opt.tol);
        rhs += 0.5 * (N - 2) * area_n * q.value;
    }
    // -(1/(p+1)) int x_i d_i f U^{p+1}   +   ((N-1)/(p+1) - (N-2)/2) int f U^{p+1}
    double c_tail = (N - 1) / (p + 1.0) - 0.5 * (N - 2);
    if (data.f_dr || c_tail != 0.0) {
        auto f1 = [&](double r) {
            double u = U.profile(r, 0.0).u;
            double up = std::pow(u, p + 1.0);
            double v = 0.0;
            if (data.f_dr) v -= 1.0 / (p + 1.0) * r * data.f_dr(r) * up;
            v += c_tail * fc * up;
            return v * std::pow(r, n - 1);
        };
        QuadResult q = adaptive(f1, 0.0, rho, opt.tol);
        rhs += area_n * q.value;
    }
    return rep.P - rhs;
}

// =========================================================================
// The reduced bilinear form F (Pohozaev bulk pairing)
// =========================================================================

// F(V1, V2) over the truncated half-ball B^+(0, tau), with the metric input
// reduced to the conformally normalized jet at quadratic vertical order:
//   A(eps x) = -2 (eps x_N) pi + (eps x_N)^2 (pi^2 + (|pi|^2/n) I),
//   g^{ij} = [(I+A)^{-1}]_ij,  R = -|pi|^2.
// For radial V1, V2 the angular reduction is exact (A depends only on x_N).
// For one h-class argument the form reduces to the pairing
//   2 eps pi_ij int x_N d_ij V_rad V_h dx.
// The determinant-derivative terms are O(eps^2) relative and are absorbed
// into the error order, matching the expansion this form feeds.
inline double f_form(const FieldOnHalfSpace& V1, const FieldOnHalfSpace& V2,
                     const CorrectionParams& c, double rho_over_eps, double tol = 1e-9) {
    const int N = c.N;
    const int n = N - 1;
    const double tau = rho_over_eps;
    const double area = sphere_area_pi(n - 1).to_double();
    const double norm_sq = to_double(c.pi.norm_sq());
    if (c.pi.is_zero()) return 0.0;

    using Sym = FieldOnHalfSpace::Sym;
    if (V1.sym() == Sym::Radial && V2.sym() == Sym::Radial) {
        Eigen::MatrixXd P(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) P(i, j) = c.pi.at_d(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
        Eigen::VectorXd lam = es.eigenvalues();

        const double cR = double(N - 2) / (4.0 * (N - 1));
        const double eps = c.eps;

        auto integrand = [&](double r, double t) {
            if (r * r + t * t > tau * tau) return 0.0;
            ProfileDerivs d1 = V1.profile(r, t);
            ProfileDerivs d2 = V2.profile(r, t);
            double mult = r * d2.ur + t * d2.ut + 0.5 * (N - 2) * d2.u;

            double et = eps * t;
            double trG = 0.0;
            for (int i = 0; i < n; ++i) {
                double mu = -2.0 * et * lam[i] + et * et * (lam[i] * lam[i] + norm_sq / n);
                trG += mu / (1.0 + mu);
            }
            double a = (r > 1e-300) ? d1.ur / r : d1.urr;
            double b = d1.urr - a;
            double metric_part = trG * (a + b / n);
            double curv_part = cR * eps * eps * (-norm_sq) * d1.u;
            return (curv_part + metric_part) * mult * std::pow(r, n - 1);
        };
        QuadResult q = adaptive_2d(integrand, 0.0, tau, 0.0, tau, tol);
        if (!q.converged) throw std::runtime_error("f_form: quadrature did not converge");
        return area * q.value;
    }

    if ((V1.sym() == Sym::Radial) != (V2.sym() == Sym::Radial)) {
        const FieldOnHalfSpace& R = V1.sym() == Sym::Radial ? V1 : V2;
        const FieldOnHalfSpace& H = V1.sym() == Sym::Radial ? V2 : V1;
        double quart = to_double(quartic_angular_factor(n)) * norm_sq;
        double eps = c.eps;
        auto integrand = [&](double r, double t) {
            if (r * r + t * t > tau * tau) return 0.0;
            ProfileDerivs dr_ = R.profile(r, t);
            double a = (r > 1e-300) ? dr_.ur / r : dr_.urr;
            double b = dr_.urr - a;  // pi_ij d_ij V_rad = b h / r^2
            double u2 = H.profile(r, t).u;
            return 2.0 * eps * t * b * u2 * std::pow(r, n + 1);
        };
        QuadResult q = adaptive_2d(integrand, 0.0, tau, 0.0, tau, tol);
        if (!q.converged) throw std::runtime_error("f_form: quadrature did not converge");
        return area * quart * q.value;
    }

    throw std::invalid_argument("f_form: unsupported symmetry class pairing");
}

// =========================================================================
// Mass flux integral
// =========================================================================

struct MassFluxReport {
    double rho = 0;
    double A_part = 0;  // second surface integral (the jet part), exact evaluation
    double G_part = 0;  // first surface integral times 4(N-1)/(N-2)
    double total = 0;   // G_part - A_part
    // exact A-part, keyed by the power of rho
    std::map<int, PiValue> A_exact;
};

// Exact A-part: sum over jet monomials of half-sphere moments. Returns the
// flux as a polynomial in rho (one PiValue per power).
inline std::map<int, PiValue> mass_flux_A_exact(const MetricJet& jet) {
    const int n = jet.n;
    const int N = n + 1;
    std::map<int, PiValue> out;
    auto accumulate = [&](int pow, const PiValue& v) {
        if (v.is_zero()) return;
        auto it = out.find(pow);
        if (it == out.end()) out.emplace(pow, v);
        else it->second = it->second + v;
    };
    for (const JetMonomial& T : metric_jet_polynomial(jet)) {
        int deg = 0;
        for (int a : T.alpha) deg += a;
        int rho_pow = deg + 2 - N;
        // rho^{3-2N} x_i d_j A_ij: the derivative direction is the entry's
        // second index
        if (T.alpha[T.j] > 0) {
            std::vector<int> beta = T.alpha;
            beta[T.j] -= 1;
            beta[T.i] += 1;
            PiValue m = moment_pi(beta, true, N);
            accumulate(rho_pow, m.scaled(T.coeff * T.alpha[T.j]));
        }
        // -2N rho^{1-2N} x_i x_j A_ij
        std::vector<int> beta = T.alpha;
        beta[T.i] += 1;
        beta[T.j] += 1;
        PiValue m = moment_pi(beta, true, N);
        accumulate(rho_pow, m.scaled(T.coeff * Rational(-2 * N)));
    }
    return out;
}

// The rho^{5-N} coefficient of the A-part for a ddII-only normalized jet,
// divided by |S^{n-1}| pi_ij,ij: reproduces 2(N-3)/((N-1)(N+1)(N+3)).
inline ExactScalar mass_flux_ddii_coefficient(int N) {
    const int n = N - 1;
    // II_ij,kl = m_ij m_kl with m trace-free keeps the first index pair
    // trace-free (a genuine pi-derivative array); then pi_ij,ij = |m|^2.
    MetricJet jet(n);
    std::vector<Rational> diag(n, Rational(0));
    diag[0] = 1;
    diag[1] = -1;
    TraceFreePi m = TraceFreePi::diag(diag);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) jet.ddII(i, j, k, l) = m.at(i, j) * m.at(k, l);
    jet.conformal_normalized = true;
    auto flux = mass_flux_A_exact(jet);
    PiValue lead;
    if (auto it = flux.find(5 - N); it != flux.end()) lead = it->second;
    PiValue ratio = lead.divided_by(sphere_area_pi(n - 1));
    auto ex = ratio.to_exact();
    if (!ex) throw std::logic_error("ddII flux coefficient left Q + Q*pi");
    return ex->scaled(1 / m.norm_sq());  // divide by pi_ij,ij
}

// G = |x|^{2-N} + phi with phi caller-supplied (radial class, possibly null).
inline MassFluxReport mass_flux(const MetricJet& jet,
                                const FieldOnHalfSpace* phi_correction, double rho,
                                double tol = 1e-11) {
    const int n = jet.n;
    const int N = n + 1;
    MassFluxReport rep;
    rep.rho = rho;
    rep.A_exact = mass_flux_A_exact(jet);
    for (const auto& [pow, val] : rep.A_exact)
        rep.A_part += val.to_double() * std::pow(rho, pow);

    if (phi_correction) {
        if (phi_correction->sym() != FieldOnHalfSpace::Sym::Radial)
            throw std::invalid_argument("mass_flux: phi must be radial class");
        const double area = sphere_area_pi(n - 1).to_double();
        // the |x|^{2-N} self-pairing cancels identically; only phi contributes
        auto f = [&](double th) {
            double r = rho * std::sin(th);
            double t = rho * std::cos(th);
            ProfileDerivs d = phi_correction->profile(r, t);
            double dphi_drho = (r * d.ur + t * d.ut) / rho;
            double v = std::pow(rho, 2 - N) * dphi_drho - (2 - N) * std::pow(rho, 1 - N) * d.u;
            return v * std::pow(std::sin(th), n - 1);
        };
        QuadResult q = adaptive(f, 0.0, 1.5707963267948966, tol);
        rep.G_part = 4.0 * (N - 1) / double(N - 2) * area * std::pow(rho, N - 1) * q.value;
    }
    rep.total = rep.G_part - rep.A_part;
    return rep;
}

// =========================================================================
// The P' <-> mass relation
// =========================================================================

struct MassRelation {
    // P'(G, rho) = pprime_slope * I(rho) + pprime_pi_coeff * |S^3| pi_ij,ij + o(1)
    ExactScalar pprime_slope;     // -(N-2)^2 / (8(N-1))
    ExactScalar pprime_pi_coeff;  // slope * ddII flux coefficient (N = 5), 0 for N = 4
    // m0 = mass_slope * lim P' + mass_pi_coeff * |S^3| pi_ij,ij
    ExactScalar mass_slope;
    ExactScalar mass_pi_coeff;
    double m0 = 0;
};

inline MassRelation p_prime_mass_relation(int N, double pi_second_trace,
                                          double P_prime_limit) {
    if (N != 4 && N != 5)
        throw std::invalid_argument("p_prime_mass_relation: N must be 4 or 5");
    MassRelation r;
    Rational slope = Rational(-(N - 2) * (N - 2), 8 * (N - 1));
    r.pprime_slope = ExactScalar(slope);
    if (N == 5)
        r.pprime_pi_coeff = mass_flux_ddii_coefficient(N).scaled(slope);
    r.mass_slope = ExactScalar(1 / slope);
    r.mass_pi_coeff = r.pprime_pi_coeff.scaled(-1 / slope);

    double S3 = sphere_area_pi(N - 2).to_double();
    r.m0 = r.mass_slope.to_double() * P_prime_limit +
           r.mass_pi_coeff.to_double() * S3 * pi_second_trace;
    return r;
}

}  // namespace yamabe
