#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

#include "yamabe/exact.hpp"

namespace yamabe {

// =========================================================================
// Closed forms
// =========================================================================

// Descriptor for  int_0^upper  t^p / (t^2+1)^q  dt   (q may be half-integer).
struct RadialIntegral {
    int p = 0;
    Rational q;  // 2q integral
    double upper = std::numeric_limits<double>::infinity();

    bool convergent_at_infinity() const { return 2 * q - p > 1; }
    bool convergent_at_zero() const { return p > -1; }
    bool log_divergent() const { return 2 * q - p == 1; }
    double integrand(double t) const {
        return std::pow(t, p) * std::pow(t * t + 1.0, -yamabe::to_double(q));
    }
};

// Descriptor for  int_0^upper  t^a / (t+1)^b  dt.
struct AxialIntegral {
    int a = 0;
    int b = 0;
    double upper = std::numeric_limits<double>::infinity();

    bool convergent_at_infinity() const { return b - a > 1; }
    bool log_divergent() const { return b - a == 1; }
    double integrand(double t) const { return std::pow(t, a) * std::pow(t + 1.0, -double(b)); }
};

// Exact value of int_0^inf t^p (t^2+1)^{-q} dt = (1/2) B((p+1)/2, q-(p+1)/2),
// reduced through Gamma(k/2). Lands in Q or Q*pi depending on parity.
inline ExactScalar radial_closed(int p, const Rational& q) {
    Rational two_q = 2 * q;
    if (denominator(two_q) != 1)
        throw std::invalid_argument("radial_closed: 2q must be an integer");
    if (p <= -1) throw std::invalid_argument("radial_closed: divergent at 0 (p <= -1)");
    if (!(two_q - p > 1))
        throw std::invalid_argument("radial_closed: divergent at infinity (2q - p <= 1)");

    int ka = p + 1;                                       // Gamma(ka/2)
    int kb = static_cast<int>(two_q) - (p + 1);           // Gamma(kb/2)
    int kc = static_cast<int>(two_q);                     // Gamma(kc/2)
    GammaHalf ga = gamma_half(ka), gb = gamma_half(kb), gc = gamma_half(kc);
    Rational val = ga.q * gb.q / gc.q / 2;
    int sp = ga.sqrt_pi + gb.sqrt_pi - gc.sqrt_pi;
    switch (sp) {
        case 0: return ExactScalar(val);
        case 2: return ExactScalar::of_pi(val);
        default:
            throw std::logic_error("radial_closed: stray sqrt(pi)");
    }
}

inline ExactScalar radial_closed(const RadialIntegral& r) { return radial_closed(r.p, r.q); }

// Exact log coefficient for the borderline case 2q - p = 1:
// int_0^R t^p (t^2+1)^{-q} dt = log R + O(1).
inline ExactScalar radial_log_coefficient(int p, const Rational& q) {
    if (2 * q - p != 1) throw std::invalid_argument("radial_log_coefficient: 2q - p must be 1");
    return ExactScalar(Rational(1));
}

// Exact value of int_0^inf t^a (t+1)^{-b} dt by the binomial telescope when
// b - a > 1; log-divergent case b - a = 1 returns the exact log coefficient.
inline std::variant<ExactScalar, AsymptoticValue> axial_closed(int a, int b) {
    if (a < 0) throw std::invalid_argument("axial_closed: a must be >= 0");
    if (b - a < 1)
        throw std::invalid_argument("axial_closed: polynomially divergent at infinity (b - a < 1)");
    if (b - a == 1) {
        // (u-1)^a u^{-b}: the u^{-1} term carries binomial(a,a) = 1.
        return AsymptoticValue(ExactScalar(Rational(1)));
    }
    // substitute u = t+1: sum_k C(a,k) (-1)^{a-k} int_1^inf u^{k-b} du
    Rational v = 0;
    for (int k = 0; k <= a; ++k) {
        Rational term = Rational(binomial(a, k)) / Rational(b - k - 1);
        if ((a - k) % 2 == 1) term = -term;
        v += term;
    }
    return ExactScalar(v);
}

inline ExactScalar axial_closed_value(int a, int b) {
    return std::get<ExactScalar>(axial_closed(a, b));
}

inline ExactScalar axial_log_coefficient(int a, int b) {
    return std::get<AsymptoticValue>(axial_closed(a, b)).log_coeff;
}

// =========================================================================
// Adaptive quadrature (the numerical oracle for every closed form above)
// =========================================================================

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    int evaluations = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
inline const double kKronrodNodes[8] = {
    0.0,
    0.2077849550078985, 0.4058451513773972, 0.5860872354676911, 0.7415311855993945,
    0.8648644233597691, 0.9491079123427585, 0.9914553711208126};
inline const double kKronrodWeights[8] = {
    0.2094821410847278,
    0.2044329400752989, 0.1903505780647854, 0.1690047266392679, 0.1406532597155259,
    0.1047900103222502, 0.0630920926299786, 0.0229353220105292};
inline const double kGaussWeights[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767, 0.1294849661688697};

template <class F>
inline void gk15(const F& f, double lo, double hi, double& val, double& err) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double f0 = f(c);
    double kron = kKronrodWeights[0] * f0;
    double gauss = kGaussWeights[0] * f0;
    for (int i = 1; i < 8; ++i) {
        double fp = f(c + h * kKronrodNodes[i]);
        double fm = f(c - h * kKronrodNodes[i]);
        kron += kKronrodWeights[i] * (fp + fm);
        if (i % 2 == 0) gauss += kGaussWeights[i / 2] * (fp + fm);
    }
    val = kron * h;
    double diff = std::fabs(kron - gauss) * std::fabs(h);
    err = std::pow(200.0 * diff, 1.5);
    if (err > diff) err = diff;  // keep the conservative one on coarse panels
    err = std::max(err, std::fabs(val) * 1e-15);
}

}  // namespace detail

// Adaptive bisection on a finite interval; mixed absolute+relative tolerance.
template <class F>
QuadResult adaptive(const F& f, double lo, double hi, double tol = 1e-10,
                    int max_intervals = 20000) {
    struct Seg {
        double lo, hi, val, err;
    };
    QuadResult out;
    if (lo == hi) return out;

    std::vector<Seg> heap;
    double v, e;
    detail::gk15(f, lo, hi, v, e);
    out.evaluations = 15;
    heap.push_back({lo, hi, v, e});
    double total = v, toterr = e;

    auto worst = [&heap]() {
        std::size_t w = 0;
        for (std::size_t i = 1; i < heap.size(); ++i)
            if (heap[i].err > heap[w].err) w = i;
        return w;
    };

    while (toterr > tol && toterr > 1e-14 * std::fabs(total)) {
        if (static_cast<int>(heap.size()) >= max_intervals) {
            out.converged = false;
            break;
        }
        std::size_t w = worst();
        Seg s = heap[w];
        heap[w] = heap.back();
        heap.pop_back();
        double mid = 0.5 * (s.lo + s.hi);
        if (mid == s.lo || mid == s.hi) {
            // interval exhausted at machine precision
            heap.push_back(s);
            break;
        }
        Seg a{s.lo, mid, 0, 0}, b{mid, s.hi, 0, 0};
        detail::gk15(f, a.lo, a.hi, a.val, a.err);
        detail::gk15(f, b.lo, b.hi, b.val, b.err);
        out.evaluations += 30;
        total += a.val + b.val - s.val;
        toterr += a.err + b.err - s.err;
        heap.push_back(a);
        heap.push_back(b);
    }
    out.value = 0.0;
    out.error = 0.0;
    // compensated sum, smallest first, for reproducibility
    for (const Seg& s : heap) {
        out.value += s.val;
        out.error += s.err;
    }
    return out;
}

// [0, infinity) via t = tan(theta); the integrands here all have algebraic
// tails, which the substitution compactifies cleanly.
template <class F>
QuadResult adaptive_semi_infinite(const F& f, double tol = 1e-10) {
    auto g = [&f](double th) {
        double t = std::tan(th);
        double sec = 1.0 / std::cos(th);
        return f(t) * sec * sec;
    };
    return adaptive(g, 0.0, 1.5707963267948966 - 1e-12, tol);
}

// Iterated 2-D adaptive over [ax,bx] x [ay,by] (y outer, x inner).
template <class F>
QuadResult adaptive_2d(const F& f, double ax, double bx, double ay, double by,
                       double tol = 1e-9) {
    int inner_evals = 0;
    bool inner_ok = true;
    auto outer = [&](double y) {
        auto inner = [&](double x) { return f(x, y); };
        QuadResult r = adaptive(inner, ax, bx, tol * 0.05);
        inner_evals += r.evaluations;
        inner_ok = inner_ok && r.converged;
        return r.value;
    };
    QuadResult r = adaptive(outer, ay, by, tol);
    r.evaluations += inner_evals;
    r.converged = r.converged && inner_ok;
    return r;
}

// =========================================================================
// Log-cutoff fitting: I(R) ~ c_log log R + c0 (+ optional c1/R term)
// =========================================================================

struct LogFit {
    double c_log = 0.0;
    double c0 = 0.0;
    double residual = 0.0;  // rms of the fit residuals
    bool ok = true;
};

inline std::vector<double> default_cutoffs() { return {1e2, 1e3, 1e4, 1e5}; }

// Fits cumulative integrals of f over [0, R_k]. The cutoff list controls the
// achievable slope accuracy: model mismatch decays like 1/R, so the smallest
// cutoff bounds the bias. Enabling the 1/R basis removes the leading bias.
template <class F>
LogFit log_cutoff_fit(const F& f, std::vector<double> cutoffs = default_cutoffs(),
                      bool with_inverse_term = false, double quad_tol = 1e-12,
                      double residual_threshold = 1e-2) {
    if (cutoffs.size() < 3) throw std::invalid_argument("log_cutoff_fit: need >= 3 cutoffs");
    std::sort(cutoffs.begin(), cutoffs.end());

    std::vector<double> I(cutoffs.size());
    double acc = 0.0, prev = 0.0;
    for (std::size_t k = 0; k < cutoffs.size(); ++k) {
        QuadResult r = adaptive([&f](double t) { return f(t); }, prev, cutoffs[k], quad_tol);
        acc += r.value;
        I[k] = acc;
        prev = cutoffs[k];
    }

    // least squares on basis {log R, 1, [1/R]}
    int m = with_inverse_term ? 3 : 2;
    int npts = static_cast<int>(cutoffs.size());
    double ata[3][3] = {};
    double atb[3] = {};
    for (int k = 0; k < npts; ++k) {
        double row[3] = {std::log(cutoffs[k]), 1.0, 1.0 / cutoffs[k]};
        for (int i = 0; i < m; ++i) {
            atb[i] += row[i] * I[k];
            for (int j = 0; j < m; ++j) ata[i][j] += row[i] * row[j];
        }
    }
    // solve the small SPD system by Gaussian elimination
    double A[3][4];
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) A[i][j] = ata[i][j];
        A[i][m] = atb[i];
    }
    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int r2 = c + 1; r2 < m; ++r2)
            if (std::fabs(A[r2][c]) > std::fabs(A[piv][c])) piv = r2;
        for (int j = 0; j <= m; ++j) std::swap(A[c][j], A[piv][j]);
        for (int r2 = 0; r2 < m; ++r2) {
            if (r2 == c) continue;
            double fscale = A[r2][c] / A[c][c];
            for (int j = c; j <= m; ++j) A[r2][j] -= fscale * A[c][j];
        }
    }
    LogFit fit;
    fit.c_log = A[0][m] / A[0][0];
    fit.c0 = A[1][m] / A[1][1];

    double ss = 0.0;
    for (int k = 0; k < npts; ++k) {
        double model = fit.c_log * std::log(cutoffs[k]) + fit.c0;
        if (with_inverse_term) model += (A[2][m] / A[2][2]) / cutoffs[k];
        ss += (I[k] - model) * (I[k] - model);
    }
    fit.residual = std::sqrt(ss / npts);
    double scale = std::max(1.0, std::fabs(fit.c_log));
    fit.ok = fit.residual <= residual_threshold * scale;
    return fit;
}

}  // namespace yamabe
