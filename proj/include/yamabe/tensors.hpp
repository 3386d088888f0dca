#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "yamabe/exact.hpp"

namespace yamabe {

// =========================================================================
// Sphere moments
// =========================================================================

// Exact moment  int x^alpha dS  over the unit sphere S^{N-1} in R^N, or over
// the hemisphere x_N >= 0. Gamma-product formula; odd tangential powers give
// zero (odd x_N powers are allowed on the hemisphere).
inline PiValue moment_pi(const std::vector<int>& alpha, bool hemisphere, int N) {
    if (static_cast<int>(alpha.size()) != N)
        throw std::invalid_argument("moment: multi-index length must equal N");
    for (int a : alpha)
        if (a < 0) throw std::invalid_argument("moment: negative exponent");

    for (int a = 0; a < N - 1; ++a)
        if (alpha[a] % 2 == 1) return {};
    if (!hemisphere && alpha[N - 1] % 2 == 1) return {};

    int total = 0;
    Rational q = 1;
    int sqrt_pi = 0;
    for (int a = 0; a < N; ++a) {
        GammaHalf g = gamma_half(alpha[a] + 1);
        q *= g.q;
        sqrt_pi += g.sqrt_pi;
        total += alpha[a];
    }
    GammaHalf gs = gamma_half(total + N);
    q /= gs.q;
    sqrt_pi -= gs.sqrt_pi;
    if (sqrt_pi % 2 != 0) throw std::logic_error("moment: fractional pi power");
    if (!hemisphere) q *= 2;
    return {q, sqrt_pi / 2};
}

struct SphereMoment {
    std::vector<int> multi_index;
    bool hemisphere = false;
    PiValue value;
    // ExactScalar view, available while the pi power stays <= 1
    bool representable = false;
    ExactScalar exact;
    double approx = 0.0;
};

inline SphereMoment moment(const std::vector<int>& alpha, bool hemisphere, int N) {
    SphereMoment m;
    m.multi_index = alpha;
    m.hemisphere = hemisphere;
    m.value = moment_pi(alpha, hemisphere, N);
    m.approx = m.value.to_double();
    if (auto e = m.value.to_exact()) {
        m.exact = *e;
        m.representable = true;
    }
    return m;
}

// =========================================================================
// Trace-free symmetric 2-tensors
// =========================================================================

class TraceFreePi {
public:
    TraceFreePi() = default;

    TraceFreePi(int n, std::vector<Rational> entries) : n_(n), a_(std::move(entries)) {
        if (static_cast<int>(a_.size()) != n_ * n_)
            throw std::invalid_argument("TraceFreePi: wrong entry count");
        Rational tr = 0;
        for (int i = 0; i < n_; ++i) {
            tr += at(i, i);
            for (int j = i + 1; j < n_; ++j)
                if (at(i, j) != at(j, i))
                    throw std::invalid_argument("TraceFreePi: entries must be symmetric");
        }
        if (tr != 0) throw std::invalid_argument("TraceFreePi: trace must vanish");
    }

    static TraceFreePi diag(std::vector<Rational> d) {
        int n = static_cast<int>(d.size());
        std::vector<Rational> e(n * n, Rational(0));
        for (int i = 0; i < n; ++i) e[i * n + i] = d[i];
        return TraceFreePi(n, std::move(e));
    }

    static TraceFreePi zero(int n) {
        return TraceFreePi(n, std::vector<Rational>(n * n, Rational(0)));
    }

    int n() const { return n_; }
    const Rational& at(int i, int j) const { return a_[i * n_ + j]; }
    bool is_zero() const {
        for (const auto& v : a_)
            if (v != 0) return false;
        return true;
    }

    Rational norm_sq() const {  // h = delta in normal coordinates
        Rational s = 0;
        for (const auto& v : a_) s += v * v;
        return s;
    }

    Rational max_abs() const {
        Rational m = 0;
        for (const auto& v : a_) {
            Rational av = v < 0 ? -v : v;
            if (av > m) m = av;
        }
        return m;
    }

    double at_d(int i, int j) const { return to_double(at(i, j)); }

    // pi_ij x_i x_j for a tangential point
    double quadratic_form(const std::vector<double>& xbar) const {
        double s = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) s += at_d(i, j) * xbar[i] * xbar[j];
        return s;
    }

private:
    int n_ = 0;
    std::vector<Rational> a_;
};

// 2 / (n (n+2)): the trace-free quartic identity
//   pi_ij pi_kl  (1/|S^{n-1}|) int_{S^{n-1}} x_i x_j x_k x_l dS = [2/(n(n+2))] |pi|^2.
inline Rational quartic_angular_factor(int n) { return Rational(2, n * (n + 2)); }

inline Rational quartic_contraction(const TraceFreePi& pi) {
    if (pi.n() < 2) throw std::invalid_argument("quartic_contraction: n >= 2 required");
    return quartic_angular_factor(pi.n()) * pi.norm_sq();
}

// =========================================================================
// Metric jet (the polynomial A_ij(x) of the Fermi-coordinate expansion)
// =========================================================================

namespace detail {

template <class T>
struct TensorStore {
    std::vector<int> dims;
    std::vector<T> v;

    TensorStore() = default;
    explicit TensorStore(std::vector<int> d) : dims(std::move(d)) {
        std::size_t sz = 1;
        for (int x : dims) sz *= static_cast<std::size_t>(x);
        v.assign(sz, T(0));
    }
    template <class... I>
    T& operator()(I... idx) {
        std::size_t lin = 0;
        int pos = 0;
        ((lin = lin * dims[pos++] + static_cast<std::size_t>(idx)), ...);
        return v[lin];
    }
    template <class... I>
    const T& operator()(I... idx) const {
        return const_cast<TensorStore*>(this)->operator()(idx...);
    }
    bool empty() const { return v.empty(); }
};

}  // namespace detail

// Input tensors of the metric expansion at a fixed boundary point, all in
// normal/Fermi coordinates. Commas in the names below mean the derivative
// slots; the arrays are free inputs (integrability relations among them are
// the caller's business).
struct MetricJet {
    int n = 0;  // boundary dimension; ambient N = n+1

    detail::TensorStore<Rational> II;     // II_ij          (n,n)
    detail::TensorStore<Rational> dII;    // II_ij,k        (n,n,n)
    detail::TensorStore<Rational> ddII;   // II_ij,kl       (n,n,n,n)
    detail::TensorStore<Rational> Rh;     // R_ikjl[h]      (n,n,n,n)
    detail::TensorStore<Rational> dRh;    // R_ikjl,m[h]    (n,n,n,n,n)
    detail::TensorStore<Rational> RN;     // R_iNjN[g]      (n,n)
    detail::TensorStore<Rational> dRN;    // R_iNjN,k[g]    (n,n,n)
    detail::TensorStore<Rational> dRNN;   // R_iNjN,N[g]    (n,n)

    bool conformal_normalized = false;

    explicit MetricJet(int bdry_dim = 0) : n(bdry_dim) {
        II = detail::TensorStore<Rational>({n, n});
        dII = detail::TensorStore<Rational>({n, n, n});
        ddII = detail::TensorStore<Rational>({n, n, n, n});
        Rh = detail::TensorStore<Rational>({n, n, n, n});
        dRh = detail::TensorStore<Rational>({n, n, n, n, n});
        RN = detail::TensorStore<Rational>({n, n});
        dRN = detail::TensorStore<Rational>({n, n, n});
        dRNN = detail::TensorStore<Rational>({n, n});
    }

    // Opt-in index-symmetry validation (strict mode). Synthetic test inputs
    // are allowed to skip it.
    void validate_symmetries() const {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (II(i, j) != II(j, i)) throw std::invalid_argument("II not symmetric");
                if (RN(i, j) != RN(j, i)) throw std::invalid_argument("R_iNjN not symmetric");
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        const Rational& r = Rh(i, k, j, l);
                        if (r != -Rh(k, i, j, l) || r != -Rh(i, k, l, j) || r != Rh(j, l, i, k))
                            throw std::invalid_argument("R[h] lacks Riemann symmetries");
                    }
            }
        if (conformal_normalized) {
            Rational trII = 0;
            for (int i = 0; i < n; ++i) trII += II(i, i);
            if (trII != 0) throw std::invalid_argument("conformal normalization requires H = 0");
        }
    }
};

// One monomial of A_ij(x): coeff * x^alpha placed at entry (i,j).
struct JetMonomial {
    int i = 0, j = 0;
    Rational coeff;
    std::vector<int> alpha;  // length N = n+1; last slot is the x_N power
};

// Expands the displayed jet polynomial (degree <= 3; the quartic remainder is
// the expansion error, not data). Keeping it as monomials makes the flux
// integrals exact sphere-moment sums.
inline std::vector<JetMonomial> metric_jet_polynomial(const MetricJet& jet) {
    const int n = jet.n;
    const int N = n + 1;
    std::vector<JetMonomial> terms;
    auto add = [&](int i, int j, Rational c, std::vector<int> alpha) {
        if (c == 0) return;
        terms.push_back({i, j, std::move(c), std::move(alpha)});
    };
    auto e = [&](std::initializer_list<std::pair<int, int>> powers) {
        std::vector<int> a(N, 0);
        for (auto [idx, p] : powers) a[idx] += p;
        return a;
    };

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // -2 II_ij x_N
            add(i, j, -2 * jet.II(i, j), e({{n, 1}}));
            // (-R_iNjN + (II II)_ij) x_N^2
            Rational iisq = 0;
            for (int s = 0; s < n; ++s) iisq += jet.II(i, s) * jet.II(s, j);
            add(i, j, -jet.RN(i, j) + iisq, e({{n, 2}}));
            // (1/6)(-2 R_iNjN,N + 8 Sym_ij(II_is R_jNsN)) x_N^3
            Rational sym = 0;
            for (int s = 0; s < n; ++s)
                sym += jet.II(i, s) * jet.RN(j, s) + jet.II(j, s) * jet.RN(i, s);
            add(i, j, Rational(1, 6) * (-2 * jet.dRNN(i, j) + 4 * sym), e({{n, 3}}));

            for (int k = 0; k < n; ++k) {
                // -2 II_ij,k x_k x_N
                add(i, j, -2 * jet.dII(i, j, k), e({{k, 1}, {n, 1}}));
                // (-R_iNjN,k + 2 Sym_ij(II_is,k II_sj)) x_k x_N^2
                Rational sym2 = 0;
                for (int s = 0; s < n; ++s)
                    sym2 += jet.dII(i, s, k) * jet.II(s, j) + jet.dII(j, s, k) * jet.II(s, i);
                add(i, j, -jet.dRN(i, j, k) + sym2, e({{k, 1}, {n, 2}}));

                for (int l = 0; l < n; ++l) {
                    // -(1/3) R_ikjl x_k x_l
                    add(i, j, Rational(-1, 3) * jet.Rh(i, k, j, l), e({{k, 1}, {l, 1}}));
                    // (-II_ij,kl + (2/3) Sym_ij(R_iksl II_sj)) x_k x_l x_N
                    Rational sym3 = 0;
                    for (int s = 0; s < n; ++s)
                        sym3 += jet.Rh(i, k, s, l) * jet.II(s, j) + jet.Rh(j, k, s, l) * jet.II(s, i);
                    add(i, j, -jet.ddII(i, j, k, l) + Rational(1, 3) * sym3,
                        e({{k, 1}, {l, 1}, {n, 1}}));
                    for (int m = 0; m < n; ++m)
                        // -(1/6) R_ikjl,m x_k x_l x_m
                        add(i, j, Rational(-1, 6) * jet.dRh(i, k, j, l, m),
                            e({{k, 1}, {l, 1}, {m, 1}}));
                }
            }
        }
    return terms;
}

// Evaluates A(x) as a dense symmetric N x N matrix (N-row and N-column are
// identically zero). The jet's validity radius is not enforced.
inline std::vector<std::vector<double>> metric_jet_A(const MetricJet& jet,
                                                     const std::vector<double>& x) {
    const int n = jet.n;
    const int N = n + 1;
    if (static_cast<int>(x.size()) != N)
        throw std::invalid_argument("metric_jet_A: point has wrong dimension");
    std::vector<std::vector<double>> A(N, std::vector<double>(N, 0.0));
    for (const JetMonomial& t : metric_jet_polynomial(jet)) {
        double mono = to_double(t.coeff);
        for (int a = 0; a < N; ++a)
            for (int p = 0; p < t.alpha[a]; ++p) mono *= x[a];
        A[t.i][t.j] += mono;
    }
    // enforce exact symmetry of the output representation
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            double s = 0.5 * (A[i][j] + A[j][i]);
            A[i][j] = A[j][i] = s;
        }
    return A;
}

}  // namespace yamabe
