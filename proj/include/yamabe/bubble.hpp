#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "yamabe/profiles.hpp"

namespace yamabe {

// The standard bubble
//   W_{lambda,xi}(x) = lambda^{(N-2)/2} / (|xbar - xi|^2 + (x_N + lambda)^2)^{(N-2)/2}
// on the closed half-space x_N >= 0, together with its first two derivatives,
// the kernel fields Z^0..Z^n of the linearized boundary operator, and residual
// checks of the defining problem
//   -Delta W = 0,   -dW/dx_N = (N-2) W^{N/(N-2)}  on x_N = 0.
//
// All derivatives are closed forms (they feed exact coefficient reductions);
// finite differences appear only as test oracles.

struct BubbleParams {
    int N = 5;
    double lambda = 1.0;
    std::vector<double> xi;  // in R^n, n = N-1; empty means 0

    BubbleParams() = default;
    BubbleParams(int dim, double lam = 1.0, std::vector<double> center = {})
        : N(dim), lambda(lam), xi(std::move(center)) {
        if (N < 3) throw std::invalid_argument("bubble needs N >= 3");
        if (lambda <= 0) throw std::invalid_argument("bubble needs lambda > 0");
        if (xi.empty()) xi.assign(N - 1, 0.0);
        if (static_cast<int>(xi.size()) != N - 1)
            throw std::invalid_argument("bubble center must lie in R^{N-1}");
    }

    double m() const { return 0.5 * (N - 2); }
};

namespace detail {

// squared shifted radius S = |xbar - xi|^2 + (x_N + lambda)^2 and the shifted
// coordinates y_a (tangential: x_a - xi_a; vertical: x_N + lambda)
inline double shifted(const BubbleParams& p, const std::vector<double>& x,
                      std::vector<double>& y) {
    const int N = p.N;
    y.resize(N);
    double S = 0;
    for (int a = 0; a < N - 1; ++a) {
        y[a] = x[a] - p.xi[a];
        S += y[a] * y[a];
    }
    y[N - 1] = x[N - 1] + p.lambda;
    S += y[N - 1] * y[N - 1];
    return S;
}

}  // namespace detail

// deriv is a multi-index over the N coordinates with |deriv| <= 2.
inline double eval_W(const BubbleParams& p, const std::vector<double>& x,
                     const std::vector<int>& deriv = {}) {
    const int N = p.N;
    if (static_cast<int>(x.size()) != N) throw std::invalid_argument("eval_W: bad point");
    std::vector<double> y;
    const double S = detail::shifted(p, x, y);
    const double m = p.m();
    const double lm = std::pow(p.lambda, m);

    int order = 0;
    int da = -1, db = -1;
    if (!deriv.empty()) {
        if (static_cast<int>(deriv.size()) != N)
            throw std::invalid_argument("eval_W: deriv multi-index length must be N");
        for (int a = 0; a < N; ++a) {
            if (deriv[a] < 0) throw std::invalid_argument("eval_W: negative derivative order");
            for (int c = 0; c < deriv[a]; ++c) {
                if (order == 0) da = a;
                else if (order == 1) db = a;
                ++order;
            }
        }
        if (order > 2) throw std::invalid_argument("eval_W: derivatives up to order 2 only");
    }

    if (order == 0) return lm * std::pow(S, -m);
    if (order == 1) return lm * (-2.0 * m) * y[da] * std::pow(S, -m - 1.0);
    double v = 4.0 * m * (m + 1.0) * y[da] * y[db] * std::pow(S, -m - 2.0);
    if (da == db) v += -2.0 * m * std::pow(S, -m - 1.0);
    return lm * v;
}

// Boundary trace w(xbar) = W(xbar, 0) and the nonlinearity weight
// w^{2/(N-2)} = lambda / (|xbar - xi|^2 + lambda^2).
inline double eval_w(const BubbleParams& p, const std::vector<double>& xbar) {
    std::vector<double> x = xbar;
    x.push_back(0.0);
    return eval_W(p, x);
}

inline double w_pow_2_over_Nm2(const BubbleParams& p, const std::vector<double>& xbar) {
    double S0 = p.lambda * p.lambda;
    for (int i = 0; i < p.N - 1; ++i) {
        double d = xbar[i] - p.xi[i];
        S0 += d * d;
    }
    return p.lambda / S0;
}

// Kernel fields of the linearized problem: Z^0 = -dW/dlambda, Z^i = dW/dxi_i.
inline double eval_Z(const BubbleParams& p, int index, const std::vector<double>& x) {
    const int N = p.N;
    if (index < 0 || index > N - 1) throw std::invalid_argument("eval_Z: index in 0..n");
    std::vector<double> y;
    const double S = detail::shifted(p, x, y);
    const double m = p.m();
    if (index == 0) {
        double rho2 = 0;
        for (int a = 0; a < N - 1; ++a) rho2 += y[a] * y[a];
        rho2 += x[N - 1] * x[N - 1];
        return m * std::pow(p.lambda, m - 1.0) * (p.lambda * p.lambda - rho2) *
               std::pow(S, -m - 1.0);
    }
    return (N - 2) * std::pow(p.lambda, m) * y[index - 1] * std::pow(S, -m - 1.0);
}

// Vertical derivative of the kernel fields (closed form; used by the boundary
// kernel identity -d_N Z = N w^{2/(N-2)} Z).
inline double eval_Z_dN(const BubbleParams& p, int index, const std::vector<double>& x) {
    const int N = p.N;
    std::vector<double> y;
    const double S = detail::shifted(p, x, y);
    const double m = p.m();
    const double yN = y[N - 1];
    if (index == 0) {
        double rho2 = 0;
        for (int a = 0; a < N - 1; ++a) rho2 += y[a] * y[a];
        rho2 += x[N - 1] * x[N - 1];
        return m * std::pow(p.lambda, m - 1.0) *
               (-2.0 * x[N - 1] * std::pow(S, -m - 1.0) -
                2.0 * (m + 1.0) * (p.lambda * p.lambda - rho2) * yN * std::pow(S, -m - 2.0));
    }
    return -double(N) * (N - 2) * std::pow(p.lambda, m) * y[index - 1] * yN *
           std::pow(S, -m - 2.0);
}

struct BubbleResidual {
    double interior = 0.0;  // finite-difference Laplacian (discretization error only)
    double boundary = 0.0;  // -d_N W - (N-2) W^{N/(N-2)} at x_N = 0, closed form
};

inline double interior_residual_fd(const BubbleParams& p, const std::vector<double>& x,
                                   double h = 1e-3) {
    const int N = p.N;
    double lap = 0.0;
    double w0 = eval_W(p, x);
    std::vector<double> xp = x;
    for (int a = 0; a < N; ++a) {
        xp[a] = x[a] + h;
        double up = eval_W(p, xp);
        xp[a] = x[a] - h;
        double um = eval_W(p, xp);
        xp[a] = x[a];
        lap += (up - 2.0 * w0 + um) / (h * h);
    }
    return lap;
}

inline BubbleResidual residual_bubble(const BubbleParams& p, const std::vector<double>& x,
                                      double h = 1e-3) {
    const int N = p.N;
    BubbleResidual r;
    r.interior = interior_residual_fd(p, x, h);

    std::vector<double> xb(x.begin(), x.end() - 1);
    std::vector<double> x0 = x;
    x0[N - 1] = 0.0;
    std::vector<int> dN(N, 0);
    dN[N - 1] = 1;
    double dWdN = eval_W(p, x0, dN);
    double w = eval_w(p, xb);
    r.boundary = -dWdN - (N - 2) * std::pow(w, double(N) / (N - 2));
    return r;
}

// Closed-form Laplacian accumulated termwise (cancels analytically; the
// return value is pure floating-point cancellation noise).
inline double harmonicity_defect(const BubbleParams& p, const std::vector<double>& x) {
    double lap = 0.0;
    std::vector<int> d(p.N, 0);
    for (int a = 0; a < p.N; ++a) {
        d[a] = 2;
        lap += eval_W(p, x, d);
        d[a] = 0;
    }
    return lap;
}

// (r,t)-profile of W_{1,0} (the normalization every downstream module uses).
inline Profile bubble_profile(int N) {
    return Profile({ProfileTerm{1.0, 0, 0.0, 0.5 * (N - 2), false}});
}

}  // namespace yamabe
