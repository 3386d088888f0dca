#pragma once

#include <cmath>
#include <vector>

namespace yamabe {

// Closed-form (r,t)-profiles built from the shifted kernel
//   sigma(r,t) = r^2 + (t+1)^2.
// Every explicit function in the analysis (bubble profile, correction terms,
// the appendix chain, manufactured solutions) is a short sum of
//   c * (t+s)^e * sigma^{-m},  e in {0,1},
// plus an occasional c * log(sigma). Derivatives are hand-derived once here;
// the modules downstream need the symbolic derivative structure, not stencils.

struct ProfileDerivs {
    double u = 0, ur = 0, ut = 0, urr = 0, utt = 0, urt = 0;

    ProfileDerivs& operator+=(const ProfileDerivs& o) {
        u += o.u;
        ur += o.ur;
        ut += o.ut;
        urr += o.urr;
        utt += o.utt;
        urt += o.urt;
        return *this;
    }
};

struct ProfileTerm {
    double c = 0;       // coefficient
    int e = 0;          // power of (t + shift), 0 or 1
    double shift = 0;   // s in (t + s)
    double m = 0;       // sigma exponent
    bool log_term = false;  // c * log(sigma) instead of a power

    ProfileDerivs eval(double r, double t) const {
        ProfileDerivs d;
        const double tp1 = t + 1.0;
        const double sg = r * r + tp1 * tp1;
        if (log_term) {
            d.u = c * std::log(sg);
            d.ur = c * 2.0 * r / sg;
            d.ut = c * 2.0 * tp1 / sg;
            d.urr = c * (2.0 / sg - 4.0 * r * r / (sg * sg));
            d.utt = c * (2.0 / sg - 4.0 * tp1 * tp1 / (sg * sg));
            d.urt = c * (-4.0 * r * tp1 / (sg * sg));
            return d;
        }
        const double sm = std::pow(sg, -m);
        const double sm1 = sm / sg;
        const double sm2 = sm1 / sg;
        const double vr = -2.0 * m * r * sm1;
        const double vt = -2.0 * m * tp1 * sm1;
        const double vrr = -2.0 * m * sm1 + 4.0 * m * (m + 1.0) * r * r * sm2;
        const double vtt = -2.0 * m * sm1 + 4.0 * m * (m + 1.0) * tp1 * tp1 * sm2;
        const double vrt = 4.0 * m * (m + 1.0) * r * tp1 * sm2;
        if (e == 0) {
            d.u = c * sm;
            d.ur = c * vr;
            d.ut = c * vt;
            d.urr = c * vrr;
            d.utt = c * vtt;
            d.urt = c * vrt;
        } else {
            const double ts = t + shift;
            d.u = c * ts * sm;
            d.ur = c * ts * vr;
            d.ut = c * (sm + ts * vt);
            d.urr = c * ts * vrr;
            d.utt = c * (2.0 * vt + ts * vtt);
            d.urt = c * (vr + ts * vrt);
        }
        return d;
    }
};

class Profile {
public:
    Profile() = default;
    explicit Profile(std::vector<ProfileTerm> terms) : terms_(std::move(terms)) {}

    void add(ProfileTerm t) { terms_.push_back(t); }

    ProfileDerivs eval(double r, double t) const {
        ProfileDerivs d;
        for (const auto& term : terms_) d += term.eval(r, t);
        return d;
    }

    double value(double r, double t) const { return eval(r, t).u; }

    // Laplacian of the plain profile u(|xbar|, x_N) in R^N: u_rr + ((N-2)/r) u_r + u_tt.
    double laplacian_plain(double r, double t, int N) const {
        ProfileDerivs d = eval(r, t);
        double rad = (r > 0) ? (N - 2) * d.ur / r : (N - 2) * d.urr;  // ur/r -> urr at r=0
        return d.urr + rad + d.utt;
    }

    // Laplacian of h * u for a trace-free quadratic h = pi_ij x_i x_j:
    // Delta(h u) = h [u_rr + ((n+3)/r) u_r + u_tt]  with n = N-1.
    double laplacian_h_sector(double r, double t, int N) const {
        ProfileDerivs d = eval(r, t);
        int n = N - 1;
        double rad = (r > 0) ? (n + 3) * d.ur / r : (n + 3) * d.urr;
        return d.urr + rad + d.utt;
    }

    bool empty() const { return terms_.empty(); }

private:
    std::vector<ProfileTerm> terms_;
};

}  // namespace yamabe
