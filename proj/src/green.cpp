#include "skewlab/green.hpp"

#include <algorithm>
#include <cmath>

namespace skewlab {

namespace {

// Once |w| exceeds this, one more degree-d step stays inside double range.
double big_cutoff(int d) { return std::pow(10.0, 250.0 / d); }

double pow_di(int d, int n) { return std::pow(double(d), double(-n)); }

}  // namespace

GreenEstimate green1d(const Polynomial1D& P, cplx w, const GreenOptions& opt) {
    const int d = P.degree();
    if (d < 2) throw std::invalid_argument("green1d needs degree >= 2");
    const double lead = std::abs(P.leading());
    const double S = P.abs_coeff_sum(1.0, d);  // sum_{j<d}|a_j|
    const double R = std::max(10.0, (S + 2.0) / lead);
    const double BIG = big_cutoff(d);
    const double log_lead = std::log(lead);

    GreenEstimate est;
    cplx v = w;
    int n = 0;
    while (n < opt.n_max && finite(v) && std::abs(v) <= R) {
        v = P.eval(v);
        ++n;
    }
    if (!finite(v) || std::abs(v) > R) {
        // certified escape; refine until the telescoping tail is small
        est.escaped = true;
        double av = finite(v) ? std::abs(v) : BIG;
        double eps = S / (lead * av);
        int extra = 0;
        while (av < BIG && extra < 300) {
            double err = pow_di(d, n) * (2.0 * eps) / (d - 1);
            if (err < 0.5 * opt.tol) break;
            v = P.eval(v);
            ++n;
            ++extra;
            if (!finite(v)) break;
            av = std::abs(v);
            eps = S / (lead * av);
        }
        double dn = pow_di(d, n);
        est.value = dn * (std::log(av) + log_lead / (d - 1));
        est.depth = n;
        est.error_bound =
            dn * (2.0 * eps) / (d - 1) + 1e-13 * (std::abs(est.value) + 1.0);
        return est;
    }
    // bounded through n_max
    double M1 = lead * std::pow(R, d) + S * std::pow(R, d - 1);
    double BG = std::log(M1) + std::abs(log_lead) / (d - 1) + 1.0;
    est.value = 0.0;
    est.depth = opt.n_max;
    est.error_bound = pow_di(d, opt.n_max) * BG;
    est.escaped = false;
    return est;
}

namespace {

// Constants for the vertical-escape persistence certificate.
struct VertConsts {
    double lead;     // |a_d|
    int d;
    double Sq1;      // bound of the lower q coefficients at |z| = 1
    int g;           // max z-degree of the lower coefficients
    double Cp;       // |p| growth factor: |p(z)| <= Cp max(1,|z|)^d
    double kappa;    // invariant: |w| >= (kappa max(1,|z|))^2 persists
    double Rp;       // base escape radius
    double leadp;

    double Sz(const FiberPolynomial& q, double zr) const {
        return q.lower_coeff_bound(zr);
    }
    double Rq(const FiberPolynomial& q, double zr) const {
        return std::max(10.0, (Sz(q, zr) + 2.0) / lead);
    }
};

VertConsts make_consts(const SkewProduct& f) {
    VertConsts k;
    k.lead = std::abs(f.q.leading());
    k.leadp = std::abs(f.p.leading());
    k.d = f.d;
    k.Sq1 = f.q.lower_coeff_bound(1.0);
    k.g = f.q.max_zdegree();
    k.Cp = f.p.abs_coeff_sum(1.0);  // |p(z)| <= Cp max(1,|z|)^d
    double c1 = 4.0 * (k.Sq1 + 2.0) / k.lead;
    double a = std::pow((4.0 / 3.0) * k.Cp * k.Cp / k.lead, 1.0 / (2.0 * k.d - 2.0));
    double b = std::pow(std::max(1.0, c1 * std::pow(k.Cp, k.g) / (0.75 * k.lead)),
                        1.0 / (2.0 * k.d));
    k.kappa = std::max({2.0, a, b});
    {
        Polynomial1D pd = f.p;
        k.Rp = std::max(10.0, (pd.abs_coeff_sum(1.0, f.d) + 2.0) / k.leadp);
    }
    return k;
}

// Certified vertical potential along the base orbit of z.
GreenEstimate vertical_green(const SkewProduct& f, cplx z, cplx w,
                             const GreenOptions& opt, const VertConsts& K,
                             const GreenEstimate* base_est) {
    const int d = f.d;
    const double BIG = big_cutoff(d);
    const double log_lead = std::log(K.lead);
    GreenEstimate est;

    cplx zc = z, wc = w;
    int n = 0;
    auto fire_test = [&](cplx zz, cplx ww) {
        double aw = std::abs(ww);
        if (!(aw > 40.0)) return false;  // Rq >= 10 always
        return aw > 4.0 * K.Rq(f.q, std::abs(zz));
    };
    double zmax = std::abs(z);
    while (n < opt.n_max && finite(wc) && finite(zc) && !fire_test(zc, wc)) {
        cplx wn = f.q.eval(zc, wc);
        zc = f.p.eval(zc);
        wc = wn;
        ++n;
        zmax = std::max(zmax, std::abs(zc));
    }
    if (finite(wc) && finite(zc) && !fire_test(zc, wc)) {
        // no vertical escape found; bounded fiber orbit through n_max
        double Rb = K.Rq(f.q, std::min(zmax, K.Rp) + 1.0);
        double M1 = K.lead * std::pow(4 * Rb, d) * 2.0;
        double BG = std::log(M1) + std::abs(log_lead) / (d - 1) + 1.0;
        est.value = 0.0;
        est.depth = n;
        est.escaped = false;
        est.error_bound = pow_di(d, n) * BG;
        if (base_est && base_est->escaped) {
            // w may still track the base (G_vert <= G_p); widen accordingly
            est.error_bound =
                std::max(est.error_bound, base_est->value + base_est->error_bound);
        }
        return est;
    }
    // refinement with pointwise checks
    est.escaped = true;
    bool checks_ok = true;
    double av = finite(wc) ? std::abs(wc) : BIG;
    double az = finite(zc) ? std::abs(zc) : 1e300;
    double eps = K.Sz(f.q, az) / (K.lead * av);
    int extra = 0;
    while (av < BIG && extra < 300 && checks_ok) {
        double err = pow_di(d, n) * (2.0 * eps) / (d - 1);
        if (err < 0.5 * opt.tol) break;
        cplx wn = f.q.eval(zc, wc);
        zc = f.p.eval(zc);
        wc = wn;
        ++n;
        ++extra;
        if (!finite(wc)) {
            av = BIG;
            break;
        }
        av = std::abs(wc);
        az = finite(zc) ? std::abs(zc) : 1e300;
        eps = K.Sz(f.q, az) / (K.lead * av);
        if (eps > 0.25 || !fire_test(zc, wc)) checks_ok = false;
    }
    double dn = pow_di(d, n);
    est.value = dn * (std::log(av) + log_lead / (d - 1));
    est.depth = n;
    // persistence: either the dominance invariant holds at the end, or the
    // run is flagged with a wide (but still bracketing) tail term
    double invariant = std::pow(K.kappa * std::max(1.0, az), 2.0);
    bool persistent = checks_ok && (av >= invariant) && av >= 100.0;
    if (persistent) {
        est.error_bound = dn * (4.0 * eps) / (d - 1) + 1e-13 * (std::abs(est.value) + 1.0);
    } else {
        est.error_bound = dn * 0.6 / (d - 1) + 1e-13 * (std::abs(est.value) + 1.0);
    }
    return est;
}

}  // namespace

GreenPair green_pair(const SkewProduct& f, const Point& x, const GreenOptions& opt) {
    VertConsts K = make_consts(f);
    GreenPair gp;
    gp.base = green1d(f.p, x.z, opt);
    gp.vertical = vertical_green(f, x.z, x.w, opt, K, &gp.base);
    const GreenEstimate& a = gp.base;
    const GreenEstimate& b = gp.vertical;
    GreenEstimate c;
    c.escaped = a.escaped || b.escaped;
    if (a.value >= b.value) {
        c.value = a.value;
        c.depth = a.depth;
    } else {
        c.value = b.value;
        c.depth = b.depth;
    }
    // max of two bracketed values deviates by at most the larger bracket
    c.error_bound = std::max(a.error_bound, b.error_bound);
    gp.combined = c;
    return gp;
}

GreenEstimate green_value(const SkewProduct& f, const Point& x, const GreenOptions& opt) {
    return green_pair(f, x, opt).combined;
}

GreenEstimate fiber_green(const SkewProduct& f, cplx z, cplx w, const GreenOptions& opt) {
    VertConsts K = make_consts(f);
    GreenEstimate base = green1d(f.p, z, opt);
    return vertical_green(f, z, w, opt, K, &base);
}

GreenEstimate fiber_green_with_base(const SkewProduct& f, cplx z, cplx w,
                                    const GreenEstimate& base,
                                    const GreenOptions& opt) {
    VertConsts K = make_consts(f);
    return vertical_green(f, z, w, opt, K, &base);
}

Polynomial1D param_map(cplx c, cplx a, int d) {
    std::vector<cplx> coeffs(d + 1, cplx(0.0));
    coeffs[0] = std::pow(a, d);
    coeffs[d - 1] = -c / double(d - 1);
    coeffs[d] = cplx(1.0 / double(d));
    return Polynomial1D(std::move(coeffs));
}

ParamGreen param_green(cplx c, cplx a, int d, const GreenOptions& opt) {
    if (d < 3) throw std::invalid_argument("param_green needs d >= 3");
    Polynomial1D P = param_map(c, a, d);
    ParamGreen out;
    out.c = c;
    out.a = a;
    out.g_at_0 = green1d(P, cplx(0.0), opt).value;
    out.g_at_c = green1d(P, c, opt).value;
    out.value = std::max(out.g_at_0, out.g_at_c);
    return out;
}

}  // namespace skewlab
