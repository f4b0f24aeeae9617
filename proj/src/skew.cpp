#include "skewlab/skew.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace skewlab {

FiberPolynomial::FiberPolynomial(std::vector<Polynomial1D> coeffs_in_z)
    : bz_(std::move(coeffs_in_z)) {
    if (bz_.size() < 2) throw std::invalid_argument("fiber polynomial needs w-degree >= 1");
    const Polynomial1D& lead = bz_.back();
    if (!lead.is_constant() || lead.coeffs()[0] == cplx(0.0))
        throw std::invalid_argument("w-leading coefficient must be a nonzero constant in z");
}

cplx FiberPolynomial::eval(cplx z, cplx w) const {
    cplx acc = bz_.back().eval(z);
    for (size_t j = bz_.size() - 1; j-- > 0;) acc = acc * w + bz_[j].eval(z);
    return acc;
}

cplx FiberPolynomial::dw(cplx z, cplx w) const {
    size_t n = bz_.size() - 1;  // w-degree
    cplx acc = bz_[n].eval(z) * double(n);
    for (size_t j = n - 1; j >= 1; --j) acc = acc * w + bz_[j].eval(z) * double(j);
    return acc;
}

cplx FiberPolynomial::dz(cplx z, cplx w) const {
    cplx acc = bz_.back().derivative().eval(z);
    for (size_t j = bz_.size() - 1; j-- > 0;) acc = acc * w + bz_[j].derivative().eval(z);
    return acc;
}

Polynomial1D FiberPolynomial::at_base(cplx z0) const {
    std::vector<cplx> c(bz_.size());
    for (size_t j = 0; j < bz_.size(); ++j) c[j] = bz_[j].eval(z0);
    return Polynomial1D(std::move(c));
}

Polynomial1D FiberPolynomial::dw_at_base(cplx z0) const {
    std::vector<cplx> c(bz_.size() - 1);
    for (size_t j = 1; j < bz_.size(); ++j) c[j - 1] = bz_[j].eval(z0) * double(j);
    return Polynomial1D(std::move(c));
}

double FiberPolynomial::lower_coeff_bound(double zr) const {
    double s = 0.0;
    for (size_t j = 0; j + 1 < bz_.size(); ++j) s += bz_[j].abs_coeff_sum(zr);
    return s;
}

bool FiberPolynomial::z_free() const {
    for (const auto& b : bz_)
        if (b.degree() > 0) return false;
    return true;
}

int FiberPolynomial::max_zdegree() const {
    int g = 0;
    for (const auto& b : bz_) g = std::max(g, b.degree());
    return g;
}

SkewProduct::SkewProduct(Polynomial1D p_, FiberPolynomial q_)
    : p(std::move(p_)), q(std::move(q_)) {
    if (p.degree() != q.wdegree())
        throw std::invalid_argument("skew product needs deg p == w-deg q");
    if (p.degree() < 2) throw std::invalid_argument("skew product needs degree >= 2");
    d = p.degree();
}

Point evaluate(const SkewProduct& f, const Point& x) { return f.evaluate(x); }

cplx vertical_derivative(const SkewProduct& f, const Point& x) {
    return f.q.dw(x.z, x.w);
}

OrbitRecord iterate(const SkewProduct& f, const Point& x, int n_max,
                    double escape_radius) {
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    if (!(escape_radius > 0)) throw std::invalid_argument("escape_radius must be > 0");
    OrbitRecord rec;
    rec.points.reserve(n_max + 1);
    rec.vertical_cocycle.reserve(n_max + 1);
    rec.points.push_back(x);
    rec.vertical_cocycle.push_back(cplx(1.0));
    Point cur = x;
    for (int n = 0; n < n_max; ++n) {
        if (std::abs(cur.w) > escape_radius || !finite(cur.w) || !finite(cur.z)) {
            rec.escaped = true;
            rec.escape_index = n;
            return rec;
        }
        cplx dv = f.q.dw(cur.z, cur.w);
        cur = f.evaluate(cur);
        rec.points.push_back(cur);
        rec.vertical_cocycle.push_back(rec.vertical_cocycle.back() * dv);
        if (!finite(cur.w) || !finite(cur.z)) {
            rec.escaped = true;
            rec.escape_index = n + 1;
            return rec;
        }
    }
    if (std::abs(rec.points.back().w) > escape_radius) {
        rec.escaped = true;
        rec.escape_index = static_cast<int>(rec.points.size()) - 1;
    }
    return rec;
}

std::vector<CriticalComponent> critical_locus(const SkewProduct& f) {
    std::vector<CriticalComponent> out;
    // fiber-critical part: dq/dw(z,w) = 0 with z-free coefficients required
    std::vector<cplx> dwc(f.q.wdegree());
    for (int j = 1; j <= f.q.wdegree(); ++j) {
        const Polynomial1D& b = f.q.coeff(j);
        if (b.degree() > 0)
            throw CriticalTrackingError(
                "fiber-critical points are z-dependent; use per-fiber root finding");
        dwc[j - 1] = b.coeffs()[0] * double(j);
    }
    std::vector<cplx> wroots = roots(Polynomial1D{dwc});
    // group multiple roots
    std::vector<std::pair<cplx, int>> grouped;
    for (cplx r : wroots) {
        bool merged = false;
        for (auto& g : grouped)
            if (std::abs(g.first - r) < 1e-9) {
                g.second++;
                merged = true;
                break;
            }
        if (!merged) grouped.push_back({r, 1});
    }
    int k = 0;
    for (auto& g : grouped)
        out.push_back({CriticalKind::FiberCritical, g.first, g.second,
                       "fiber-critical-" + std::to_string(k++)});
    // base-critical part: roots of p'
    Polynomial1D dp = f.p.derivative();
    if (!dp.is_zero()) {
        std::vector<cplx> zroots = roots(dp);
        std::vector<std::pair<cplx, int>> zg;
        for (cplx r : zroots) {
            bool merged = false;
            for (auto& g : zg)
                if (std::abs(g.first - r) < 1e-9) {
                    g.second++;
                    merged = true;
                    break;
                }
            if (!merged) zg.push_back({r, 1});
        }
        k = 0;
        for (auto& g : zg)
            out.push_back({CriticalKind::BaseCritical, g.first, g.second,
                           "base-critical-" + std::to_string(k++)});
    }
    return out;
}

double escape_radius(const SkewProduct& f, double z_region) {
    double lead = std::abs(f.q.leading());
    double s = f.q.lower_coeff_bound(std::max(z_region, 0.0));
    return std::max(10.0, (s + 2.0) / lead);
}

double k_bound_radius(const SkewProduct& f, double zr) {
    double lead = std::abs(f.q.leading());
    double s = f.q.lower_coeff_bound(zr);
    // want lead*r^{d-1} - s*r^{d-2} ... > 1, solved conservatively:
    // r >= max(1, (s + 1/r^{d-2})/lead) ; iterate a fixed point a few times
    double r = std::max(1.0, (s + 1.0) / lead);
    for (int i = 0; i < 60; ++i) {
        double rhs = (s + 1.0 / std::pow(std::max(r, 1.0), f.d - 2)) / lead;
        r = std::max(1.0, rhs);
    }
    return 1.05 * r + 0.1;
}

}  // namespace skewlab
