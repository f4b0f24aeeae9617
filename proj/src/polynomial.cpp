#include "skewlab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skewlab {

Polynomial1D::Polynomial1D(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("polynomial needs coefficients");
    while (coeffs_.size() > 1 && coeffs_.back() == cplx(0.0)) coeffs_.pop_back();
    if (coeffs_.size() > 1 && coeffs_.back() == cplx(0.0))
        throw std::invalid_argument("leading coefficient must be nonzero");
}

cplx Polynomial1D::eval(cplx z) const {
    cplx acc = coeffs_.back();
    for (size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * z + coeffs_[i];
    return acc;
}

std::complex<long double> Polynomial1D::eval_ld(std::complex<long double> z) const {
    std::complex<long double> acc(coeffs_.back().real(), coeffs_.back().imag());
    for (size_t i = coeffs_.size() - 1; i-- > 0;)
        acc = acc * z + std::complex<long double>(coeffs_[i].real(), coeffs_[i].imag());
    return acc;
}

Polynomial1D Polynomial1D::derivative() const {
    if (coeffs_.size() == 1) return Polynomial1D({cplx(0.0)});
    std::vector<cplx> d(coeffs_.size() - 1);
    for (size_t j = 1; j < coeffs_.size(); ++j) d[j - 1] = coeffs_[j] * double(j);
    return Polynomial1D(std::move(d));
}

double Polynomial1D::abs_coeff_sum(double r, int jmax) const {
    size_t hi = jmax < 0 ? coeffs_.size() : std::min<size_t>(jmax, coeffs_.size());
    double s = 0.0, rp = 1.0;
    for (size_t j = 0; j < hi; ++j) {
        s += std::abs(coeffs_[j]) * rp;
        rp *= r;
    }
    return s;
}

namespace {

void solve_quadratic(cplx a, cplx b, cplx c, cplx& x0, cplx& x1) {
    cplx sq = std::sqrt(b * b - 4.0 * a * c);
    // pick the sign avoiding cancellation
    cplx u = (std::real(std::conj(b) * sq) >= 0) ? -(b + sq) : -(b - sq);
    u *= 0.5;
    if (u == cplx(0.0)) {
        x0 = x1 = cplx(0.0);
        return;
    }
    x0 = u / a;
    x1 = c / u;
}

}  // namespace

std::vector<cplx> roots(const Polynomial1D& poly, const RootOptions& opt) {
    int n = poly.degree();
    std::vector<cplx> a = poly.coeffs();
    // strip exact zero roots first (common: w | dq/dw for the family)
    std::vector<cplx> out;
    size_t shift = 0;
    while (shift + 1 < a.size() && a[shift] == cplx(0.0)) ++shift;
    for (size_t k = 0; k < shift; ++k) out.push_back(cplx(0.0));
    a.erase(a.begin(), a.begin() + shift);
    n = static_cast<int>(a.size()) - 1;
    if (n <= 0) {
        std::sort(out.begin(), out.end(), [](cplx u, cplx v) {
            return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
        });
        return out;
    }
    if (n == 1) {
        out.push_back(-a[0] / a[1]);
    } else if (n == 2) {
        cplx x0, x1;
        solve_quadratic(a[2], a[1], a[0], x0, x1);
        out.push_back(x0);
        out.push_back(x1);
    } else {
        // Durand-Kerner on the monic normalization
        std::vector<cplx> mon(n + 1);
        for (int j = 0; j <= n; ++j) mon[j] = a[j] / a[n];
        double radius = 0.0;
        for (int j = 0; j < n; ++j) radius = std::max(radius, std::abs(mon[j]));
        radius = 1.0 + radius;
        Polynomial1D mp{mon};
        std::vector<cplx> x(n);
        for (int k = 0; k < n; ++k) {
            double ang = 2.0 * M_PI * (k + 0.25) / n;
            x[k] = 0.7 * radius * cplx(std::cos(ang), std::sin(ang));
        }
        double scale = std::max(1.0, radius);
        for (int it = 0; it < opt.max_iter; ++it) {
            double worst = 0.0;
            for (int k = 0; k < n; ++k) {
                cplx num = mp.eval(x[k]);
                cplx den(1.0);
                for (int j = 0; j < n; ++j)
                    if (j != k) den *= (x[k] - x[j]);
                if (den == cplx(0.0)) den = cplx(1e-300);
                cplx step = num / den;
                x[k] -= step;
                worst = std::max(worst, std::abs(step));
            }
            if (worst < opt.tol * scale) break;
        }
        for (int k = 0; k < n; ++k) out.push_back(x[k]);
    }
    if (opt.polish) {
        Polynomial1D d = poly.derivative();
        for (auto& r : out) {
            if (r == cplx(0.0)) continue;
            for (int it = 0; it < 4; ++it) {
                cplx dv = d.eval(r);
                if (std::abs(dv) < 1e-300) break;
                cplx step = poly.eval(r) / dv;
                if (!finite(step)) break;
                r -= step;
            }
        }
    }
    std::sort(out.begin(), out.end(), [](cplx u, cplx v) {
        return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
    });
    return out;
}

std::vector<cplx> solve(const Polynomial1D& poly, cplx target, const RootOptions& opt) {
    std::vector<cplx> c = poly.coeffs();
    c[0] -= target;
    return roots(Polynomial1D{std::move(c)}, opt);
}

}  // namespace skewlab
