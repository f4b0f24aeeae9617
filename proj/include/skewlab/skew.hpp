#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skewlab/polynomial.hpp"
#include "skewlab/types.hpp"

namespace skewlab {

// q(z,w) = sum_j b_j(z) w^j with b_d a nonzero constant (regularity).
// Evaluation order is fixed: each b_j(z) by Horner in z, then Horner in w.
class FiberPolynomial {
public:
    FiberPolynomial() = default;
    explicit FiberPolynomial(std::vector<Polynomial1D> coeffs_in_z);

    int wdegree() const { return static_cast<int>(bz_.size()) - 1; }
    const Polynomial1D& coeff(int j) const { return bz_[j]; }
    cplx leading() const { return bz_.back().coeffs()[0]; }

    cplx eval(cplx z, cplx w) const;
    cplx dw(cplx z, cplx w) const;    // dq/dw
    cplx dz(cplx z, cplx w) const;    // dq/dz

    // the 1-D polynomial w -> q(z0, w)
    Polynomial1D at_base(cplx z0) const;
    // the 1-D polynomial w -> dq/dw(z0, w)
    Polynomial1D dw_at_base(cplx z0) const;

    // sup over |z| <= zr of sum_{j<wdeg} |b_j(z)| (upper bound by coefficient
    // magnitudes)
    double lower_coeff_bound(double zr) const;
    // true when every b_j is constant in z
    bool z_free() const;
    // max z-degree over all coefficients
    int max_zdegree() const;

private:
    std::vector<Polynomial1D> bz_;
};

// f(z,w) = (p(z), q(z,w)), deg p = w-deg q = d >= 2.
struct SkewProduct {
    Polynomial1D p;
    FiberPolynomial q;
    int d = 0;

    SkewProduct() = default;
    SkewProduct(Polynomial1D p_, FiberPolynomial q_);

    Point evaluate(const Point& x) const {
        return {p.eval(x.z), q.eval(x.z, x.w)};
    }
};

struct OrbitRecord {
    std::vector<Point> points;
    std::vector<cplx> vertical_cocycle;  // cocycle[n] = prod_{j<n} dq/dw(points[j])
    bool escaped = false;
    std::optional<int> escape_index;
};

Point evaluate(const SkewProduct& f, const Point& x);
cplx vertical_derivative(const SkewProduct& f, const Point& x);

// Records the orbit until n_max or the first |w| > escape_radius (the
// escaping point itself is recorded). Non-finite values also stop the orbit
// and are reported as escape, never as an exception.
OrbitRecord iterate(const SkewProduct& f, const Point& x, int n_max,
                    double escape_radius);

enum class CriticalKind { BaseCritical, FiberCritical };

struct CriticalComponent {
    CriticalKind kind;
    cplx locus;        // z for base-critical (Crit(p) x C), w for fiber-critical (C x {w})
    int multiplicity;  // multiplicity as a root of p' resp. dq/dw
    std::string label;
};

// Thrown when fiber-critical points are z-dependent and cannot be tracked as
// global branches; callers fall back to per-fiber root finding.
struct CriticalTrackingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<CriticalComponent> critical_locus(const SkewProduct& f);

// Smallest certified radius R (>= 10) with: max(|z|,|w|) <= zr and |w| > R
// imply |q_z(w)| >= 2|w|. Used as the default escape test.
double escape_radius(const SkewProduct& f, double z_region = 0.0);

// Radius of a disk certainly containing every K_z for |z| <= zr:
// |w| > radius implies |q_z(w)| > |w|.
double k_bound_radius(const SkewProduct& f, double zr);

}  // namespace skewlab
