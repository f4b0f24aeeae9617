#pragma once

#include <complex>
#include <vector>

#include "skewlab/types.hpp"

namespace skewlab {

// Dense univariate polynomial over C, coefficients stored ascending
// (a_0 .. a_D, a_D != 0). Evaluation is Horner from the leading coefficient
// down; the summation order is part of the contract (bitwise determinism).
class Polynomial1D {
public:
    Polynomial1D() : coeffs_{cplx(0.0)} {}
    explicit Polynomial1D(std::vector<cplx> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    cplx leading() const { return coeffs_.back(); }

    cplx operator()(cplx z) const { return eval(z); }
    cplx eval(cplx z) const;

    // Horner in a wider scalar type; used by residual re-checks.
    std::complex<long double> eval_ld(std::complex<long double> z) const;

    Polynomial1D derivative() const;

    bool is_constant() const { return coeffs_.size() == 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == cplx(0.0); }

    // sum_j |a_j| r^j over indices j < jmax (all if jmax < 0)
    double abs_coeff_sum(double r, int jmax = -1) const;

private:
    std::vector<cplx> coeffs_;
};

struct RootOptions {
    int max_iter = 600;
    double tol = 1e-14;
    bool polish = true;
};

// All complex roots via Durand-Kerner with deterministic starting ring,
// followed by Newton polishing. Roots are returned sorted by (re, im).
std::vector<cplx> roots(const Polynomial1D& poly, const RootOptions& opt = {});

// p(x) = target solved for all x; convenience wrapper.
std::vector<cplx> solve(const Polynomial1D& poly, cplx target,
                        const RootOptions& opt = {});

}  // namespace skewlab
