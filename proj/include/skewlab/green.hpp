#pragma once

#include "skewlab/polynomial.hpp"
#include "skewlab/skew.hpp"
#include "skewlab/types.hpp"

namespace skewlab {

// One potential value with the depth used and a certified truncation bound.
// value == 0 with escaped == false means "no escape detected through depth";
// error_bound is then a conservative residual for the whole bounded region.
struct GreenEstimate {
    double value = 0.0;
    int depth = 0;
    double error_bound = 0.0;
    bool escaped = false;
};

struct GreenOptions {
    int n_max = 64;
    double tol = 1e-9;
};

// Dynamical Green function of a single polynomial, g(w) = lim d^-n log+|P^n w|.
// After a certified escape the estimate is refined (depth auto-extension)
// until the telescoping bound drops under tol.
GreenEstimate green1d(const Polynomial1D& P, cplx w, const GreenOptions& opt = {});

// Two-variable Green function G = lim d^-n log+ max(|z_n|,|w_n|), computed as
// max of the base potential and the vertical (fiberwise) potential.
GreenEstimate green_value(const SkewProduct& f, const Point& x,
                          const GreenOptions& opt = {});

// Vertical potential lim d^-n log+|q_z^n(w)| (potential of the slice measure).
GreenEstimate fiber_green(const SkewProduct& f, cplx z, cplx w,
                          const GreenOptions& opt = {});

// Same, reusing a precomputed base-potential estimate for z (per-slice loops).
GreenEstimate fiber_green_with_base(const SkewProduct& f, cplx z, cplx w,
                                    const GreenEstimate& base,
                                    const GreenOptions& opt = {});

// Both components at once (base potential of z, vertical potential of (z,w)).
struct GreenPair {
    GreenEstimate base;
    GreenEstimate vertical;
    GreenEstimate combined;
};
GreenPair green_pair(const SkewProduct& f, const Point& x,
                     const GreenOptions& opt = {});

// Parameter-space potential for P_{c,a}(w) = w^d/d - c w^{d-1}/(d-1) + a^d.
struct ParamGreen {
    cplx c;
    cplx a;
    double g_at_0 = 0.0;
    double g_at_c = 0.0;
    double value = 0.0;  // max(g_at_0, g_at_c)
};

Polynomial1D param_map(cplx c, cplx a, int d);
ParamGreen param_green(cplx c, cplx a, int d, const GreenOptions& opt = {});

}  // namespace skewlab
