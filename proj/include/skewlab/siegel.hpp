#pragma once

#include <vector>

#include "skewlab/polynomial.hpp"
#include "skewlab/types.hpp"

namespace skewlab {

// Linearizer phi of p at 0: p(phi(zeta)) = phi(lambda zeta), phi(0) = 0,
// phi'(0) = 1, coefficients solved order by order.
struct SiegelData {
    double theta = 0.0;
    cplx lambda;
    std::vector<cplx> phi_coeffs;  // phi = sum_{k>=1} b_k zeta^k, b_1 = 1
    double radius_estimate = 0.0;  // r-hat
    int truncation = 0;
    double min_divisor = 0.0;  // min_k |lambda^k - lambda|

    cplx phi(cplx zeta) const;
    cplx dphi(cplx zeta) const;
    // Newton inversion of phi near a seed; used for rotation-number recovery.
    cplx phi_inverse(cplx target, cplx seed, double tol = 1e-13) const;
};

struct LinearizeOptions {
    int n_terms = 200;
    double radius_cap = 4.0;  // r-hat for (nearly) linear maps
    int orbit_steps = 10000;
};

SiegelData linearize(const Polynomial1D& p, const LinearizeOptions& opt = {});

// r-hat = min(coefficient root-test radius, orbit-stability radius).
double siegel_radius(const SiegelData& sd, const Polynomial1D& p,
                     const LinearizeOptions& opt = {});

// max |p(phi(zeta)) - phi(lambda zeta)| over |zeta| = r (sampled)
double conjugacy_residual(const SiegelData& sd, const Polynomial1D& p, double r,
                          int samples = 256);

struct InvariantCircle {
    double r = 0.0;  // linearized radius
    std::vector<cplx> samples;  // phi(r e^{2 pi i j/n})
    double rotation = 0.0;
    double residual = 0.0;  // max_j |p(samples[j]) - phi(lambda r e^{2 pi i t_j})|
};

InvariantCircle invariant_circle(const SiegelData& sd, const Polynomial1D& p,
                                 double r, int n_samples);

// rotation number of p on the invariant circle of linearized radius r,
// recovered by averaging lift increments over `iters` iterates.
double rotation_number(const SiegelData& sd, const Polynomial1D& p, double r,
                       int iters = 10000);

}  // namespace skewlab
