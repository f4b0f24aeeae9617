#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skewlab/green.hpp"
#include "skewlab/slice.hpp"
#include "skewlab/skew.hpp"

namespace skewlab {

// Parameters of the example family
//   p(z) = e^{2 pi i theta} z + z^d,
//   q_z(w) = w^d/d - c w^{d-1}/(d-1) + beta z,
// with q_0(c) = m a repelling fixed point of q_0.
struct FamilyParams {
    int d = 3;
    cplx c;
    cplx beta{1.0, 0.0};
    double theta = kGoldenTheta;
    cplx m;
    cplx multiplier;

    // residuals of the defining equations, re-evaluated in extended precision
    double residual_fixed = 0.0;  // |q_0(m) - m|
    double residual_crit = 0.0;   // |q_0(c) - m|
};

SkewProduct build_family(int d, cplx c, cplx beta, double theta);
SkewProduct build_family(const FamilyParams& fp);

// the central-fiber polynomial q_0(w) = w^d/d - c w^{d-1}/(d-1)
Polynomial1D family_q0(int d, cplx c);

struct FinderOptions {
    double tol = 1e-12;
    int newton_iter = 200;
    bool check_membership = true;  // run the A2 basin-membership gate
    int basin_grid = 1024;
    int threads = 1;
};

// Misiurewicz-type parameter with q_0^k(c) = m, k = 1: closed form for d = 3
// (u^3 + 9u^2 - 108 = 0, u = c^2), Newton with a deterministic seed scan for
// d >= 4. Candidates are ranked by (residual, membership), never returned
// unverified.
FamilyParams find_misiurewicz_parameter(int d, int k = 1,
                                        const FinderOptions& opt = {});

enum class Verdict { VerifiedNumerically, Refuted, Inconclusive };
std::string verdict_name(Verdict v);

struct AssumptionReport {
    struct A1 {
        int periodic_points = 0;
        double min_multiplier = 0.0;
        int boundary_components = 0;
        Verdict verdict = Verdict::Inconclusive;
    } a1;
    struct A2 {
        double residual = 0.0;        // |q_0^k(c) - m|
        double multiplier_abs = 0.0;  // |q_0'(m)| (k=1 cycle)
        double membership_px = 0.0;   // dist(m, boundary) in pixels
        Verdict verdict = Verdict::Inconclusive;
    } a2;
    struct A3 {
        cplx z1;                   // fixed point of p used
        bool escaped = false;      // direct escape of c under P_{c,a}, a^d = beta z1
        int escape_index = -1;
        double threshold_a0 = 0.0;  // first |a| in the geometric scan with
                                    // g(P(c)) > G(c,a)
        bool scan_monotone = false;
        Verdict verdict = Verdict::Inconclusive;
    } a3;
    std::string caveats;
};

struct AssumptionOptions {
    int basin_grid = 1024;
    int period_max = 4;
    int threads = 1;
    double membership_tol_px = 1.0;
};

AssumptionReport verify_assumptions(const FamilyParams& params,
                                    const AssumptionOptions& opt = {});

}  // namespace skewlab
