#include "skewlab/family.hpp"

#include <algorithm>
#include <cmath>

namespace skewlab {

namespace {

using cld = std::complex<long double>;

cplx family_lambda(double theta) {
    double ang = 2.0 * M_PI * theta;
    return {std::cos(ang), std::sin(ang)};
}

// q_0 and derivative in extended precision for residual re-checks
cld q0_ld(int d, cld c, cld w) {
    cld num = std::pow(w, d) / (long double)(d);
    num -= c * std::pow(w, d - 1) / (long double)(d - 1);
    return num;
}
cld dq0_ld(int d, cld c, cld w) {
    return std::pow(w, d - 1) - c * std::pow(w, d - 2);
}

void fill_residuals(FamilyParams& fp) {
    cld c(fp.c.real(), fp.c.imag()), m(fp.m.real(), fp.m.imag());
    fp.residual_fixed = (double)std::abs(q0_ld(fp.d, c, m) - m);
    fp.residual_crit = (double)std::abs(q0_ld(fp.d, c, c) - m);
    cld mult = dq0_ld(fp.d, c, m);
    fp.multiplier = cplx((double)mult.real(), (double)mult.imag());
}

// joint Newton on (c, m): q_0(m) - m = 0, q_0(c) - m = 0
bool newton_pair(int d, cld& c, cld& m, int iters, long double tol) {
    for (int it = 0; it < iters; ++it) {
        cld f1 = q0_ld(d, c, m) - m;
        cld f2 = q0_ld(d, c, c) - m;
        // jacobian
        cld a11 = dq0_ld(d, c, m) - (long double)1.0;       // d f1/dm
        cld a12 = -std::pow(m, d - 1) / (long double)(d - 1);  // d f1/dc
        cld a21 = cld(-1.0, 0.0);                           // d f2/dm
        cld a22 = dq0_ld(d, c, c) - std::pow(c, d - 1) / (long double)(d - 1);
        cld det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 1e-30L) return false;
        cld dm = (f1 * a22 - f2 * a12) / det;
        cld dc = (a11 * f2 - a21 * f1) / det;
        m -= dm;
        c -= dc;
        if (std::abs(dm) + std::abs(dc) < tol) return true;
    }
    return std::abs(q0_ld(d, c, m) - m) < 100 * tol &&
           std::abs(q0_ld(d, c, c) - m) < 100 * tol;
}

double membership_px(const FamilyParams& fp, int grid, int threads) {
    Polynomial1D q0 = family_q0(fp.d, fp.c);
    GridSpec gs;
    gs.width = gs.height = grid;
    BasinBoundary bb = basin_boundary(q0, gs, {.n_max = 2000, .threads = threads});
    return boundary_distance_px(bb, fp.m);
}

}  // namespace

Polynomial1D family_q0(int d, cplx c) {
    std::vector<cplx> coeffs(d + 1, cplx(0.0));
    coeffs[d] = cplx(1.0 / double(d));
    coeffs[d - 1] = -c / double(d - 1);
    return Polynomial1D(std::move(coeffs));
}

SkewProduct build_family(int d, cplx c, cplx beta, double theta) {
    if (d < 3) throw std::invalid_argument("the example family requires d >= 3");
    std::vector<cplx> pc(d + 1, cplx(0.0));
    pc[1] = family_lambda(theta);
    pc[d] = cplx(1.0);
    Polynomial1D p(std::move(pc));

    std::vector<Polynomial1D> qb(d + 1, Polynomial1D({cplx(0.0)}));
    qb[0] = Polynomial1D({cplx(0.0), beta});  // beta * z
    if (beta == cplx(0.0)) qb[0] = Polynomial1D({cplx(0.0)});
    qb[d - 1] = Polynomial1D({-c / double(d - 1)});
    qb[d] = Polynomial1D({cplx(1.0 / double(d))});
    return SkewProduct(std::move(p), FiberPolynomial(std::move(qb)));
}

SkewProduct build_family(const FamilyParams& fp) {
    return build_family(fp.d, fp.c, fp.beta, fp.theta);
}

FamilyParams find_misiurewicz_parameter(int d, int k, const FinderOptions& opt) {
    if (d < 3) throw std::invalid_argument("the example family requires d >= 3");
    if (k != 1) throw std::invalid_argument("only k = 1 is implemented");

    std::vector<FamilyParams> candidates;
    if (d == 3) {
        // q_0(c) = m = -c^3/6 and q_0(m) = m reduce to u^3 + 9u^2 - 108 = 0,
        // u = c^2; u = 3 is the root giving a repelling m.
        std::vector<cplx> uroots = roots(Polynomial1D({cplx(-108.), cplx(0.), cplx(9.), cplx(1.)}));
        for (cplx u : uroots) {
            if (std::abs(u.imag()) > 1e-9 || u.real() <= 0) continue;
            cld c = std::sqrt(cld(u.real(), u.imag()));
            cld m = -c * c * c / (long double)6.0;
            if (!newton_pair(3, c, m, opt.newton_iter, 1e-17L)) continue;
            FamilyParams fp;
            fp.d = 3;
            fp.c = cplx((double)c.real(), (double)c.imag());
            fp.m = cplx((double)m.real(), (double)m.imag());
            fill_residuals(fp);
            candidates.push_back(fp);
        }
    } else {
        // deterministic seed scan over c in [0.5,3] x [-1,1]
        for (int i = 0; i < 24; ++i) {
            for (int j = 0; j < 16; ++j) {
                cplx c0(0.5 + 2.5 * i / 23.0, -1.0 + 2.0 * j / 15.0);
                Polynomial1D q0 = family_q0(d, c0);
                std::vector<cplx> fixc = q0.coeffs();
                fixc[1] -= 1.0;
                for (cplx m0 : roots(Polynomial1D{fixc})) {
                    if (std::abs(m0) < 1e-8) continue;  // skip the origin
                    cld c(c0.real(), c0.imag()), m(m0.real(), m0.imag());
                    if (!newton_pair(d, c, m, opt.newton_iter, 1e-17L)) continue;
                    FamilyParams fp;
                    fp.d = d;
                    fp.c = cplx((double)c.real(), (double)c.imag());
                    fp.m = cplx((double)m.real(), (double)m.imag());
                    if (std::abs(fp.m) < 1e-6 || std::abs(fp.c) < 1e-6) continue;
                    fill_residuals(fp);
                    if (std::abs(fp.multiplier) <= 1.0 + 1e-9) continue;
                    if (fp.residual_fixed > opt.tol || fp.residual_crit > opt.tol) continue;
                    bool dup = false;
                    for (const auto& other : candidates)
                        if (std::abs(other.c - fp.c) < 1e-8 && std::abs(other.m - fp.m) < 1e-8)
                            dup = true;
                    if (!dup) candidates.push_back(fp);
                }
            }
        }
    }
    // deterministic ranking: residual, then lexicographic on c
    std::sort(candidates.begin(), candidates.end(),
              [](const FamilyParams& a, const FamilyParams& b) {
                  double ra = a.residual_fixed + a.residual_crit;
                  double rb = b.residual_fixed + b.residual_crit;
                  if (ra != rb) return ra < rb;
                  if (a.c.real() != b.c.real()) return a.c.real() > b.c.real();
                  return a.c.imag() < b.c.imag();
              });
    for (const auto& fp : candidates) {
        if (std::abs(fp.multiplier) <= 1.0) continue;
        if (fp.residual_fixed > opt.tol || fp.residual_crit > opt.tol) continue;
        if (opt.check_membership) {
            double px = membership_px(fp, opt.basin_grid, opt.threads);
            if (px > 1.5) continue;  // m not on the basin boundary; keep searching
        }
        return fp;
    }
    throw std::runtime_error("no Misiurewicz-type parameter found for this degree");
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::VerifiedNumerically: return "verified-numerically";
        case Verdict::Refuted: return "refuted";
        default: return "inconclusive";
    }
}

AssumptionReport verify_assumptions(const FamilyParams& params,
                                    const AssumptionOptions& opt) {
    AssumptionReport rep;
    Polynomial1D q0 = family_q0(params.d, params.c);
    Polynomial1D dq0 = q0.derivative();
    GridSpec gs;
    gs.width = gs.height = opt.basin_grid;
    BasinBoundary bb = basin_boundary(q0, gs, {.n_max = 2000, .threads = opt.threads});

    // --- A1: repelling periodic points on the boundary + raster connectivity
    {
        std::vector<cplx> found;
        double min_mult = 1e300;
        size_t step = std::max<size_t>(1, bb.contour.size() / 512);
        for (int per = 1; per <= opt.period_max; ++per) {
            for (size_t si = 0; si < bb.contour.size(); si += step) {
                uint32_t pi = bb.contour[si];
                cplx w = bb.grid.center(int(pi % bb.grid.width), int(pi / bb.grid.width));
                // Newton on q0^per(w) - w
                bool ok = false;
                for (int it = 0; it < 80; ++it) {
                    cplx x = w, dp = 1.0;
                    for (int s = 0; s < per; ++s) {
                        dp *= dq0.eval(x);
                        x = q0.eval(x);
                    }
                    cplx F = x - w, dF = dp - 1.0;
                    if (std::abs(dF) < 1e-14) break;
                    cplx stepv = F / dF;
                    w -= stepv;
                    if (std::abs(stepv) < 1e-13) {
                        ok = true;
                        break;
                    }
                }
                if (!ok || !finite(w)) continue;
                cplx x = w, dp = 1.0;
                for (int s = 0; s < per; ++s) {
                    dp *= dq0.eval(x);
                    x = q0.eval(x);
                }
                if (std::abs(dp) <= 1.0 + 1e-9) continue;
                if (boundary_distance_px(bb, w) > 2.0) continue;
                bool dup = false;
                for (cplx u : found)
                    if (std::abs(u - w) < 1e-9) dup = true;
                if (dup) continue;
                found.push_back(w);
                min_mult = std::min(min_mult, std::abs(dp));
            }
        }
        rep.a1.periodic_points = int(found.size());
        rep.a1.min_multiplier = found.empty() ? 0.0 : min_mult;
        rep.a1.boundary_components = bb.components;
        if (!found.empty() && min_mult > 1.0 && bb.components == 1)
            rep.a1.verdict = Verdict::VerifiedNumerically;
        else if (bb.components != 1)
            rep.a1.verdict = Verdict::Inconclusive;
        else
            rep.a1.verdict = found.empty() ? Verdict::Inconclusive : Verdict::Refuted;
        rep.caveats =
            "A1 hyperbolicity is sampled at finitely many periodic points; raster "
            "connectivity cannot witness topological connectedness";
    }

    // --- A2: q_0(c) = m residual and m on the basin boundary
    {
        rep.a2.residual = params.residual_crit;
        rep.a2.multiplier_abs = std::abs(params.multiplier);
        rep.a2.membership_px = boundary_distance_px(bb, params.m);
        bool res_ok = params.residual_crit < 1e-10 && params.residual_fixed < 1e-10 &&
                      rep.a2.multiplier_abs > 1.0;
        if (res_ok && rep.a2.membership_px <= opt.membership_tol_px)
            rep.a2.verdict = Verdict::VerifiedNumerically;
        else if (!res_ok || rep.a2.membership_px > 2.0)
            rep.a2.verdict = Verdict::Refuted;
        else
            rep.a2.verdict = Verdict::Inconclusive;
    }

    // --- A3: escape of the free critical point in the fixed fiber z1
    {
        // fixed points of p: roots of p(z) - z, excluding 0
        SkewProduct f = build_family(params);
        std::vector<cplx> pc = f.p.coeffs();
        pc[1] -= 1.0;
        std::vector<cplx> fixp = roots(Polynomial1D{std::move(pc)});
        cplx z1(0.0);
        double best = -1.0;
        for (cplx r : fixp) {
            if (std::abs(r) < 1e-12) continue;
            // deterministic pick: largest modulus, then lexicographic
            double a = std::abs(r);
            if (a > best + 1e-15 ||
                (std::abs(a - best) <= 1e-15 &&
                 (r.real() > z1.real() || (r.real() == z1.real() && r.imag() > z1.imag())))) {
                best = a;
                z1 = r;
            }
        }
        rep.a3.z1 = z1;
        cplx ad = params.beta * z1;  // a^d
        std::vector<cplx> Pc(params.d + 1, cplx(0.0));
        Pc[0] = ad;
        Pc[params.d - 1] = -params.c / double(params.d - 1);
        Pc[params.d] = cplx(1.0 / double(params.d));
        Polynomial1D P(std::move(Pc));
        double resc = std::max(10.0, (P.abs_coeff_sum(1.0, params.d) + 2.0) /
                                         std::abs(P.leading()));
        cplx w = params.c;
        rep.a3.escaped = false;
        for (int n = 1; n <= 2000; ++n) {
            w = P.eval(w);
            if (!finite(w) || std::abs(w) > resc) {
                rep.a3.escaped = true;
                rep.a3.escape_index = n;
                break;
            }
        }
        // genericity scan: first |a| on a geometric grid with g(P(c)) > G(c,a)
        rep.a3.threshold_a0 = 0.0;
        rep.a3.scan_monotone = true;
        bool positive_seen = false;
        for (int e = 0; e <= 6; ++e) {
            double aa = std::pow(10.0, e);
            ParamGreen pg = param_green(params.c, cplx(aa, 0.0), params.d);
            Polynomial1D Pa = param_map(params.c, cplx(aa, 0.0), params.d);
            double gPc = green1d(Pa, Pa.eval(params.c)).value;
            bool pos = gPc > pg.value + 1e-12;
            if (pos && rep.a3.threshold_a0 == 0.0) rep.a3.threshold_a0 = aa;
            if (positive_seen && !pos) rep.a3.scan_monotone = false;
            positive_seen = positive_seen || pos;
        }
        if (rep.a3.escaped)
            rep.a3.verdict = Verdict::VerifiedNumerically;
        else
            rep.a3.verdict = Verdict::Inconclusive;  // bounded orbit proves nothing
    }
    return rep;
}

}  // namespace skewlab
