#include "skewlab/siegel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skewlab {

cplx SiegelData::phi(cplx zeta) const {
    cplx acc = phi_coeffs.back();
    for (size_t k = phi_coeffs.size() - 1; k-- > 0;) acc = acc * zeta + phi_coeffs[k];
    return acc * zeta;  // coefficients start at zeta^1
}

cplx SiegelData::dphi(cplx zeta) const {
    cplx acc = phi_coeffs.back() * double(phi_coeffs.size());
    for (size_t k = phi_coeffs.size() - 1; k-- > 0;)
        acc = acc * zeta + phi_coeffs[k] * double(k + 1);
    return acc;
}

cplx SiegelData::phi_inverse(cplx target, cplx seed, double tol) const {
    cplx zeta = seed;
    for (int it = 0; it < 80; ++it) {
        cplx dv = dphi(zeta);
        if (std::abs(dv) < 1e-300) break;
        cplx step = (phi(zeta) - target) / dv;
        zeta -= step;
        if (std::abs(step) < tol) break;
    }
    return zeta;
}

SiegelData linearize(const Polynomial1D& p, const LinearizeOptions& opt) {
    const auto& a = p.coeffs();
    if (a[0] != cplx(0.0)) throw std::invalid_argument("p must fix the origin");
    if (a.size() < 2) throw std::invalid_argument("p must be non-constant");
    cplx lambda = a[1];
    if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
        throw std::invalid_argument("multiplier must lie on the unit circle");

    const int N = opt.n_terms;
    SiegelData sd;
    sd.lambda = lambda;
    sd.theta = std::arg(lambda) / (2.0 * M_PI);
    if (sd.theta < 0) sd.theta += 1.0;
    sd.truncation = N;

    // small-divisor guard: lambda^k != lambda for 2 <= k <= N
    double min_div = 1e300;
    {
        cplx lk = lambda;
        for (int k = 2; k <= N; ++k) {
            lk *= lambda;
            double dv = std::abs(lk - lambda);
            min_div = std::min(min_div, dv);
            if (dv < 1e-13)
                throw std::invalid_argument("rotation number is rational (zero divisor) at order " +
                                            std::to_string(k));
        }
    }
    sd.min_divisor = min_div;

    const int D = p.degree();
    // b[k] = coefficient of zeta^k of phi, b[1] = 1
    std::vector<cplx> b(N + 1, cplx(0.0));
    b[1] = cplx(1.0);
    // pw[j][t] = coefficient of zeta^t in phi^j, maintained incrementally
    std::vector<std::vector<cplx>> pw(D + 1, std::vector<cplx>(N + 1, cplx(0.0)));
    pw[1] = b;
    cplx lk = lambda;  // lambda^k
    for (int k = 2; k <= N; ++k) {
        lk *= lambda;
        // index-k coefficients of phi^j use only b[1..k-1]
        for (int j = 2; j <= D; ++j) {
            cplx s(0.0);
            for (int i = 1; i <= k - (j - 1); ++i) s += b[i] * pw[j - 1][k - i];
            pw[j][k] = s;
        }
        cplx rhs(0.0);
        for (int j = 2; j <= D; ++j) rhs += a[j] * pw[j][k];
        b[k] = rhs / (lk - lambda);
        // register b[k] in the power arrays at index k
        pw[1][k] = b[k];
        // (higher powers at indices > k pick this up when those indices are reached:
        //  pw[j][t] for t > k recomputed from scratch is avoided by the loop above
        //  because pw[j-1][t-i] with t-i <= k-1 is already final)
    }
    sd.phi_coeffs.assign(b.begin() + 1, b.end());
    sd.radius_estimate = siegel_radius(sd, p, opt);
    return sd;
}

double siegel_radius(const SiegelData& sd, const Polynomial1D& p,
                     const LinearizeOptions& opt) {
    const auto& b = sd.phi_coeffs;  // b[k-1] = b_k
    const int N = int(b.size());
    double r_root = opt.radius_cap;
    for (int k = std::max(2, N / 2); k <= N; ++k) {
        double m = std::abs(b[k - 1]);
        if (m <= 0.0) continue;
        r_root = std::min(r_root, std::pow(m, -1.0 / k));
    }
    // orbit test: descend until 16 sampled orbits stay within 2x start modulus
    double r_orb = 0.0;
    for (double r = r_root; r > 1e-4 * r_root; r *= 0.93) {
        bool ok = true;
        for (int j = 0; j < 16 && ok; ++j) {
            double t = (j + 0.5) / 16.0;
            cplx z = sd.phi(r * cplx(std::cos(2 * M_PI * t), std::sin(2 * M_PI * t)));
            double a0 = std::abs(z);
            for (int s = 0; s < opt.orbit_steps; ++s) {
                z = p.eval(z);
                if (!finite(z) || std::abs(z) > 2.0 * a0 + 1e-12) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            r_orb = r;
            break;
        }
    }
    if (r_orb == 0.0) return 0.0;
    return std::min(r_root, r_orb);
}

double conjugacy_residual(const SiegelData& sd, const Polynomial1D& p, double r,
                          int samples) {
    double worst = 0.0;
    for (int j = 0; j < samples; ++j) {
        double t = double(j) / samples;
        cplx zeta = r * cplx(std::cos(2 * M_PI * t), std::sin(2 * M_PI * t));
        worst = std::max(worst, std::abs(p.eval(sd.phi(zeta)) - sd.phi(sd.lambda * zeta)));
    }
    return worst;
}

InvariantCircle invariant_circle(const SiegelData& sd, const Polynomial1D& p,
                                 double r, int n_samples) {
    if (!(r > 0) || r > 0.8 * sd.radius_estimate)
        throw std::invalid_argument("invariant circle radius must satisfy 0 < r <= 0.8 r-hat");
    InvariantCircle c;
    c.r = r;
    c.rotation = sd.theta;
    c.samples.resize(n_samples);
    double worst = 0.0;
    for (int j = 0; j < n_samples; ++j) {
        double t = double(j) / n_samples;
        cplx zeta = r * cplx(std::cos(2 * M_PI * t), std::sin(2 * M_PI * t));
        c.samples[j] = sd.phi(zeta);
        worst = std::max(worst, std::abs(p.eval(c.samples[j]) - sd.phi(sd.lambda * zeta)));
    }
    c.residual = worst;
    return c;
}

double rotation_number(const SiegelData& sd, const Polynomial1D& p, double r,
                       int iters) {
    cplx zeta = cplx(r, 0.0);
    cplx w = sd.phi(zeta);
    double sum = 0.0;
    for (int k = 0; k < iters; ++k) {
        w = p.eval(w);
        cplx znext = sd.phi_inverse(w, sd.lambda * zeta);
        double dt = std::arg(znext / zeta) / (2.0 * M_PI);
        if (dt < 0) dt += 1.0;
        sum += dt;
        zeta = znext;
    }
    return sum / iters;
}

}  // namespace skewlab
