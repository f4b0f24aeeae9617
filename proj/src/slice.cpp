#include "skewlab/slice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "skewlab/parallel.hpp"

namespace skewlab {

double GridSpec::pixel_diag() const { return std::hypot(dx(), dy()); }

namespace {

// orbit of the base point, shared by all pixels of a slice
std::vector<cplx> base_orbit(const SkewProduct& f, cplx z, int n) {
    std::vector<cplx> zs(n + 1);
    zs[0] = z;
    for (int k = 0; k < n; ++k) zs[k + 1] = f.p.eval(zs[k]);
    return zs;
}

}  // namespace

JuliaSlice julia_slice(const SkewProduct& f, cplx z, GridSpec grid,
                       const SliceOptions& opt) {
    JuliaSlice out;
    out.z = z;
    out.n_max = opt.n_max;

    std::vector<cplx> zs = base_orbit(f, z, opt.n_max);
    double zmax = 0.0;
    for (cplx v : zs)
        if (finite(v)) zmax = std::max(zmax, std::abs(v));
    const double kbox = k_bound_radius(f, zmax);
    const double resc = escape_radius(f, zmax);
    out.escape_radius = resc;

    // grid must cover the K-bounding box
    if (grid.xmin > -kbox || grid.xmax < kbox || grid.ymin > -kbox ||
        grid.ymax < kbox) {
        grid.xmin = std::min(grid.xmin, -kbox);
        grid.xmax = std::max(grid.xmax, kbox);
        grid.ymin = std::min(grid.ymin, -kbox);
        grid.ymax = std::max(grid.ymax, kbox);
        out.grid_expanded = true;
    }
    out.grid = grid;

    const size_t n = grid.npix();
    std::vector<uint8_t> escaped(n, 0);
    std::vector<float> pot;
    if (opt.with_potential) pot.assign(n, 0.0f);

    GreenOptions gopt;
    gopt.n_max = opt.n_max;
    gopt.tol = opt.green_tol;
    GreenEstimate base = green1d(f.p, z, gopt);

    parallel_for(n, opt.threads, [&](size_t i0, size_t i1) {
        for (size_t i = i0; i < i1; ++i) {
            int ix = int(i % grid.width), iy = int(i / grid.width);
            cplx w = grid.center(ix, iy);
            if (opt.with_potential) {
                GreenEstimate g = fiber_green_with_base(f, z, w, base, gopt);
                escaped[i] = g.escaped ? 1 : 0;
                pot[i] = float(g.value);
            } else {
                int k = 0;
                while (k < opt.n_max && finite(w) && std::abs(w) <= resc) {
                    w = f.q.eval(zs[k], w);
                    ++k;
                }
                escaped[i] = (!finite(w) || std::abs(w) > resc) ? 1 : 0;
            }
        }
    });

    // classify: band = non-escaping pixel with an escaping 8-neighbor
    out.membership.assign(n, kPixelInterior);
    std::vector<cplx> band_pts;
    size_t unresolved = 0;
    for (size_t i = 0; i < n; ++i) {
        int ix = int(i % grid.width), iy = int(i / grid.width);
        if (escaped[i]) {
            out.membership[i] = kPixelEscaping;
            continue;
        }
        cplx w = grid.center(ix, iy);
        if (std::abs(w) > kbox) ++unresolved;
        bool band = false;
        for (int dyy = -1; dyy <= 1 && !band; ++dyy)
            for (int dxx = -1; dxx <= 1 && !band; ++dxx) {
                if (dxx == 0 && dyy == 0) continue;
                int jx = ix + dxx, jy = iy + dyy;
                if (jx < 0 || jy < 0 || jx >= grid.width || jy >= grid.height)
                    continue;
                if (escaped[size_t(jy) * grid.width + jx]) band = true;
            }
        if (band) {
            out.membership[i] = kPixelBand;
            band_pts.push_back(w);
        }
    }
    out.unresolved = unresolved;
    out.potential = std::move(pot);
    out.diameter_estimate = point_set_diameter(band_pts);
    return out;
}

double point_set_diameter(const std::vector<cplx>& pts) {
    if (pts.size() < 2) return 0.0;
    // convex hull (monotone chain) then pairwise scan over hull vertices
    std::vector<cplx> p = pts;
    std::sort(p.begin(), p.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    auto cross = [](cplx o, cplx a, cplx b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) -
               (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<cplx> h(2 * p.size());
    size_t k = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k > 1 ? k - 1 : k);
    double best = 0.0;
    for (size_t i = 0; i < h.size(); ++i)
        for (size_t j = i + 1; j < h.size(); ++j)
            best = std::max(best, std::abs(h[i] - h[j]));
    return best;
}

BasinBoundary basin_boundary(const Polynomial1D& q0, GridSpec grid,
                             const BasinOptions& opt) {
    BasinBoundary out;
    const auto& c = q0.coeffs();
    if (c[0] != cplx(0.0) || (c.size() > 1 && c[1] != cplx(0.0)))
        throw std::invalid_argument("basin_boundary needs a super-attracting fixed point at 0");

    // certified attraction radius: sum_{j>=2} |a_j| r^{j-1} <= 1/2
    double r_attr = 1.0;
    for (int it = 0; it < 200; ++it) {
        double s = 0.0, rp = r_attr;
        for (size_t j = 2; j < c.size(); ++j) {
            s += std::abs(c[j]) * rp;
            rp *= r_attr;
        }
        if (s <= 0.5) break;
        r_attr *= 0.8;
    }
    out.attraction_radius = r_attr;

    // K-bound for the autonomous map: reuse the skew helper on a trivial skew
    double lead = std::abs(q0.leading());
    double S = q0.abs_coeff_sum(1.0, q0.degree());
    double resc = std::max(10.0, (S + 2.0) / lead);
    double kbox = std::max(1.0, (S + 1.0) / lead);
    for (int i = 0; i < 60; ++i)
        kbox = std::max(1.0, (S + 1.0 / std::pow(std::max(kbox, 1.0), q0.degree() - 2)) / lead);
    kbox = 1.05 * kbox + 0.1;
    if (grid.xmin > -kbox || grid.xmax < kbox || grid.ymin > -kbox || grid.ymax < kbox) {
        grid.xmin = -kbox;
        grid.xmax = kbox;
        grid.ymin = -kbox;
        grid.ymax = kbox;
    }
    out.grid = grid;

    const size_t n = grid.npix();
    std::vector<uint8_t> conv(n, 0), esc(n, 0);
    parallel_for(n, opt.threads, [&](size_t i0, size_t i1) {
        for (size_t i = i0; i < i1; ++i) {
            cplx w = grid.center(int(i % grid.width), int(i / grid.width));
            int k = 0;
            for (; k < opt.n_max; ++k) {
                double a = std::abs(w);
                if (a < r_attr) {
                    conv[i] = 1;
                    break;
                }
                if (a > resc || !finite(w)) {
                    esc[i] = 1;
                    break;
                }
                w = q0.eval(w);
            }
        }
    });
    size_t unresolved = 0;
    for (size_t i = 0; i < n; ++i)
        if (!conv[i] && !esc[i]) ++unresolved;
    out.unresolved = unresolved;

    // immediate basin: flood fill (8-adjacency) from the pixel containing 0
    out.in_basin.assign(n, 0);
    int cx = std::clamp(int((0.0 - grid.xmin) / grid.dx()), 0, grid.width - 1);
    int cy = std::clamp(int((grid.ymax - 0.0) / grid.dy()), 0, grid.height - 1);
    size_t start = size_t(cy) * grid.width + cx;
    if (!conv[start]) throw std::runtime_error("origin pixel did not converge; grid too coarse");
    std::deque<size_t> stack{start};
    out.in_basin[start] = 1;
    while (!stack.empty()) {
        size_t i = stack.back();
        stack.pop_back();
        int ix = int(i % grid.width), iy = int(i / grid.width);
        for (int dyy = -1; dyy <= 1; ++dyy)
            for (int dxx = -1; dxx <= 1; ++dxx) {
                if (dxx == 0 && dyy == 0) continue;
                int jx = ix + dxx, jy = iy + dyy;
                if (jx < 0 || jy < 0 || jx >= grid.width || jy >= grid.height) continue;
                size_t j = size_t(jy) * grid.width + jx;
                if (conv[j] && !out.in_basin[j]) {
                    out.in_basin[j] = 1;
                    stack.push_back(j);
                }
            }
    }

    // boundary set: basin pixels with a non-basin 8-neighbor
    std::vector<uint8_t> isb(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (!out.in_basin[i]) continue;
        int ix = int(i % grid.width), iy = int(i / grid.width);
        bool bd = false;
        if (ix == 0 || iy == 0 || ix == grid.width - 1 || iy == grid.height - 1) bd = true;
        for (int dyy = -1; dyy <= 1 && !bd; ++dyy)
            for (int dxx = -1; dxx <= 1 && !bd; ++dxx) {
                if (dxx == 0 && dyy == 0) continue;
                size_t j = size_t(iy + dyy) * grid.width + (ix + dxx);
                if (!out.in_basin[j]) bd = true;
            }
        if (bd) {
            isb[i] = 1;
            out.boundary_idx.push_back(uint32_t(i));
            out.boundary_points.push_back(grid.center(ix, iy));
        }
    }

    // connected components of the boundary set (8-adjacency)
    {
        std::vector<uint8_t> seen(n, 0);
        for (uint32_t s : out.boundary_idx) {
            if (seen[s]) continue;
            ++out.components;
            std::deque<size_t> st{s};
            seen[s] = 1;
            while (!st.empty()) {
                size_t i = st.back();
                st.pop_back();
                int ix = int(i % grid.width), iy = int(i / grid.width);
                for (int dyy = -1; dyy <= 1; ++dyy)
                    for (int dxx = -1; dxx <= 1; ++dxx) {
                        int jx = ix + dxx, jy = iy + dyy;
                        if (jx < 0 || jy < 0 || jx >= grid.width || jy >= grid.height) continue;
                        size_t j = size_t(jy) * grid.width + jx;
                        if (isb[j] && !seen[j]) {
                            seen[j] = 1;
                            st.push_back(j);
                        }
                    }
            }
        }
    }

    // Moore-neighbor contour trace of the basin component, giving a cyclic
    // order along the outer boundary (used to order skeleton points).
    {
        auto at = [&](int ix, int iy) -> bool {
            if (ix < 0 || iy < 0 || ix >= grid.width || iy >= grid.height) return false;
            return out.in_basin[size_t(iy) * grid.width + ix] != 0;
        };
        // start: topmost-leftmost basin pixel
        int sx = -1, sy = -1;
        for (int iy = 0; iy < grid.height && sx < 0; ++iy)
            for (int ix = 0; ix < grid.width; ++ix)
                if (at(ix, iy)) {
                    sx = ix;
                    sy = iy;
                    break;
                }
        if (sx >= 0) {
            static const int mx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
            static const int my[8] = {0, -1, -1, -1, 0, 1, 1, 1};
            int px = sx, py = sy;
            int dir = 6;  // came from above, search downward first
            std::vector<uint32_t> loop;
            size_t guard = 8 * n + 16;
            do {
                loop.push_back(uint32_t(size_t(py) * grid.width + px));
                int k = (dir + 6) % 8;  // backtrack then clockwise
                int found = -1;
                for (int t = 0; t < 8; ++t) {
                    int kk = (k + t) % 8;
                    if (at(px + mx[kk], py + my[kk])) {
                        found = kk;
                        break;
                    }
                }
                if (found < 0) break;  // isolated pixel
                px += mx[found];
                py += my[found];
                dir = found;
            } while ((px != sx || py != sy) && --guard > 0);
            out.contour = std::move(loop);
        }
    }
    return out;
}

double boundary_distance_px(const BasinBoundary& b, cplx w) {
    double best = 1e300;
    for (cplx p : b.boundary_points) best = std::min(best, std::abs(p - w));
    return best / b.grid.pixel_diag();
}

DeltaHatResult min_slice_diameter(const SkewProduct& f,
                                  const std::vector<cplx>& fibers, GridSpec grid,
                                  const SliceOptions& opt) {
    DeltaHatResult out;
    out.fibers = fibers;
    out.grid = grid;
    out.n_max = opt.n_max;
    out.delta_hat = 1e300;
    SliceOptions o = opt;
    o.with_potential = false;
    for (cplx z : fibers) {
        JuliaSlice s = julia_slice(f, z, grid, o);
        out.diameters.push_back(s.diameter_estimate);
        out.delta_hat = std::min(out.delta_hat, s.diameter_estimate);
    }
    if (fibers.empty()) out.delta_hat = 0.0;
    return out;
}

}  // namespace skewlab
