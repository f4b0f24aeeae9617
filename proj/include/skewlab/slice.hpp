#pragma once

#include <cstdint>
#include <vector>

#include "skewlab/green.hpp"
#include "skewlab/skew.hpp"
#include "skewlab/types.hpp"

namespace skewlab {

// Pixel-centered rectangular grid. Row 0 is the top row (imag = ymax side),
// matching PGM orientation; pixel (ix, iy) has center
//   re = xmin + (ix + 0.5) dx,  im = ymax - (iy + 0.5) dy.
struct GridSpec {
    double xmin = -2, xmax = 2, ymin = -2, ymax = 2;
    int width = 512, height = 512;

    double dx() const { return (xmax - xmin) / width; }
    double dy() const { return (ymax - ymin) / height; }
    double pixel_diag() const;
    cplx center(int ix, int iy) const {
        return {xmin + (ix + 0.5) * dx(), ymax - (iy + 0.5) * dy()};
    }
    size_t npix() const { return size_t(width) * height; }
};

// membership raster codes
inline constexpr uint8_t kPixelEscaping = 255;
inline constexpr uint8_t kPixelInterior = 128;
inline constexpr uint8_t kPixelBand = 0;

struct JuliaSlice {
    cplx z;
    GridSpec grid;
    std::vector<uint8_t> membership;  // row-major, kPixel* codes
    std::vector<float> potential;     // fiber Green values
    double diameter_estimate = 0.0;
    int n_max = 0;
    double escape_radius = 0.0;
    size_t unresolved = 0;  // non-escaping pixels outside the certified K box
    bool grid_expanded = false;
};

struct SliceOptions {
    int n_max = 4096;
    int threads = 1;
    bool with_potential = true;
    double green_tol = 1e-7;
};

// Classifies each pixel of the fiber over z by certified escape, marks the
// 8-neighbor boundary band, and estimates diam(J_z) from band pixel centers.
// The grid is auto-expanded to contain every K_z if needed.
JuliaSlice julia_slice(const SkewProduct& f, cplx z, GridSpec grid,
                       const SliceOptions& opt = {});

// Immediate basin of a super-attracting fixed point at w = 0 of a single
// polynomial, with its adjacency boundary and a traced (cyclically ordered)
// outer contour.
struct BasinBoundary {
    GridSpec grid;
    std::vector<uint8_t> in_basin;       // 1 = immediate-basin pixel
    std::vector<uint32_t> boundary_idx;  // pixel indices of the boundary set
    std::vector<cplx> boundary_points;   // centers of the boundary pixels
    std::vector<uint32_t> contour;       // Moore-traced ordered outer contour
    size_t unresolved = 0;
    int components = 0;  // 8-connected components of the boundary set
    double attraction_radius = 0.0;
};

struct BasinOptions {
    int n_max = 2000;
    int threads = 1;
};

BasinBoundary basin_boundary(const Polynomial1D& q0, GridSpec grid,
                             const BasinOptions& opt = {});

// Distance from w to the traced boundary, in pixels.
double boundary_distance_px(const BasinBoundary& b, cplx w);

// Max pairwise distance of a point set (convex hull + pairwise scan).
double point_set_diameter(const std::vector<cplx>& pts);

// delta-hat: min over sampled fibers of closure(N) of the slice diameter.
struct DeltaHatResult {
    double delta_hat = 0.0;
    std::vector<cplx> fibers;
    std::vector<double> diameters;
    GridSpec grid;
    int n_max = 0;
};

DeltaHatResult min_slice_diameter(const SkewProduct& f,
                                  const std::vector<cplx>& fibers,
                                  GridSpec grid, const SliceOptions& opt);

}  // namespace skewlab
