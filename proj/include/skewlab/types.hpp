#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace skewlab {

using cplx = std::complex<double>;

// A point (z,w) in C^2: z the base coordinate, w the fiber coordinate.
struct Point {
    cplx z;
    cplx w;
};

inline bool finite(cplx v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

inline double abs2(cplx v) {
    return v.real() * v.real() + v.imag() * v.imag();
}

// log(2*pi) etc. kept out; only shared numeric constants live here.
inline constexpr double kGoldenTheta = 0.6180339887498948482;  // (sqrt(5)-1)/2

}  // namespace skewlab
