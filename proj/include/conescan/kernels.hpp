#pragma once

#include <cstddef>

namespace conescan::kernels {

// Batched inner loops with interchangeable scalar and SIMD implementations.
// All variants share the algebraic sqrt-only contact form
//   s = (z/r)*(d+k) + l*sqrt(1 - (z/r)^2) - l
//   f = sqrt(e^2 - (l+s)^2) - k
// which is identical to the angle-based formulation but vectorises cleanly.
struct batch_ops {
    const char* name;

    // Contact pair (s, f) for each (z[i], d[i]).
    void (*contact_sf)(const double* z, const double* d, double* s, double* f,
                       std::size_t n, double l, double k, double r);

    // Lockstep bisection solve of profile(s(z,d)) = f(z,d) for each d[i],
    // bracket [0, 1.2*Z] with the z = 0 preload clamp.  Returns the index of
    // the first lane whose bracket has no contact, or -1 on success.
    long (*solve_deflection)(const double* d, double* z, std::size_t n,
                             double A, double B, double C,
                             double l, double k, double r, double Z);

    // out[i] = hypot(ax[i]-bx[i], ay[i]-by[i]).
    void (*norm_diff)(const double* ax, const double* ay, const double* bx,
                      const double* by, double* out, std::size_t n);

    // Squared distance from point (qx, qy) to the polyline (xs[i], ys[i]).
    double (*min_dist_sq_polyline)(double qx, double qy, const double* xs,
                                   const double* ys, std::size_t n);
};

const batch_ops& scalar();
// AVX2 implementation, or nullptr when unsupported by the build or the CPU.
const batch_ops* avx2();
// Best implementation available at runtime.
const batch_ops& active();

}  // namespace conescan::kernels
