#include <cmath>

#include "conescan/kernels.hpp"

// Reference implementations.  The AVX2 variants mirror these loops
// operation-for-operation; keep the arithmetic forms in sync.

namespace conescan::kernels {

namespace {

inline void contact_one(double z, double d, double l, double k, double r, double& s,
                        double& f) {
    double sin_t = z / r;
    double cos_t = std::sqrt(1.0 - sin_t * sin_t);
    double dpk = d + k;
    s = sin_t * dpk + l * cos_t - l;
    double ls = l + s;
    f = std::sqrt(dpk * dpk + l * l - ls * ls) - k;
}

void contact_sf_impl(const double* z, const double* d, double* s, double* f, std::size_t n,
                     double l, double k, double r) {
    for (std::size_t i = 0; i < n; ++i)
        contact_one(z[i], d[i], l, k, r, s[i], f[i]);
}

inline double gap_one(double z, double d, double A, double B, double C, double l, double k,
                      double r) {
    double s, f;
    contact_one(z, d, l, k, r, s, f);
    return (A * s + B) * s + C - f;
}

long solve_impl(const double* d, double* z, std::size_t n, double A, double B, double C,
                double l, double k, double r, double Z) {
    double top = std::min(1.2 * Z, 0.999999 * r);
    for (std::size_t i = 0; i < n; ++i) {
        if (gap_one(0.0, d[i], A, B, C, l, k, r) >= 0.0) {
            z[i] = 0.0;  // preloaded against the apex stop
            continue;
        }
        if (gap_one(top, d[i], A, B, C, l, k, r) < 0.0)
            return static_cast<long>(i);  // contact lost inside the bracket
        double lo = 0.0, hi = top;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            if (gap_one(mid, d[i], A, B, C, l, k, r) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        z[i] = 0.5 * (lo + hi);
    }
    return -1;
}

void norm_diff_impl(const double* ax, const double* ay, const double* bx, const double* by,
                    double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double dx = ax[i] - bx[i];
        double dy = ay[i] - by[i];
        out[i] = std::sqrt(dx * dx + dy * dy);
    }
}

double min_dist_sq_impl(double qx, double qy, const double* xs, const double* ys,
                        std::size_t n) {
    if (n == 1) {
        double dx = qx - xs[0], dy = qy - ys[0];
        return dx * dx + dy * dy;
    }
    double best = 1e300;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double vx = xs[i + 1] - xs[i];
        double vy = ys[i + 1] - ys[i];
        double wx = qx - xs[i];
        double wy = qy - ys[i];
        double len2 = vx * vx + vy * vy;
        double t = len2 > 0.0 ? (wx * vx + wy * vy) / len2 : 0.0;
        t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
        double dx = wx - t * vx;
        double dy = wy - t * vy;
        double d2 = dx * dx + dy * dy;
        if (d2 < best)
            best = d2;
    }
    return best;
}

constexpr batch_ops scalar_ops = {"scalar", contact_sf_impl, solve_impl, norm_diff_impl,
                                  min_dist_sq_impl};

}  // namespace

const batch_ops& scalar() { return scalar_ops; }

}  // namespace conescan::kernels
