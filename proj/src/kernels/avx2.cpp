#include <cmath>

#include "conescan/kernels.hpp"

// 4-wide AVX2 versions of the scalar kernels.  This translation unit is the
// only one compiled with -mavx2 -mfma; everything else stays baseline so the
// binary runs on any x86-64, with the dispatcher checking CPU support first.

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace conescan::kernels {

namespace {

struct contact_consts {
    __m256d inv_r, l, k, one;
};

// s and f for four lanes; d-dependent terms (d+k, e^2) are precomputed.
inline void contact4(__m256d z, __m256d dpk, __m256d e2, const contact_consts& cc,
                     __m256d& s, __m256d& f) {
    __m256d sin_t = _mm256_mul_pd(z, cc.inv_r);
    __m256d cos_t = _mm256_sqrt_pd(_mm256_fnmadd_pd(sin_t, sin_t, cc.one));
    s = _mm256_sub_pd(_mm256_fmadd_pd(sin_t, dpk, _mm256_mul_pd(cc.l, cos_t)), cc.l);
    __m256d ls = _mm256_add_pd(cc.l, s);
    f = _mm256_sub_pd(_mm256_sqrt_pd(_mm256_fnmadd_pd(ls, ls, e2)), cc.k);
}

inline __m256d gap4(__m256d z, __m256d dpk, __m256d e2, const contact_consts& cc, __m256d vA,
                    __m256d vB, __m256d vC) {
    __m256d s, f;
    contact4(z, dpk, e2, cc, s, f);
    __m256d poly = _mm256_fmadd_pd(_mm256_fmadd_pd(vA, s, vB), s, vC);
    return _mm256_sub_pd(poly, f);
}

void contact_sf_impl(const double* z, const double* d, double* s, double* f, std::size_t n,
                     double l, double k, double r) {
    contact_consts cc{_mm256_set1_pd(1.0 / r), _mm256_set1_pd(l), _mm256_set1_pd(k),
                      _mm256_set1_pd(1.0)};
    __m256d l2 = _mm256_set1_pd(l * l);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vd = _mm256_loadu_pd(d + i);
        __m256d dpk = _mm256_add_pd(vd, cc.k);
        __m256d e2 = _mm256_fmadd_pd(dpk, dpk, l2);
        __m256d vs, vf;
        contact4(_mm256_loadu_pd(z + i), dpk, e2, cc, vs, vf);
        _mm256_storeu_pd(s + i, vs);
        _mm256_storeu_pd(f + i, vf);
    }
    if (i < n) {
        double zt[4] = {0, 0, 0, 0}, dt[4] = {0, 0, 0, 0}, st[4], ft[4];
        for (std::size_t j = i; j < n; ++j) {
            zt[j - i] = z[j];
            dt[j - i] = d[j];
        }
        contact_sf_impl(zt, dt, st, ft, 4, l, k, r);
        for (std::size_t j = i; j < n; ++j) {
            s[j] = st[j - i];
            f[j] = ft[j - i];
        }
    }
}

long solve_impl(const double* d, double* z, std::size_t n, double A, double B, double C,
                double l, double k, double r, double Z) {
    contact_consts cc{_mm256_set1_pd(1.0 / r), _mm256_set1_pd(l), _mm256_set1_pd(k),
                      _mm256_set1_pd(1.0)};
    __m256d l2 = _mm256_set1_pd(l * l);
    __m256d vA = _mm256_set1_pd(A), vB = _mm256_set1_pd(B), vC = _mm256_set1_pd(C);
    double top = std::min(1.2 * Z, 0.999999 * r);
    __m256d vtop = _mm256_set1_pd(top);
    __m256d zero = _mm256_setzero_pd();
    __m256d half = _mm256_set1_pd(0.5);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vd = _mm256_loadu_pd(d + i);
        __m256d dpk = _mm256_add_pd(vd, cc.k);
        __m256d e2 = _mm256_fmadd_pd(dpk, dpk, l2);

        __m256d g0 = gap4(zero, dpk, e2, cc, vA, vB, vC);
        __m256d pre = _mm256_cmp_pd(g0, zero, _CMP_GE_OQ);  // apex preload lanes

        __m256d g_top = gap4(vtop, dpk, e2, cc, vA, vB, vC);
        __m256d lost = _mm256_andnot_pd(pre, _mm256_cmp_pd(g_top, zero, _CMP_LT_OQ));
        int lost_mask = _mm256_movemask_pd(lost);
        if (lost_mask != 0) {
            for (int lane = 0; lane < 4; ++lane)
                if (lost_mask & (1 << lane))
                    return static_cast<long>(i + static_cast<std::size_t>(lane));
        }

        // Preloaded lanes collapse to [0, 0] so the shared bisection leaves
        // them at exactly zero; the rest bisect [0, top] in lockstep.
        __m256d lo = zero;
        __m256d hi = _mm256_blendv_pd(vtop, zero, pre);
        for (int it = 0; it < 60; ++it) {
            __m256d mid = _mm256_mul_pd(half, _mm256_add_pd(lo, hi));
            __m256d g = gap4(mid, dpk, e2, cc, vA, vB, vC);
            __m256d below = _mm256_cmp_pd(g, zero, _CMP_LT_OQ);
            lo = _mm256_blendv_pd(lo, mid, below);
            hi = _mm256_blendv_pd(mid, hi, below);
        }
        _mm256_storeu_pd(z + i, _mm256_mul_pd(half, _mm256_add_pd(lo, hi)));
    }
    if (i < n) {
        long rc = scalar().solve_deflection(d + i, z + i, n - i, A, B, C, l, k, r, Z);
        if (rc >= 0)
            return rc + static_cast<long>(i);
    }
    return -1;
}

void norm_diff_impl(const double* ax, const double* ay, const double* bx, const double* by,
                    double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(ax + i), _mm256_loadu_pd(bx + i));
        __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ay + i), _mm256_loadu_pd(by + i));
        __m256d sum = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(sum));
    }
    for (; i < n; ++i) {
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
    __m256d vqx = _mm256_set1_pd(qx), vqy = _mm256_set1_pd(qy);
    __m256d zero = _mm256_setzero_pd(), one = _mm256_set1_pd(1.0);
    __m256d best = _mm256_set1_pd(1e300);
    std::size_t i = 0;
    for (; i + 5 <= n; i += 4) {  // segments i .. i+3 need points up to i+4
        __m256d x0 = _mm256_loadu_pd(xs + i);
        __m256d y0 = _mm256_loadu_pd(ys + i);
        __m256d vx = _mm256_sub_pd(_mm256_loadu_pd(xs + i + 1), x0);
        __m256d vy = _mm256_sub_pd(_mm256_loadu_pd(ys + i + 1), y0);
        __m256d wx = _mm256_sub_pd(vqx, x0);
        __m256d wy = _mm256_sub_pd(vqy, y0);
        __m256d len2 = _mm256_fmadd_pd(vx, vx, _mm256_mul_pd(vy, vy));
        __m256d dot = _mm256_fmadd_pd(wx, vx, _mm256_mul_pd(wy, vy));
        __m256d t = _mm256_div_pd(dot, len2);
        t = _mm256_blendv_pd(t, zero, _mm256_cmp_pd(len2, zero, _CMP_LE_OQ));
        t = _mm256_max_pd(zero, _mm256_min_pd(one, t));
        __m256d dx = _mm256_fnmadd_pd(t, vx, wx);
        __m256d dy = _mm256_fnmadd_pd(t, vy, wy);
        best = _mm256_min_pd(best, _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double out = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
    for (; i + 1 < n; ++i) {
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
        if (d2 < out)
            out = d2;
    }
    return out;
}

constexpr batch_ops avx2_ops = {"avx2", contact_sf_impl, solve_impl, norm_diff_impl,
                                min_dist_sq_impl};

}  // namespace

const batch_ops* avx2() {
    static const batch_ops* ptr = []() -> const batch_ops* {
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
            return &avx2_ops;
        return nullptr;
    }();
    return ptr;
}

}  // namespace conescan::kernels

#else  // no AVX2 at compile time (e.g. non-x86 targets): scalar fallback only

namespace conescan::kernels {

const batch_ops* avx2() { return nullptr; }

}  // namespace conescan::kernels

#endif
