#include "conescan/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "conescan/errors.hpp"

namespace conescan {
namespace {

// Solves a 3x3 linear system by Gaussian elimination with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> rhs) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::fabs(m[row][col]) > std::fabs(m[piv][col])) piv = row;
        std::swap(m[col], m[piv]);
        std::swap(rhs[col], rhs[piv]);
        if (std::fabs(m[col][col]) < 1e-14)
            throw numeric_error("profile fit: singular normal system (ill-posed sample set)");
        for (int row = col + 1; row < 3; ++row) {
            const double t = m[row][col] / m[col][col];
            for (int j = col; j < 3; ++j) m[row][j] -= t * m[col][j];
            rhs[row] -= t * rhs[col];
        }
    }
    std::array<double, 3> x{};
    for (int row = 2; row >= 0; --row) {
        double acc = rhs[row];
        for (int j = row + 1; j < 3; ++j) acc -= m[row][j] * x[j];
        x[row] = acc / m[row][row];
    }
    return x;
}

// Deflection where the radial margin crosses zero (the positive-margin limit).
double margin_limit_deflection(const design_params& p) {
    const double top = 0.999 * p.r;
    double lo = 0.0;
    if (radial_margin(lo, p) <= 0) return 0.0;
    double hi = lo;
    const double step = std::max(p.Z, 1e-3 * p.r) / 16.0;
    while (hi < top && radial_margin(std::min(hi + step, top), p) > 0) hi += step;
    if (hi >= top) return top;  // margin stays positive over the whole lever range
    double neg = std::min(hi + step, top);
    for (int i = 0; i < 200 && neg - hi > 1e-12; ++i) {
        const double mid = 0.5 * (hi + neg);
        (radial_margin(mid, p) > 0 ? hi : neg) = mid;
    }
    return 0.5 * (hi + neg);
}

}  // namespace

profile_value profile_eval(double s, const conic_profile& profile) {
    return {profile.A * s * s + profile.B * s + profile.C, s < 0 || s > profile.s_max};
}

fit_sample_set samples_from_deflections(const design_params& p,
                                        const std::vector<double>& zs) {
    fit_sample_set set;
    set.params = p;
    set.pairs.reserve(zs.size());
    for (double z : zs) {
        const double d = p.eta / p.alpha * z;
        const contact_geometry c = contact_from_deflection(z, d, p);
        set.pairs.push_back({z, d, c.s, c.f});
    }
    return set;
}

fit_sample_set generate_fit_samples(const design_params& p, int n) {
    if (n < 3) throw parse_error("fit samples: need n >= 3");
    std::vector<double> zs;
    zs.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) zs.push_back(static_cast<double>(i) * p.Z / n);
    return samples_from_deflections(p, zs);
}

conic_profile fit_profile(const fit_sample_set& samples) {
    if (samples.count() < 3) throw parse_error("profile fit: need at least 3 samples");
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0, f0 = 0, f1 = 0, f2 = 0;
    for (const auto& q : samples.pairs) {
        const double s = q.s;
        s1 += s;
        s2 += s * s;
        s3 += s * s * s;
        s4 += s * s * s * s;
        f0 += q.f;
        f1 += q.f * s;
        f2 += q.f * s * s;
    }
    const double n = static_cast<double>(samples.count());
    const auto abc = solve3({{{s4, s3, s2}, {s3, s2, s1}, {s2, s1, n}}}, {f2, f1, f0});

    conic_profile prof;
    prof.A = abc[0];
    prof.B = abc[1];
    prof.C = abc[2];
    const design_params& p = samples.params;
    const double z_limit = margin_limit_deflection(p);
    prof.s_max = contact_from_deflection(z_limit, p.eta / p.alpha * z_limit, p).s;
    for (const auto& q : samples.pairs) prof.s_max = std::max(prof.s_max, q.s);
    prof.f_max = profile_eval(prof.s_max, prof).f;
    return prof;
}

namespace {

// The report must follow the contact beyond the working range, where the
// deflection can exceed solve_deflection's 1.2*Z bracket; same bisection,
// wider ceiling.  If even the widened bracket cannot reach the contact the
// deflection is clamped to the ceiling, which under-reports the (already
// diverging) residual rather than aborting the report.
double report_deflection(double d, const conic_profile& profile, const design_params& p,
                         double z_top) {
    auto gap = [&](double z) {
        const contact_geometry c = contact_from_deflection(z, d, p);
        return profile.A * c.s * c.s + profile.B * c.s + profile.C - c.f;
    };
    if (gap(0.0) >= 0.0) return 0.0;
    if (gap(z_top) < 0.0) return z_top;
    double lo = 0.0, hi = z_top;
    for (int it = 0; it < 200 && (hi - lo) > 1e-7; ++it) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

linearity_report make_linearity_report(const conic_profile& profile, const design_params& p,
                                       int n_grid, double range_factor) {
    if (n_grid < 10) throw parse_error("linearity report: need n_grid >= 10");
    linearity_report rep;
    rep.in_range = range_factor <= 1.0 + 1e-12;
    const double d_top = range_factor * p.d_max();
    const double z_top = std::min(1.2 * std::max(1.0, range_factor) * p.Z, 0.999999 * p.r);
    rep.residual_curve.reserve(static_cast<std::size_t>(n_grid) + 1);
    for (int i = 0; i <= n_grid; ++i) {
        const double d = d_top * i / n_grid;
        const double res = report_deflection(d, profile, p, z_top) - target_deflection(d, p);
        rep.residual_curve.emplace_back(d, res);
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::fabs(res));
    }
    return rep;
}

constraint_report validate_design(const conic_profile& profile, const design_params& p,
                                  const requirement_spec& req) {
    (void)profile;
    const double sc = p.scale;
    constraint_report rep;

    const tip_pose pose = tip_pose_at(p.Z, p);
    rep.entries.push_back({"tip_height_change_mm", pose.height, req.max_height_change * sc,
                           pose.height <= req.max_height_change * sc});
    rep.entries.push_back({"inclination_deg", pose.inclination_deg, req.max_inclination_deg,
                           pose.inclination_deg <= req.max_inclination_deg});
    rep.entries.push_back({"inclination_hard_deg", pose.inclination_deg,
                           req.hard_max_inclination_deg,
                           pose.inclination_deg <= req.hard_max_inclination_deg});

    double margin_min = radial_margin(0.0, p);
    for (int i = 0; i <= 200; ++i)
        margin_min = std::min(margin_min, radial_margin(p.Z * i / 200.0, p));
    rep.entries.push_back({"radial_margin_min_mm", margin_min, 0.0, margin_min > 0.0});

    rep.entries.push_back(
        {"pitch_mm", p.alpha, req.max_pitch * sc, p.alpha <= req.max_pitch * sc});

    const double covered_radius = p.Z + 0.1 * sc;  // half the minimum FOV dimension
    const double area = M_PI * covered_radius * covered_radius;
    rep.entries.push_back(
        {"covered_area_mm2", area, req.min_area * sc * sc, area >= req.min_area * sc * sc});
    return rep;
}

}  // namespace conescan
