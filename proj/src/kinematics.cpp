#include "conescan/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "conescan/errors.hpp"
#include "conescan/kernels.hpp"
#include "conescan/planning.hpp"

namespace conescan {

namespace {

// Gap between the cam profile and the cone surface at deflection z; the
// contact point is the root g(z) = 0.  g is strictly increasing in z.
double contact_gap(double z, double d, const conic_profile& profile,
                   const design_params& p) {
    contact_geometry c = contact_from_deflection(z, d, p);
    return profile.A * c.s * c.s + profile.B * c.s + profile.C - c.f;
}

}  // namespace

double solve_deflection(double d, const conic_profile& profile, const design_params& p) {
    if (!std::isfinite(d) || d < 0.0)
        throw parse_error("solve_deflection: heel displacement must be finite and >= 0");

    double lo = 0.0;
    double g_lo = contact_gap(lo, d, profile, p);
    if (g_lo >= 0.0)
        return 0.0;  // cone preloaded against the apex stop

    double hi = std::min(1.2 * p.Z, 0.999999 * p.r);  // keep asin(z/r) in domain
    double g_hi = contact_gap(hi, d, profile, p);
    if (g_hi < 0.0) {
        std::ostringstream msg;
        msg << "solve_deflection: contact lost at d = " << d
            << " (gap " << g_lo << " at z = 0, " << g_hi << " at z = " << hi << ")";
        throw numeric_error(msg.str());
    }

    for (int it = 0; it < 200 && (hi - lo) > 1e-7; ++it) {
        double mid = 0.5 * (lo + hi);
        if (contact_gap(mid, d, profile, p) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> tip_position(double phi, const conic_profile& profile,
                                       const design_params& p) {
    double d = p.eta * phi / (2.0 * std::numbers::pi);
    double z = solve_deflection(d, profile, p);
    return {z * std::cos(phi), z * std::sin(phi)};
}

trajectory simulate_scan(const cam_program& program, const conic_profile& profile,
                         const design_params& p, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw parse_error("simulate_scan: dt must be positive");
    program.validate();

    double t_end = program.total_duration();
    std::size_t n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9)) + 1;

    std::vector<double> phis(n), ds(n);
    double phi = 0.0;
    double omega_prev = program.omega_at(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            double t = static_cast<double>(i) * dt;
            double omega = program.omega_at(t);
            phi += 0.5 * dt * (omega_prev + omega);
            omega_prev = omega;
        }
        phis[i] = phi;
        ds[i] = p.eta * phi / (2.0 * std::numbers::pi);
    }

    std::vector<double> zs(n);
    long bad = kernels::active().solve_deflection(ds.data(), zs.data(), n, profile.A,
                                                  profile.B, profile.C, p.l, p.k, p.r, p.Z);
    if (bad >= 0) {
        std::ostringstream msg;
        msg << "simulate_scan: contact lost at t = " << static_cast<double>(bad) * dt
            << " s (d = " << ds[static_cast<std::size_t>(bad)] << ")";
        throw numeric_error(msg.str());
    }

    trajectory traj;
    traj.scale = p.scale;
    traj.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        traj.samples[i] = {static_cast<double>(i) * dt, zs[i] * std::cos(phis[i]),
                           zs[i] * std::sin(phis[i])};
    }
    return traj;
}

trajectory rescale_trajectory(const trajectory& traj, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw parse_error("rescale_trajectory: factor must be positive");
    trajectory out = traj;
    out.scale = traj.scale * factor;
    for (auto& s : out.samples) {
        s.x *= factor;
        s.y *= factor;
    }
    return out;
}

}  // namespace conescan
