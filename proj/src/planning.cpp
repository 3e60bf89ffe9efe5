#include "conescan/planning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "conescan/detail/spiral.hpp"
#include "conescan/errors.hpp"
#include "conescan/kinematics.hpp"

namespace conescan {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << what << " must be positive";
        throw parse_error(msg.str());
    }
}

void check_speed_and_pitch(double tip_speed, double pitch, const requirement_spec& req,
                           double scale) {
    if (tip_speed > req.max_tip_speed * scale * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "tip speed " << tip_speed << " mm/s exceeds limit "
            << req.max_tip_speed * scale << " mm/s";
        throw constraint_error(msg.str());
    }
    if (pitch > req.max_pitch * scale * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "pitch " << pitch << " mm exceeds limit " << req.max_pitch * scale << " mm";
        throw constraint_error(msg.str());
    }
}

// Walks a vertex chain at constant speed, emitting samples every dt.
trajectory walk_polyline(const std::vector<std::pair<double, double>>& verts,
                         double tip_speed, double dt) {
    std::vector<double> cum(verts.size(), 0.0);
    for (std::size_t i = 1; i < verts.size(); ++i) {
        double dx = verts[i].first - verts[i - 1].first;
        double dy = verts[i].second - verts[i - 1].second;
        cum[i] = cum[i - 1] + std::hypot(dx, dy);
    }
    double total = cum.back();
    double t_end = total / tip_speed;
    std::size_t n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9)) + 1;

    trajectory traj;
    traj.samples.resize(n);
    std::size_t seg = 1;
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) * dt;
        double s = std::min(t * tip_speed, total);
        while (seg + 1 < verts.size() && cum[seg] < s)
            ++seg;
        double span = cum[seg] - cum[seg - 1];
        double u = span > 0.0 ? (s - cum[seg - 1]) / span : 0.0;
        u = std::clamp(u, 0.0, 1.0);
        double x = verts[seg - 1].first + u * (verts[seg].first - verts[seg - 1].first);
        double y = verts[seg - 1].second + u * (verts[seg].second - verts[seg - 1].second);
        traj.samples[i] = {t, x, y};
    }
    return traj;
}

}  // namespace

double cam_program::forward_duration() const {
    return setpoints.empty() ? 0.0 : setpoints.back().t;
}

double cam_program::total_duration() const {
    return forward_duration() + (rewind.present ? rewind.duration : 0.0);
}

double cam_program::omega_at(double t) const {
    if (setpoints.empty())
        return 0.0;
    if (t <= setpoints.front().t)
        return setpoints.front().omega_cam;
    double fwd_end = setpoints.back().t;
    if (t > fwd_end) {
        if (rewind.present && t <= fwd_end + rewind.duration + 1e-9)
            return -rewind.omega;
        return 0.0;
    }
    auto it = std::lower_bound(setpoints.begin(), setpoints.end(), t,
                               [](const program_setpoint& sp, double tt) { return sp.t < tt; });
    if (it->t == t)
        return it->omega_cam;
    const program_setpoint& b = *it;
    const program_setpoint& a = *(it - 1);
    double u = (t - a.t) / (b.t - a.t);
    return a.omega_cam + u * (b.omega_cam - a.omega_cam);
}

double cam_program::forward_angle() const {
    double phi = 0.0;
    for (std::size_t i = 1; i < setpoints.size(); ++i) {
        phi += 0.5 * (setpoints[i].omega_cam + setpoints[i - 1].omega_cam) *
               (setpoints[i].t - setpoints[i - 1].t);
    }
    return phi;
}

double cam_program::forward_turns() const { return forward_angle() / two_pi; }

void cam_program::validate() const {
    if (setpoints.empty())
        throw parse_error("cam program: no setpoints");
    if (setpoints.front().t != 0.0)
        throw parse_error("cam program: first setpoint must be at t = 0");
    for (std::size_t i = 0; i < setpoints.size(); ++i) {
        const auto& sp = setpoints[i];
        if (!std::isfinite(sp.t) || !std::isfinite(sp.omega_cam) || sp.omega_cam < 0.0)
            throw parse_error("cam program: setpoints need finite t and omega_cam >= 0");
        if (i > 0 && !(sp.t > setpoints[i - 1].t))
            throw parse_error("cam program: setpoint times must be strictly increasing");
    }
    if (!(gear_ratio_motor_per_cam > 0.0))
        throw parse_error("cam program: gear ratio must be positive");
    if (rewind.present && (!(rewind.duration > 0.0) || rewind.omega < 0.0))
        throw parse_error("cam program: rewind needs positive duration and omega >= 0");
}

scan_plan plan_spiral(double pitch, double outer_radius, double tip_speed, double dt,
                      const requirement_spec& req, double scale) {
    require_positive(pitch, "pitch");
    require_positive(outer_radius, "outer radius");
    require_positive(tip_speed, "tip speed");
    require_positive(dt, "dt");
    require_positive(scale, "scale");
    check_speed_and_pitch(tip_speed, pitch, req, scale);

    double c = pitch / two_pi;
    double phi_end = outer_radius / c;
    double total = detail::spiral_arc_length(c, phi_end);
    double t_end = total / tip_speed;
    std::size_t n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9)) + 1;

    scan_plan plan;
    plan.pattern = scan_pattern::spiral;
    plan.pitch = pitch;
    plan.tip_speed = tip_speed;
    plan.traj.label = "spiral";
    plan.traj.scale = scale;
    plan.traj.samples.resize(n);
    double phi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) * dt;
        phi = detail::spiral_phi_at_arc(c, tip_speed * t, phi);
        double rho = c * phi;
        plan.traj.samples[i] = {t, rho * std::cos(phi), rho * std::sin(phi)};
    }
    return plan;
}

scan_plan plan_raster(double line_pitch, double width, double height, double tip_speed,
                      double dt, const requirement_spec& req, double scale) {
    require_positive(line_pitch, "line pitch");
    require_positive(width, "width");
    require_positive(height, "height");
    require_positive(tip_speed, "tip speed");
    require_positive(dt, "dt");
    require_positive(scale, "scale");
    check_speed_and_pitch(tip_speed, line_pitch, req, scale);

    int strokes = static_cast<int>(std::ceil(height / line_pitch - 1e-9)) + 1;
    double dy = height / static_cast<double>(strokes - 1);
    std::vector<std::pair<double, double>> verts;
    verts.reserve(2 * static_cast<std::size_t>(strokes));
    for (int j = 0; j < strokes; ++j) {
        // Alternating stroke direction; the previous stroke ends at this
        // stroke's start x, so consecutive vertices form the vertical connector.
        double y = -0.5 * height + dy * j;
        double x0 = (j % 2 == 0) ? -0.5 * width : 0.5 * width;
        verts.emplace_back(x0, y);
        verts.emplace_back(-x0, y);
    }

    scan_plan plan;
    plan.pattern = scan_pattern::raster;
    plan.pitch = dy;
    plan.tip_speed = tip_speed;
    plan.traj = walk_polyline(verts, tip_speed, dt);
    plan.traj.label = "raster";
    plan.traj.scale = scale;
    return plan;
}

namespace {

// Cam speed that keeps the tip at linear speed v at cam angle phi, capped.
double speed_matched_omega(double phi, double v, double cap, const conic_profile& profile,
                           const design_params& p) {
    double d = p.eta * phi / two_pi;
    double z = solve_deflection(d, profile, p);
    double h = 1e-6;
    double d_lo = std::max(d - h, 0.0);
    double dzdd = (solve_deflection(d + h, profile, p) - solve_deflection(d_lo, profile, p)) /
                  (d + h - d_lo);
    double dzdphi = dzdd * p.eta / two_pi;
    double den = std::hypot(z, dzdphi);
    if (den * cap < v)
        return cap;
    return v / den;
}

}  // namespace

cam_program constant_speed_cam_program(const conic_profile& profile, const design_params& p,
                                       double tip_speed, double omega_cap, double dt,
                                       const requirement_spec& req) {
    require_positive(tip_speed, "tip speed");
    require_positive(omega_cap, "omega cap");
    require_positive(dt, "dt");
    if (tip_speed > req.max_tip_speed * p.scale * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "tip speed " << tip_speed << " mm/s exceeds limit "
            << req.max_tip_speed * p.scale << " mm/s";
        throw constraint_error(msg.str());
    }

    cam_program prog;
    double phi = 0.0;
    double omega = speed_matched_omega(phi, tip_speed, omega_cap, profile, p);
    prog.setpoints.push_back({0.0, omega});

    double max_t = req.max_duration * 10.0;  // hard stop against runaway loops
    for (std::size_t step = 1;; ++step) {
        double t = static_cast<double>(step) * dt;
        if (t > req.max_duration) {
            std::ostringstream msg;
            msg << "cam speed cap " << omega_cap << " rad/s cannot finish the scan within "
                << req.max_duration << " s";
            throw constraint_error(msg.str());
        }
        if (t > max_t)
            throw numeric_error("cam program generation did not terminate");

        // Trapezoid predictor-corrector so that simulate_scan's accumulation
        // phi += 0.5*dt*(omega_prev + omega_cur) lands on the same angles.
        double omega_next = omega;
        double phi_next = phi + dt * omega;
        for (int it = 0; it < 3; ++it) {
            omega_next = speed_matched_omega(phi_next, tip_speed, omega_cap, profile, p);
            phi_next = phi + 0.5 * dt * (omega + omega_next);
        }
        prog.setpoints.push_back({t, omega_next});
        phi = phi_next;
        omega = omega_next;

        double d = p.eta * phi / two_pi;
        if (solve_deflection(d, profile, p) >= p.Z)
            break;
    }

    prog.rewind.present = true;
    prog.rewind.duration = 8.0;
    prog.rewind.omega = phi / 8.0;
    return prog;
}

coverage_result coverage_report(const trajectory& traj, double fov_half,
                                const requirement_spec& req) {
    traj.validate();
    if (fov_half < 0.0 || !std::isfinite(fov_half))
        throw parse_error("coverage: field-of-view half-width must be >= 0");

    double scale = traj.scale > 0.0 ? traj.scale : 1.0;
    double max_r = 0.0;
    for (const auto& s : traj.samples)
        max_r = std::max(max_r, std::hypot(s.x, s.y));

    coverage_result res;
    res.covered_radius = max_r + fov_half;
    res.covered_area = std::numbers::pi * res.covered_radius * res.covered_radius;

    // Unwrap the polar angle to decide between spiral passes (adjacent turns)
    // and raster passes (adjacent stroke levels).
    std::vector<double> phis, rhos;
    phis.reserve(traj.samples.size());
    double prev_angle = 0.0;
    double unwrapped = 0.0;
    bool have_prev = false;
    for (const auto& s : traj.samples) {
        double r = std::hypot(s.x, s.y);
        if (r < 1e-9)
            continue;
        double a = std::atan2(s.y, s.x);
        if (have_prev) {
            double diff = a - prev_angle;
            while (diff > std::numbers::pi)
                diff -= two_pi;
            while (diff < -std::numbers::pi)
                diff += two_pi;
            unwrapped += diff;
        } else {
            unwrapped = a;
            have_prev = true;
        }
        prev_angle = a;
        phis.push_back(unwrapped);
        rhos.push_back(r);
    }

    double winding = phis.empty() ? 0.0 : std::fabs(phis.back() - phis.front());
    double spacing = 0.0;
    if (winding > 2.0 * two_pi) {
        // Spiral: gap between successive turns along each ray, rho(phi+2pi) - rho(phi).
        for (std::size_t i = 0; i < phis.size(); ++i) {
            double target = phis[i] + two_pi;
            if (target > phis.back())
                break;
            auto it = std::lower_bound(phis.begin(), phis.end(), target);
            std::size_t j = static_cast<std::size_t>(it - phis.begin());
            double rho_out;
            if (j == 0) {
                rho_out = rhos.front();
            } else if (phis[j] == phis[j - 1]) {
                rho_out = rhos[j];
            } else {
                double u = (target - phis[j - 1]) / (phis[j] - phis[j - 1]);
                rho_out = rhos[j - 1] + u * (rhos[j] - rhos[j - 1]);
            }
            spacing = std::max(spacing, rho_out - rhos[i]);
        }
    } else {
        // Raster: gap between adjacent stroke levels.  Strokes dwell on one y
        // for many samples; connector samples appear only once each and are
        // filtered out by the repeat count.
        std::map<long long, int> counts;
        for (const auto& s : traj.samples)
            counts[llround(s.y * 1e7)]++;
        std::vector<double> levels;
        for (const auto& [qy, cnt] : counts) {
            if (cnt >= 5)
                levels.push_back(static_cast<double>(qy) * 1e-7);
        }
        for (std::size_t i = 1; i < levels.size(); ++i)
            spacing = std::max(spacing, levels[i] - levels[i - 1]);
    }
    res.max_spacing = spacing;

    double min_area = req.min_area * scale * scale;
    double max_pitch = req.max_pitch * scale;
    res.report.entries.push_back(
        {"covered_area_mm2", res.covered_area, min_area, res.covered_area >= min_area});
    res.report.entries.push_back(
        {"max_spacing_mm", spacing, max_pitch, spacing <= max_pitch * (1.0 + 1e-12)});
    return res;
}

}  // namespace conescan
