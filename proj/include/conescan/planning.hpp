#pragma once

#include <string>
#include <vector>

#include "conescan/geometry.hpp"
#include "conescan/profile.hpp"
#include "conescan/trajectory.hpp"

namespace conescan {

struct program_setpoint {
    double t;          // s
    double omega_cam;  // rad/s, >= 0 during the forward phase
};

struct rewind_phase {
    bool present = false;
    double duration = 0.0;  // s
    double omega = 0.0;     // rad/s, magnitude of the reverse speed
};

struct cam_program {
    std::vector<program_setpoint> setpoints;       // forward phase
    double gear_ratio_motor_per_cam = 24.0 / 11.0;
    rewind_phase rewind;

    double forward_duration() const;
    double total_duration() const;
    // Signed cam speed at time t: linear interpolation across the forward
    // setpoints, then -rewind.omega on (forward_end, forward_end + duration].
    double omega_at(double t) const;
    // Cam angle at the end of the forward phase (trapezoid over setpoints).
    double forward_angle() const;
    double forward_turns() const;
    void validate() const;
};

enum class scan_pattern { spiral, raster };

struct scan_plan {
    scan_pattern pattern;
    double pitch;      // mm, spiral pitch or raster line pitch
    double tip_speed;  // mm/s
    trajectory traj;
};

// Constant-linear-speed Archimedean spiral r = pitch/(2*pi) * phi sampled at
// dt, spiralling outward from the origin to outer_radius.  Throws
// constraint_error when tip_speed or pitch exceed the requirement limits at
// the given scale, parse_error on non-positive arguments.
scan_plan plan_spiral(double pitch, double outer_radius, double tip_speed, double dt,
                      const requirement_spec& req = {}, double scale = 1.0);

// Boustrophedon raster covering width x height centred on the origin:
// ceil(height/pitch) + 1 horizontal strokes joined by vertical connectors,
// walked at constant speed with instantaneous corner turns.
scan_plan plan_raster(double line_pitch, double width, double height, double tip_speed,
                      double dt, const requirement_spec& req = {}, double scale = 1.0);

// Generates the cam program that drives the tip at constant linear speed
// along the device's natural spiral.  omega is capped at omega_cap near the
// centre where the required cam rate diverges; the forward phase ends when
// the deflection reaches Z, followed by a constant-speed rewind sized to
// finish in 8 s.  Motor speed is cam speed times the 24:11 gear ratio.
cam_program constant_speed_cam_program(const conic_profile& profile, const design_params& p,
                                       double tip_speed, double omega_cap = 3.0,
                                       double dt = 0.01, const requirement_spec& req = {});

struct coverage_result {
    double covered_radius;  // mm, max sample radius + field-of-view credit
    double covered_area;    // mm^2
    double max_spacing;     // mm, worst adjacent-pass gap
    constraint_report report;
};

// Measures covered area and worst pass-to-pass spacing for a trajectory and
// checks them against the requirement.  fov_half is the half-width of the
// imaging field credited beyond the outermost sample.
coverage_result coverage_report(const trajectory& traj, double fov_half,
                                const requirement_spec& req = {});

}  // namespace conescan
