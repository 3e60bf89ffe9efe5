#pragma once

#include <utility>

#include "conescan/geometry.hpp"
#include "conescan/profile.hpp"
#include "conescan/trajectory.hpp"

namespace conescan {

struct cam_program;  // defined in planning.hpp

// Inverts the contact relation: finds the tip deflection z at which the cam
// profile value matches the forward-geometry f for heel displacement d.
// The gap g(z) = profile(s(z,d)) - f(z,d) increases monotonically in z, so a
// bracketing bisection on [0, 1.2*Z] converges unconditionally.  If g(0) >= 0
// the cone is preloaded against the apex stop and z = 0 is returned.  Throws
// numeric_error when no contact exists inside the bracket.
double solve_deflection(double d, const conic_profile& profile, const design_params& p);

// Tip position in the scan plane for cam angle phi (rad): d = eta*phi/(2*pi),
// the tip sits at radius z along direction phi.
std::pair<double, double> tip_position(double phi, const conic_profile& profile,
                                       const design_params& p);

// Integrates a cam program into a tip trajectory.  omega(t) is piecewise
// linear between setpoints; the cam angle accumulates with the trapezoid rule
// phi += 0.5*dt*(omega_prev + omega_cur), which makes a program generated at
// the same dt reproduce its own internal angles exactly.
trajectory simulate_scan(const cam_program& program, const conic_profile& profile,
                         const design_params& p, double dt);

// Multiplies x and y (not t) by factor and updates the scale metadata.
trajectory rescale_trajectory(const trajectory& traj, double factor);

}  // namespace conescan
