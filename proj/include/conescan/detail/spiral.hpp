#pragma once

#include <cmath>

namespace conescan::detail {

// Arc length of the Archimedean spiral rho = c*phi from 0 to phi:
//   L(phi) = c/2 * (phi*sqrt(1+phi^2) + asinh(phi))
inline double spiral_arc_length(double c, double phi) {
    return 0.5 * c * (phi * std::sqrt(1.0 + phi * phi) + std::asinh(phi));
}

inline double spiral_arc_derivative(double c, double phi) {
    return c * std::sqrt(1.0 + phi * phi);
}

// Inverts the arc length with Newton iterations seeded by a previous angle
// (monotone continuation along the spiral).
inline double spiral_phi_at_arc(double c, double s, double phi_seed) {
    double phi = phi_seed;
    if (!(phi > 0.0))
        phi = std::sqrt(2.0 * s / c);  // small-angle start, L ~ c*phi^2/2
    for (int it = 0; it < 60; ++it) {
        double err = spiral_arc_length(c, phi) - s;
        double step = err / spiral_arc_derivative(c, phi);
        phi -= step;
        if (phi < 0.0)
            phi = 0.0;
        if (std::fabs(step) < 1e-13 * (1.0 + phi))
            break;
    }
    return phi;
}

}  // namespace conescan::detail
