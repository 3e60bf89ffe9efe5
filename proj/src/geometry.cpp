#include "conescan/geometry.hpp"

#include <cmath>

#include "conescan/errors.hpp"

namespace conescan {

void design_params::validate() const {
    if (l <= 0 || k <= 0 || r <= 0 || alpha <= 0 || eta <= 0 || Z <= 0 || scale <= 0 ||
        tube_radius <= 0)
        throw parse_error("design params: all lengths must be strictly positive");
    if (alpha >= eta) throw parse_error("design params: alpha must be smaller than eta");
    if (Z >= r) throw parse_error("design params: deflection range Z must be smaller than r");
}

design_params design_params::scaled(double factor) const {
    if (factor <= 0) throw parse_error("scale factor must be positive");
    design_params q = *this;
    q.l *= factor;
    q.k *= factor;
    q.r *= factor;
    q.alpha *= factor;
    q.eta *= factor;
    q.Z *= factor;
    q.tube_radius *= factor;
    q.scale *= factor;
    return q;
}

void requirement_spec::validate() const {
    if (max_inclination_deg > hard_max_inclination_deg)
        throw parse_error("requirements: inclination target exceeds the hard limit");
    if (target_pitch > max_pitch)
        throw parse_error("requirements: target pitch exceeds the pitch limit");
    if (target_duration > max_duration)
        throw parse_error("requirements: target duration exceeds the duration limit");
    if (nominal_tip_distance < min_tip_distance || nominal_tip_distance > max_tip_distance)
        throw parse_error("requirements: nominal tip distance outside the admissible band");
}

contact_geometry contact_from_deflection(double z, double d, const design_params& p) {
    if (z > p.r || z < -p.r)
        throw numeric_error("contact: |z| exceeds lever arm r, asin out of range");
    contact_geometry c;
    c.d = d;
    c.z = z;
    c.e = std::sqrt((d + p.k) * (d + p.k) + p.l * p.l);
    c.gamma = std::asin(p.l / c.e);
    c.theta = std::asin(z / p.r);
    c.s = c.e * std::sin(c.theta + c.gamma) - p.l;
    const double arg = c.e * c.e - (p.l + c.s) * (p.l + c.s);
    if (arg < 0)
        throw numeric_error("contact: geometrically impossible configuration (e^2 < (l+s)^2)");
    c.f = std::sqrt(arg) - p.k;
    return c;
}

double target_deflection(double d, const design_params& p) { return p.alpha / p.eta * d; }

double radial_margin(double z, const design_params& p) {
    const contact_geometry c = contact_from_deflection(z, p.eta / p.alpha * z, p);
    return p.tube_radius - (2.0 * (c.s + p.l) * std::cos(c.theta) - p.l);
}

tip_pose tip_pose_at(double z, const design_params& p) {
    if (z > p.r || z < -p.r) throw numeric_error("tip pose: |z| exceeds lever arm r");
    const double theta = std::asin(z / p.r);
    return {z, p.r * (1.0 - std::cos(theta)), theta * 180.0 / M_PI};
}

}  // namespace conescan
