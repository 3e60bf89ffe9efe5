#pragma once

#include <string>

namespace conescan {

// Fixed mechanism constants. All lengths in mm; `scale` is the uniform geometric
// scale factor (1 = unity design, 5 = the 5:1 bench prototype).
struct design_params {
    double l = 1.4;    // cable/probe half-offset length
    double k = 7.0;    // cam axial reference length
    double r = 20.0;   // lever arm from pivot O to tip P
    double alpha = 0.15;  // spiral pitch, target line spacing per turn
    double eta = 0.5;     // cam translation per cam revolution
    double Z = 1.0;       // design deflection range upper bound
    double scale = 1.0;
    // Inner tube radius used by the margin check; overridable via config.
    double tube_radius = 2.5;

    void validate() const;                 // throws parse_error on bad values
    design_params scaled(double factor) const;  // all lengths multiplied, scale updated
    double d_max() const { return eta / alpha * Z; }  // cam travel at z = Z
};

// Scan requirements (unity scale; speed/length bounds multiply by design scale).
struct requirement_spec {
    double max_tip_speed = 0.5;        // mm/s
    double target_pitch = 0.15;        // mm
    double max_pitch = 0.2;            // mm
    double min_area = 3.0;             // mm^2
    double max_duration = 180.0;       // s
    double target_duration = 60.0;     // s
    double max_height_change = 0.1;    // mm
    double max_inclination_deg = 5.0;  // deg (soft target)
    double hard_max_inclination_deg = 10.0;
    double nominal_tip_distance = 0.2;  // mm, admissible 0.2..0.3
    double min_tip_distance = 0.2;
    double max_tip_distance = 0.3;

    void validate() const;  // targets must not exceed hard limits
};

// One solved contact state of the cam tip against the cone face.
struct contact_geometry {
    double d;      // cam translation
    double z;      // tip radial deflection
    double e;      // hypotenuse length sqrt((d+k)^2 + l^2)
    double gamma;  // base angle, rad
    double theta;  // cone inclination, rad
    double s;      // contact abscissa along the cone face
    double f;      // contact ordinate (geometric profile height)
};

struct tip_pose {
    double z;                // radial deflection
    double height;           // axial retreat of the tip from the nominal plane
    double inclination_deg;  // probe inclination
};

// Contact geometry evaluated from (z, d). Throws numeric_error when z exceeds the
// lever arm or the configuration is geometrically impossible.
contact_geometry contact_from_deflection(double z, double d, const design_params& p);

// Target law z = (alpha/eta) * d.
double target_deflection(double d, const design_params& p);

// Clearance between the rotated cone's outer extremity and the tube inner wall,
// with the cam at the design travel d = (eta/alpha) * z.
double radial_margin(double z, const design_params& p);

tip_pose tip_pose_at(double z, const design_params& p);

}  // namespace conescan
