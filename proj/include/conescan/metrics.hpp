#pragma once

#include <vector>

#include "conescan/trajectory.hpp"

namespace conescan {

// Linear interpolation of a trajectory onto the given times.  Throws
// parse_error if any requested time lies outside the trajectory span.
trajectory resample(const trajectory& traj, const std::vector<double>& times);

struct mismatch_report {
    double D;          // mm, time-averaged position mismatch
    double C;          // mm/s, time-averaged velocity mismatch
    double t_f;        // s, end of the common time window
    int n_samples;     // grid points used
};

// Time-averaged position and velocity mismatch between two trajectories,
// evaluated on a common uniform grid (default 1/12 s) over their overlapping
// time window: D = (1/T) * integral ||p_a - p_b|| dt and C likewise for the
// finite-difference velocities (central differences, one-sided at the ends).
mismatch_report mismatch(const trajectory& image, const trajectory& probe,
                         double grid_dt = 1.0 / 12.0);
double mismatch_D(const trajectory& image, const trajectory& probe,
                  double grid_dt = 1.0 / 12.0);
double mismatch_C(const trajectory& image, const trajectory& probe,
                  double grid_dt = 1.0 / 12.0);

struct match_ratio_report {
    double ratio;    // matched / (matched + mismatched)
    int matched;
    int mismatched;
    int irrelevant;  // reference dots beyond the trajectory's extent
};

// Scores a trajectory against the ideal Archimedean spiral of the given pitch
// out to outer_radius.  Reference dots are laid along the spiral at constant
// arc spacing; a dot is matched when the polyline passes within
// half_thickness of it, and dots beyond the trajectory's outermost radius do
// not count either way.
match_ratio_report match_ratio(const trajectory& traj, double pitch, double outer_radius,
                               double dot_spacing = 0.05, double half_thickness = 0.015);

struct drag_params {
    double stick_radius = 0.05;  // mm, dead zone below which the image sticks
    double lag_time = 0.05;      // s, first-order creep time constant
    double creep_gain = 1.0;     // fraction of the excess pull recovered per lag
    void validate() const;
};

// First-order stick/creep surrogate of tissue being dragged by the probe: the
// image point follows the probe only once pulled beyond stick_radius, closing
// the excess distance with gain creep_gain*(1 - exp(-dt/lag_time)) per step.
// Requires a uniformly sampled probe trajectory; deterministic, and the image
// path length never exceeds the probe path length.
trajectory apply_drag_surrogate(const trajectory& probe, const drag_params& params = {});

}  // namespace conescan
