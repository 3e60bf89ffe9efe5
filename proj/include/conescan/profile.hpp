#pragma once

#include <string>
#include <vector>

#include "conescan/geometry.hpp"

namespace conescan {

// Quadratic cone-face profile f'(s) = A s^2 + B s + C, valid on [0, s_max].
struct conic_profile {
    double A = 0;  // 1/mm
    double B = 0;  // dimensionless
    double C = 0;  // mm
    double s_max = 0;  // margin-limited maximum contact abscissa
    double f_max = 0;  // profile extent m at s_max
};

struct profile_value {
    double f;             // A s^2 + B s + C
    bool extrapolated;    // s outside [0, s_max]
};

profile_value profile_eval(double s, const conic_profile& profile);

// One (z, d, s, f) fit sample; d obeys the target law, (s, f) the contact equations.
struct fit_sample {
    double z, d, s, f;
};

struct fit_sample_set {
    std::vector<fit_sample> pairs;
    design_params params;
    std::size_t count() const { return pairs.size(); }
};

// Samples the contact geometry along the target law: the apex anchor (0,0,0,0)
// plus z_i = i*Z/n for i = 1..n. The anchor pins the fit to the cone apex the cam
// starts from; see the repository notes on the sampling rule.
fit_sample_set generate_fit_samples(const design_params& p, int n);

// Builds a sample set from explicit deflections (each paired via the target law).
fit_sample_set samples_from_deflections(const design_params& p, const std::vector<double>& zs);

// Least-squares fit of (A, B, C) minimizing sum (f'(s_i) - f_i)^2, with s_max set
// where the radial margin reaches zero and f_max = f'(s_max).
conic_profile fit_profile(const fit_sample_set& samples);

struct linearity_report {
    double max_abs_residual = 0;  // max |z(d) - (alpha/eta) d| over the grid
    std::vector<std::pair<double, double>> residual_curve;  // (d, residual)
    bool in_range = true;
};

// Closed-loop linearity of a fitted design over d in [0, (eta/alpha)Z]; extending
// the grid past the working range sets in_range = false.
linearity_report make_linearity_report(const conic_profile& profile, const design_params& p,
                                       int n_grid, double range_factor = 1.0);

struct constraint_entry {
    std::string name;
    double value = 0;   // worst-case measured value
    double bound = 0;   // the requirement it is checked against
    bool pass = false;
};

struct constraint_report {
    std::vector<constraint_entry> entries;
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
};

// Design checks over z in [0, Z]: tip height change, inclination, radial margin
// positivity, achievable pitch, covered area (with the half-FOV radius credit).
constraint_report validate_design(const conic_profile& profile, const design_params& p,
                                  const requirement_spec& req);

}  // namespace conescan
