#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "conescan/errors.hpp"
#include "conescan/kinematics.hpp"
#include "conescan/planning.hpp"
#include "conescan/profile.hpp"

using namespace conescan;

namespace {
const design_params defaults;
constexpr double two_pi = 2.0 * std::numbers::pi;

conic_profile default_fit() { return fit_profile(generate_fit_samples(defaults, 6)); }

double sample_speed(const trajectory& traj, std::size_t i) {
    const auto& a = traj.samples[i];
    const auto& b = traj.samples[i + 1];
    return std::hypot(b.x - a.x, b.y - a.y) / (b.t - a.t);
}
}  // namespace

TEST_CASE("plan_spiral matches the arc-length schedule") {
    scan_plan plan = plan_spiral(0.15, 1.0, 0.38, 0.01);
    CHECK(plan.pattern == scan_pattern::spiral);
    CHECK(std::fabs(plan.traj.t_end() - 55.27) < 0.05);
    CHECK(std::fabs(plan.traj.t_end() - 55.0) < 3.0);

    // Constant linear speed after the first quarter turn.
    double quarter_r = 0.15 / 4.0;
    for (std::size_t i = 0; i + 1 < plan.traj.samples.size(); i += 25) {
        const auto& s = plan.traj.samples[i];
        if (std::hypot(s.x, s.y) < quarter_r)
            continue;
        CHECK(std::fabs(sample_speed(plan.traj, i) - 0.38) < 0.38 * 0.01);
    }

    // Outermost radius approaches the commanded extent.
    double max_r = 0.0;
    for (const auto& s : plan.traj.samples)
        max_r = std::max(max_r, std::hypot(s.x, s.y));
    CHECK(max_r <= 1.0 + 1e-9);
    CHECK(max_r > 0.999);
}

TEST_CASE("plan_spiral has exact pitch between turns") {
    scan_plan plan = plan_spiral(0.15, 1.0, 0.38, 0.01);
    coverage_result cov = coverage_report(plan.traj, 0.1);
    CHECK(std::fabs(cov.max_spacing - 0.15) < 1e-4);
    CHECK(cov.report.all_pass());
}

TEST_CASE("plan_spiral validations") {
    CHECK_THROWS_AS(plan_spiral(0.15, 1.0, 0.6, 0.01), constraint_error);  // speed limit
    CHECK_THROWS_AS(plan_spiral(0.25, 1.0, 0.38, 0.01), constraint_error);  // pitch limit
    CHECK_THROWS_AS(plan_spiral(-0.1, 1.0, 0.38, 0.01), parse_error);
    CHECK_THROWS_AS(plan_spiral(0.15, 1.0, 0.38, 0.0), parse_error);
    // Limits scale with the design scale.
    CHECK_NOTHROW(plan_spiral(0.75, 5.0, 1.9, 0.01, requirement_spec{}, 5.0));
    CHECK_THROWS_AS(plan_spiral(0.75, 5.0, 1.9, 0.01, requirement_spec{}, 1.0),
                    constraint_error);
}

TEST_CASE("plan_spiral scale covariance keeps the schedule") {
    scan_plan unit = plan_spiral(0.15, 1.0, 0.38, 0.01);
    scan_plan big = plan_spiral(0.75, 5.0, 1.9, 0.01, requirement_spec{}, 5.0);
    REQUIRE(unit.traj.samples.size() == big.traj.samples.size());
    CHECK(big.traj.scale == 5.0);
    for (std::size_t i = 0; i < unit.traj.samples.size(); i += 200) {
        CHECK(std::fabs(big.traj.samples[i].x - 5.0 * unit.traj.samples[i].x) < 1e-9);
        CHECK(std::fabs(big.traj.samples[i].y - 5.0 * unit.traj.samples[i].y) < 1e-9);
    }
}

TEST_CASE("plan_raster strokes and duration") {
    scan_plan plan = plan_raster(0.15, 2.0, 2.0, 0.38, 0.01);
    CHECK(plan.pattern == scan_pattern::raster);
    // ceil(2/0.15) + 1 = 15 strokes; path = 15*2 + 2 = 32 mm at 0.38 mm/s.
    CHECK(std::fabs(plan.traj.t_end() - 32.0 / 0.38) < 0.05);
    CHECK(std::fabs(plan.traj.t_end() - 84.0) < 1.5);

    // Count dwelled y-levels = strokes.
    std::map<long long, int> counts;
    for (const auto& s : plan.traj.samples)
        counts[llround(s.y * 1e7)]++;
    int levels = 0;
    for (const auto& [y, c] : counts)
        if (c >= 5)
            ++levels;
    CHECK(levels == 15);

    // Constant walking speed everywhere (instant corner turns).
    for (std::size_t i = 0; i + 1 < plan.traj.samples.size(); i += 17)
        CHECK(sample_speed(plan.traj, i) <= 0.38 + 1e-9);

    coverage_result cov = coverage_report(plan.traj, 0.1);
    CHECK(std::fabs(cov.max_spacing - 2.0 / 14.0) < 1e-6);
    CHECK(cov.report.all_pass());
}

TEST_CASE("constant_speed_cam_program shape") {
    conic_profile prof = default_fit();
    cam_program prog = constant_speed_cam_program(prof, defaults, 0.38);
    prog.validate();

    // Near the centre the required cam rate diverges; the cap must be active.
    CHECK(prog.setpoints.front().omega_cam == 3.0);
    // Forward phase: 6.4-6.7 turns in 55-65 s.
    CHECK(prog.forward_turns() > 6.4);
    CHECK(prog.forward_turns() < 6.7);
    CHECK(std::fabs(prog.forward_turns() - 6.6287) < 0.005);
    CHECK(prog.forward_duration() > 55.0);
    CHECK(prog.forward_duration() < 65.0);
    CHECK(std::fabs(prog.forward_duration() - 55.46) < 0.2);
    // Rewind completes in under 10 s and unwinds the full angle.
    CHECK(prog.rewind.present);
    CHECK(prog.rewind.duration < 10.0);
    CHECK(std::fabs(prog.rewind.omega * prog.rewind.duration - prog.forward_angle()) < 1e-9);
    // 24:11 speed-up from cam to motor.
    CHECK(prog.gear_ratio_motor_per_cam == 24.0 / 11.0);
}

TEST_CASE("constant_speed_cam_program holds tip speed off the cap") {
    conic_profile prof = default_fit();
    cam_program prog = constant_speed_cam_program(prof, defaults, 0.38);
    trajectory traj = simulate_scan(prog, prof, defaults, 0.01);

    std::size_t fwd = static_cast<std::size_t>(std::floor(prog.forward_duration() / 0.01));
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < fwd; ++i) {
        double t = static_cast<double>(i) * 0.01;
        if (prog.omega_at(t) >= 3.0 - 1e-9 || prog.omega_at(t + 0.01) >= 3.0 - 1e-9)
            continue;  // cap active: tip speed is allowed to sag
        worst = std::max(worst, std::fabs(sample_speed(traj, i) - 0.38) / 0.38);
    }
    CHECK(worst < 0.01);

    // Forward phase ends exactly when the deflection reaches full travel.
    std::size_t i_fwd = fwd;
    double r_end = std::hypot(traj.samples[i_fwd].x, traj.samples[i_fwd].y);
    CHECK(r_end >= defaults.Z - 1e-6);
    CHECK(r_end < defaults.Z + 0.002);

    // After the rewind the cam returns to the apex.
    const auto& last = traj.samples.back();
    CHECK(std::hypot(last.x, last.y) < 1e-9);
}

TEST_CASE("constant_speed_cam_program errors") {
    conic_profile prof = default_fit();
    CHECK_THROWS_AS(constant_speed_cam_program(prof, defaults, 0.6), constraint_error);
    CHECK_THROWS_AS(constant_speed_cam_program(prof, defaults, 0.38, 0.05),
                    constraint_error);  // cap too low to finish in max_duration
    CHECK_THROWS_AS(constant_speed_cam_program(prof, defaults, 0.38, 3.0, 0.0), parse_error);
}

TEST_CASE("cam_program omega_at interpolation") {
    cam_program prog;
    prog.setpoints = {{0.0, 3.0}, {1.0, 2.0}, {3.0, 1.0}};
    prog.rewind = {true, 2.0, 4.0};
    CHECK(prog.omega_at(0.0) == 3.0);
    CHECK(std::fabs(prog.omega_at(0.5) - 2.5) < 1e-12);
    CHECK(prog.omega_at(1.0) == 2.0);
    CHECK(std::fabs(prog.omega_at(2.0) - 1.5) < 1e-12);
    CHECK(prog.omega_at(3.0) == 1.0);
    CHECK(prog.omega_at(3.5) == -4.0);
    CHECK(prog.omega_at(5.0) == -4.0);
    CHECK(prog.omega_at(6.0) == 0.0);
    CHECK(std::fabs(prog.forward_angle() - (2.5 + 3.0)) < 1e-12);
    CHECK(std::fabs(prog.total_duration() - 5.0) < 1e-12);

    cam_program bad;
    CHECK_THROWS_AS(bad.validate(), parse_error);
    bad.setpoints = {{0.5, 1.0}};
    CHECK_THROWS_AS(bad.validate(), parse_error);
    bad.setpoints = {{0.0, -1.0}};
    CHECK_THROWS_AS(bad.validate(), parse_error);
}

TEST_CASE("coverage_report on the reference spiral") {
    scan_plan plan = plan_spiral(0.15, 0.91, 0.38, 0.01);
    coverage_result cov = coverage_report(plan.traj, 0.1);
    CHECK(std::fabs(cov.covered_area - 3.2) < 0.1);
    CHECK(cov.covered_area >= 3.0);
    CHECK(cov.report.all_pass());
}

TEST_CASE("coverage_report flags a coarse spiral") {
    requirement_spec loose;
    loose.max_pitch = 0.3;  // allow planning it; judge with the defaults
    scan_plan plan = plan_spiral(0.25, 1.0, 0.38, 0.01, loose);
    coverage_result cov = coverage_report(plan.traj, 0.1);
    CHECK(std::fabs(cov.max_spacing - 0.25) < 1e-3);
    CHECK(!cov.report.all_pass());
}

TEST_CASE("coverage_report flags an empty scan") {
    trajectory still;
    still.samples = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}};
    coverage_result cov = coverage_report(still, 0.1);
    CHECK(std::fabs(cov.covered_area - std::numbers::pi * 0.01) < 1e-9);
    CHECK(!cov.report.all_pass());
}
