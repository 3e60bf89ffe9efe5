#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conescan/errors.hpp"
#include "conescan/geometry.hpp"
#include "conescan/kinematics.hpp"
#include "conescan/profile.hpp"
#include "oracles.hpp"

using namespace conescan;

namespace {
const design_params defaults;

conic_profile default_fit() { return fit_profile(generate_fit_samples(defaults, 6)); }
}  // namespace

TEST_CASE("generate_fit_samples spans the travel with an apex anchor") {
    fit_sample_set set = generate_fit_samples(defaults, 6);
    REQUIRE(set.count() == 7);
    CHECK(set.pairs[0].z == 0.0);
    CHECK(set.pairs[0].d == 0.0);
    CHECK(set.pairs[0].s == 0.0);
    CHECK(std::fabs(set.pairs[0].f) < 1e-12);
    for (int i = 1; i <= 6; ++i) {
        const fit_sample& smp = set.pairs[static_cast<std::size_t>(i)];
        double z = i / 6.0;
        CHECK(std::fabs(smp.z - z) < 1e-12);
        CHECK(std::fabs(smp.d - defaults.eta / defaults.alpha * z) < 1e-12);
        contact_geometry c = contact_from_deflection(smp.z, smp.d, defaults);
        CHECK(smp.s == c.s);
        CHECK(smp.f == c.f);
    }
    CHECK_THROWS_AS(generate_fit_samples(defaults, 2), parse_error);
}

TEST_CASE("three samples are interpolated exactly") {
    fit_sample_set set;
    set.params = defaults;
    set.pairs = {{0.1, 0.5, 0.10, 0.70}, {0.2, 1.0, 0.25, 1.80}, {0.3, 1.5, 0.40, 3.10}};
    conic_profile prof = fit_profile(set);
    for (const auto& smp : set.pairs)
        CHECK(std::fabs(profile_eval(smp.s, prof).f - smp.f) < 1e-9);
}

TEST_CASE("a linear relation fits with zero curvature") {
    fit_sample_set set;
    set.params = defaults;
    for (double s : {0.1, 0.2, 0.3, 0.45})
        set.pairs.push_back({s, s, s, 2.0 * s});
    conic_profile prof = fit_profile(set);
    CHECK(std::fabs(prof.A) < 1e-9);
    CHECK(std::fabs(prof.B - 2.0) < 1e-9);
    CHECK(std::fabs(prof.C) < 1e-9);
}

TEST_CASE("degenerate sample sets are rejected") {
    fit_sample_set set;
    set.params = defaults;
    set.pairs = {{0.1, 0.5, 0.1, 0.7}, {0.2, 1.0, 0.2, 1.8}};
    CHECK_THROWS_AS(fit_profile(set), parse_error);

    set.pairs = {{0.1, 0.5, 0.2, 0.7}, {0.2, 1.0, 0.2, 1.8}, {0.3, 1.5, 0.2, 3.1}};
    CHECK_THROWS_AS(fit_profile(set), numeric_error);  // repeated abscissa
}

TEST_CASE("default fit coefficients") {
    conic_profile prof = default_fit();
    CHECK(std::fabs(prof.A - -3.916008681259) < 1e-7);
    CHECK(std::fabs(prof.B - 8.256025536023) < 1e-7);
    CHECK(std::fabs(prof.C - 0.022604977214) < 1e-7);
    CHECK(std::fabs(prof.s_max - 0.552718030) < 1e-6);
    CHECK(std::fabs(prof.f_max - 3.389529378) < 1e-5);
    CHECK(std::fabs(prof.f_max - 3.38) < 0.15);

    profile_value inside = profile_eval(0.3, prof);
    CHECK(!inside.extrapolated);
    profile_value outside = profile_eval(prof.s_max + 0.01, prof);
    CHECK(outside.extrapolated);
    CHECK(profile_eval(-0.01, prof).extrapolated);
}

TEST_CASE("least-squares optimality under coefficient perturbation") {
    fit_sample_set set = generate_fit_samples(defaults, 6);
    conic_profile prof = fit_profile(set);
    std::vector<double> ss, fs;
    for (const auto& smp : set.pairs) {
        ss.push_back(smp.s);
        fs.push_back(smp.f);
    }
    double e0 = oracle::fit_energy(ss, fs, prof.A, prof.B, prof.C);
    for (double eps : {1e-4, -1e-4}) {
        CHECK(oracle::fit_energy(ss, fs, prof.A + eps, prof.B, prof.C) >= e0 - 1e-15);
        CHECK(oracle::fit_energy(ss, fs, prof.A, prof.B + eps, prof.C) >= e0 - 1e-15);
        CHECK(oracle::fit_energy(ss, fs, prof.A, prof.B, prof.C + eps) >= e0 - 1e-15);
    }
    // Full brute-force grid around the solution.
    for (int ia = -3; ia <= 3; ++ia)
        for (int ib = -3; ib <= 3; ++ib)
            for (int ic = -3; ic <= 3; ++ic) {
                if (!ia && !ib && !ic)
                    continue;
                double e = oracle::fit_energy(ss, fs, prof.A + ia * 1e-4, prof.B + ib * 1e-4,
                                              prof.C + ic * 1e-4);
                CHECK(e >= e0 - 1e-15);
            }
}

TEST_CASE("fit closure: solving at the sample travels recovers the sample deflections") {
    conic_profile prof = default_fit();
    fit_sample_set set = generate_fit_samples(defaults, 6);
    // The quadratic cannot interpolate all seven samples; the residual ripple
    // maps to under 8 um of deflection error at the sample points.
    for (const auto& smp : set.pairs) {
        double z = solve_deflection(smp.d, prof, defaults);
        CHECK(std::fabs(z - smp.z) < 0.008);
    }
}

TEST_CASE("fit scale covariance") {
    conic_profile unit = default_fit();
    design_params big = defaults.scaled(5.0);
    conic_profile scaled = fit_profile(generate_fit_samples(big, 6));
    CHECK(std::fabs(scaled.A - unit.A / 5.0) < 1e-9);
    CHECK(std::fabs(scaled.B - unit.B) < 1e-9);
    CHECK(std::fabs(scaled.C - unit.C * 5.0) < 1e-9);
    CHECK(std::fabs(scaled.s_max - unit.s_max * 5.0) < 1e-5);
    CHECK(std::fabs(scaled.f_max - unit.f_max * 5.0) < 1e-4);
}

TEST_CASE("linearity report over the working range") {
    conic_profile prof = default_fit();
    linearity_report rep = make_linearity_report(prof, defaults, 200);
    CHECK(rep.in_range);
    CHECK(rep.residual_curve.size() >= 200);
    CHECK(std::fabs(rep.max_abs_residual - 0.007946242) < 2e-5);
    CHECK(rep.max_abs_residual < 0.01);
    CHECK_THROWS_AS(make_linearity_report(prof, defaults, 5), parse_error);
}

TEST_CASE("linearity degrades strictly beyond the working range") {
    conic_profile prof = default_fit();
    linearity_report in = make_linearity_report(prof, defaults, 200);
    linearity_report ext = make_linearity_report(prof, defaults, 260, 1.3);
    CHECK(!ext.in_range);
    CHECK(ext.max_abs_residual > in.max_abs_residual);

    // |residual| keeps growing once past d_max: compare the curve tails.
    auto tail_res = [&](double factor) {
        linearity_report r = make_linearity_report(prof, defaults, 200, factor);
        return std::fabs(r.residual_curve.back().second);
    };
    double r00 = tail_res(1.0);
    double r10 = tail_res(1.05);
    double r20 = tail_res(1.15);
    double r30 = tail_res(1.3);
    CHECK(r00 < r10);
    CHECK(r10 < r20);
    CHECK(r20 < r30);
}

TEST_CASE("validate_design passes the default design") {
    conic_profile prof = default_fit();
    constraint_report rep = validate_design(prof, defaults, requirement_spec{});
    CHECK(rep.all_pass());
    bool saw_height = false, saw_margin = false, saw_area = false;
    for (const auto& e : rep.entries) {
        if (e.name == "tip_height_change_mm") {
            saw_height = true;
            CHECK(std::fabs(e.value - 0.025015645) < 1e-8);
        }
        if (e.name == "radial_margin_min_mm") {
            saw_margin = true;
            CHECK(std::fabs(e.value - 0.074959142) < 1e-8);
        }
        if (e.name == "covered_area_mm2") {
            saw_area = true;
            CHECK(std::fabs(e.value - 3.801327) < 1e-4);
        }
    }
    CHECK(saw_height);
    CHECK(saw_margin);
    CHECK(saw_area);
}

TEST_CASE("validate_design flags a short lever arm") {
    design_params p = defaults;
    p.r = 5.0;  // inclination asin(1/5) = 11.54 deg breaks both limits
    conic_profile prof = fit_profile(generate_fit_samples(p, 6));
    constraint_report rep = validate_design(prof, p, requirement_spec{});
    CHECK(!rep.all_pass());
    for (const auto& e : rep.entries) {
        if (e.name == "inclination_deg") {
            CHECK(std::fabs(e.value - 11.5370) < 1e-3);
            CHECK(!e.pass);
        }
    }
}

TEST_CASE("validate_design flags a degenerate zero-travel design") {
    design_params p = defaults;
    p.Z = 0.0;  // bypasses validate(): geometric checks pass, area fails
    conic_profile prof = default_fit();
    constraint_report rep = validate_design(prof, p, requirement_spec{});
    CHECK(!rep.all_pass());
    for (const auto& e : rep.entries) {
        if (e.name == "covered_area_mm2") {
            CHECK(std::fabs(e.value - 0.031415927) < 1e-6);
            CHECK(!e.pass);
        }
        if (e.name == "tip_height_change_mm")
            CHECK(e.pass);
        if (e.name == "radial_margin_min_mm")
            CHECK(e.pass);
    }
}
